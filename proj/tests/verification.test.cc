// Copyright 2026 The clustersim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clustersim/verification.h"

#include <gtest/gtest.h>

namespace clustersim {
namespace {

VerifyOptions small() {
    VerifyOptions options;
    options.dims = {{2, 2, 2}};
    options.max_chain = 3;
    return options;
}

TEST(Verification, SmallLatticesPass) {
    const VerifyReport report = run_verification(small());
    EXPECT_TRUE(report.ok());
    EXPECT_GT(report.checks_run, 1000u);
}

TEST(Verification, CorruptedCheckIsReported) {
    VerifyOptions options = small();
    options.corrupt_check = true;
    const VerifyReport report = verify_stabilizers(options);
    ASSERT_EQ(report.failures.size(), 1u);
    EXPECT_NE(report.failures[0].find("check 0 is not a stabilizer"), std::string::npos);
}

TEST(Verification, ReportsMerge) {
    VerifyReport a;
    a.checks_run = 2;
    VerifyReport b;
    b.checks_run = 3;
    b.failures = {"x"};
    a.merge(b);
    EXPECT_EQ(a.checks_run, 5u);
    EXPECT_FALSE(a.ok());
}

}  // namespace
}  // namespace clustersim
