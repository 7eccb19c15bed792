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

#ifndef CLUSTERSIM_VERIFICATION_H
#define CLUSTERSIM_VERIFICATION_H

#include <cstddef>
#include <string>
#include <vector>

#include "clustersim/lattice.h"

namespace clustersim {

struct VerifyOptions {
    std::vector<LatticeKind> lattices{LatticeKind::RHG, LatticeKind::XZZX};
    std::vector<Dims> dims{{2, 2, 2}, {3, 2, 3}, {3, 3, 3}};
    /// Chain identities are checked for n = 0..max_chain.
    int max_chain = 5;
    /// Test hook: drop one face from the first check so that the membership
    /// check must fail.
    bool corrupt_check = false;
};

struct VerifyReport {
    size_t checks_run = 0;
    std::vector<std::string> failures;

    bool ok() const {
        return failures.empty();
    }
    void merge(const VerifyReport &other);
};

/// Every check operator is in the stabilizer group of the prepared cluster,
/// the tableau has full rank, and the chain identities hold.
VerifyReport verify_stabilizers(const VerifyOptions &options);

/// Every single fault of every applicable noise model propagates to the
/// same final-state frame and syndrome as the dense tableau oracle.
VerifyReport verify_propagation(const VerifyOptions &options);

VerifyReport run_verification(const VerifyOptions &options);

}  // namespace clustersim

#endif
