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

#ifndef CLUSTERSIM_TOOLS_CLI_H
#define CLUSTERSIM_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

#include "clustersim/experiment.h"
#include "json.hpp"

namespace clustersim::cli {

enum ExitCode : int {
    kExitOk = 0,
    /// Bad arguments, bad config, I/O failures, insufficient fit data.
    kExitValidation = 1,
    /// A library invariant failed (verification mismatch, unmatchable
    /// syndrome, any unexpected internal error).
    kExitInvariant = 2,
};

/// Environment variable holding the default worker count.
inline constexpr const char *kWorkersEnv = "CLUSTERSIM_WORKERS";

/// Applies the keys of a sweep config document on top of `config`.
/// Recognised keys: lattice, model, eta, d_list, p_list, p_range
/// ({start, stop, count} or [start, stop, count]), trials, seed, output,
/// workers. Unknown keys and ill-typed values throw std::invalid_argument.
void apply_config(const nlohmann::json &doc, SweepConfig &config);

/// Parses "start,stop,count" into an inclusive linspace.
std::vector<double> parse_p_range(const std::string &text);

/// Runs the command line `args` (without the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace clustersim::cli

#endif
