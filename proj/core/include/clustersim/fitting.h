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

#ifndef CLUSTERSIM_FITTING_H
#define CLUSTERSIM_FITTING_H

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "clustersim/experiment.h"

namespace clustersim {

/// Thrown when the data show no crossing (non-positive or insignificant
/// linear term) or the linear solve is ill-conditioned.
class DegenerateFit : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct FitResult {
    double p_th = 0.0;
    double nu = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    /// Half-width of the chi^2_min + 1 interval of the p_th profile.
    double sigma_p_th = 0.0;
    double sigma_B = 0.0;
    double chi2 = 0.0;
    size_t n_points = 0;
    double p_min = 0.0;
    double p_max = 0.0;
    std::vector<int> distances;
};

/// One fit input: p_L = A + B x + C x^2 with x = (p - p_th) d^(1/nu).
struct FitPoint {
    double p = 0.0;
    double d = 0.0;
    double p_logical = 0.0;
    double sigma = 0.0;
};

struct FitOptions {
    double nu_min = 0.5;
    double nu_max = 2.0;
    int grid = 50;
    int stages = 3;
    /// Records with 0 or n_S failures have zero normal std-error. When set,
    /// such records use the standard error of (failures + 1/2) / (n_S + 1)
    /// instead of being rejected.
    bool floor_zero_sigma = false;
};

std::vector<FitPoint> fit_points(std::span<const SweepRecord> records, bool floor_zero_sigma);

/// Weighted finite-size-scaling fit. Grid search over (p_th, nu) with the
/// inner (A, B, C) solved by weighted linear least squares.
/// Throws std::invalid_argument on precondition failures and DegenerateFit
/// for fits without a crossing.
FitResult fit_threshold(std::span<const SweepRecord> records, const FitOptions &options = {});
FitResult fit_points_threshold(std::span<const FitPoint> points, const FitOptions &options = {});

/// Parametric bootstrap: each replicate redraws every record's failures from
/// Binomial(n_S, p_L) and refits. Returns the sample standard deviation of
/// p_th. Replicates whose fit is degenerate are dropped; throws if fewer
/// than two survive. Deterministic given seed.
double bootstrap_sigma(std::span<const SweepRecord> records, const FitResult &fit, int n_boot, uint64_t seed,
                       const FitOptions &options = {});

std::string fit_to_json(const FitResult &fit);

}  // namespace clustersim

#endif
