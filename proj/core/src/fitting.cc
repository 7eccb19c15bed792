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

#include "clustersim/fitting.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "clustersim/rng.h"
#include "json.hpp"

namespace clustersim {

namespace {

struct InnerFit {
    double A = 0;
    double B = 0;
    double C = 0;
    double chi2 = std::numeric_limits<double>::infinity();
    double var_B = 0;
    bool ok = false;
};

// d^(1/nu) per point, recomputed only when nu changes.
class Scales {
   public:
    explicit Scales(std::span<const FitPoint> pts) : pts_(pts), log_d_(pts.size()), scale_(pts.size()) {
        for (size_t i = 0; i < pts.size(); i++) {
            log_d_[i] = std::log(pts[i].d);
        }
    }
    std::span<const double> at(double nu) {
        if (nu != nu_) {
            nu_ = nu;
            for (size_t i = 0; i < pts_.size(); i++) {
                scale_[i] = std::exp(log_d_[i] / nu);
            }
        }
        return scale_;
    }
    std::span<const FitPoint> points() const {
        return pts_;
    }

   private:
    std::span<const FitPoint> pts_;
    std::vector<double> log_d_;
    std::vector<double> scale_;
    double nu_ = std::numeric_limits<double>::quiet_NaN();
};

// Weighted least squares for (A, B, C) at fixed (p_th, nu) via the 3x3
// normal equations, solved by Gauss-Jordan with partial pivoting. The
// inverse is kept for the parameter covariance.
InnerFit solve_inner(std::span<const FitPoint> pts, std::span<const double> scale, double p_th) {
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> rhs{};
    for (size_t k = 0; k < pts.size(); k++) {
        const FitPoint &pt = pts[k];
        const double x = (pt.p - p_th) * scale[k];
        const double w = 1.0 / (pt.sigma * pt.sigma);
        const double basis[3] = {1.0, x, x * x};
        for (int i = 0; i < 3; i++) {
            for (int j = 0; j < 3; j++) {
                m[i][j] += w * basis[i] * basis[j];
            }
            rhs[i] += w * basis[i] * pt.p_logical;
        }
    }
    double diag_max = 0;
    for (int i = 0; i < 3; i++) {
        diag_max = std::max(diag_max, std::abs(m[i][i]));
    }
    std::array<std::array<double, 6>, 3> aug{};
    for (int i = 0; i < 3; i++) {
        for (int j = 0; j < 3; j++) {
            aug[i][j] = m[i][j];
        }
        aug[i][3 + i] = 1.0;
    }
    InnerFit out;
    for (int col = 0; col < 3; col++) {
        int piv = col;
        for (int r = col + 1; r < 3; r++) {
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) {
                piv = r;
            }
        }
        if (!(std::abs(aug[piv][col]) > 1e-13 * diag_max)) {
            return out;
        }
        std::swap(aug[piv], aug[col]);
        const double inv = 1.0 / aug[col][col];
        for (double &v : aug[col]) {
            v *= inv;
        }
        for (int r = 0; r < 3; r++) {
            if (r != col) {
                const double f = aug[r][col];
                for (int j = 0; j < 6; j++) {
                    aug[r][j] -= f * aug[col][j];
                }
            }
        }
    }
    double coef[3];
    for (int i = 0; i < 3; i++) {
        coef[i] = 0;
        for (int j = 0; j < 3; j++) {
            coef[i] += aug[i][3 + j] * rhs[j];
        }
    }
    out.A = coef[0];
    out.B = coef[1];
    out.C = coef[2];
    out.var_B = aug[1][4];
    out.chi2 = 0;
    for (size_t k = 0; k < pts.size(); k++) {
        const FitPoint &pt = pts[k];
        const double x = (pt.p - p_th) * scale[k];
        const double r = (pt.p_logical - (out.A + out.B * x + out.C * x * x)) / pt.sigma;
        out.chi2 += r * r;
    }
    out.ok = std::isfinite(out.chi2);
    return out;
}

struct GridBest {
    double p_th = 0;
    double nu = 0;
    InnerFit fit;
};

GridBest grid_search(Scales &scales, double p_lo, double p_hi, double nu_lo, double nu_hi,
                     const FitOptions &options) {
    GridBest best;
    const int n = std::max(2, options.grid);
    double plo = p_lo;
    double phi = p_hi;
    double nlo = nu_lo;
    double nhi = nu_hi;
    for (int stage = 0; stage < std::max(1, options.stages); stage++) {
        const double dp = (phi - plo) / (n - 1);
        const double dn = (nhi - nlo) / (n - 1);
        for (int j = 0; j < n; j++) {
            const double nu = nlo + dn * j;
            const std::span<const double> scale = scales.at(nu);
            for (int i = 0; i < n; i++) {
                const double pt = plo + dp * i;
                InnerFit f = solve_inner(scales.points(), scale, pt);
                if (f.ok && f.chi2 < best.fit.chi2) {
                    best = {pt, nu, f};
                }
            }
        }
        if (!best.fit.ok) {
            break;
        }
        plo = std::max(p_lo, best.p_th - 2 * dp);
        phi = std::min(p_hi, best.p_th + 2 * dp);
        nlo = std::max(nu_lo, best.nu - 2 * dn);
        nhi = std::min(nu_hi, best.nu + 2 * dn);
    }
    return best;
}

// min over nu of chi^2 at fixed p_th.
double profile_chi2(Scales &scales, double p_th, const FitOptions &options) {
    double best = std::numeric_limits<double>::infinity();
    double best_nu = options.nu_min;
    const int n = 100;
    double lo = options.nu_min;
    double hi = options.nu_max;
    for (int stage = 0; stage < 3; stage++) {
        const double dn = (hi - lo) / (n - 1);
        for (int j = 0; j < n; j++) {
            const double nu = lo + dn * j;
            InnerFit f = solve_inner(scales.points(), scales.at(nu), p_th);
            if (f.ok && f.chi2 < best) {
                best = f.chi2;
                best_nu = nu;
            }
        }
        lo = std::max(options.nu_min, best_nu - 2 * dn);
        hi = std::min(options.nu_max, best_nu + 2 * dn);
    }
    return best;
}

double profile_sigma(Scales &scales, const GridBest &best, double p_lo, double p_hi,
                     const FitOptions &options) {
    const double chi_min = std::min(best.fit.chi2, profile_chi2(scales, best.p_th, options));
    const double step = (p_hi - p_lo) / 400;
    auto edge = [&](double dir) {
        double inside = best.p_th;
        double outside = best.p_th;
        bool crossed = false;
        for (int k = 1; k <= 400; k++) {
            const double cand = best.p_th + dir * step * k;
            if (cand < p_lo || cand > p_hi) {
                break;
            }
            if (profile_chi2(scales, cand, options) - chi_min >= 1.0) {
                outside = cand;
                crossed = true;
                break;
            }
            inside = cand;
        }
        if (!crossed) {
            return dir > 0 ? p_hi : p_lo;
        }
        for (int it = 0; it < 40; it++) {
            const double mid = 0.5 * (inside + outside);
            if (profile_chi2(scales, mid, options) - chi_min >= 1.0) {
                outside = mid;
            } else {
                inside = mid;
            }
        }
        return 0.5 * (inside + outside);
    };
    const double upper = edge(+1.0);
    const double lower = edge(-1.0);
    return 0.5 * (upper - lower);
}

}  // namespace

std::vector<FitPoint> fit_points(std::span<const SweepRecord> records, bool floor_zero_sigma) {
    std::vector<FitPoint> out;
    for (const SweepRecord &r : records) {
        FitPoint pt;
        pt.p = r.p_cz;
        pt.d = r.d_z;
        pt.p_logical = r.p_logical();
        pt.sigma = r.std_err();
        if (pt.sigma <= 0 && floor_zero_sigma && r.trials > 0) {
            const double n = static_cast<double>(r.trials);
            const double q = (static_cast<double>(r.failures) + 0.5) / (n + 1.0);
            pt.sigma = std::sqrt(q * (1 - q) / n);
        }
        out.push_back(pt);
    }
    return out;
}

namespace {

FitResult fit_impl(std::span<const FitPoint> points, const FitOptions &options, bool with_sigma) {
    std::set<double> ds;
    for (const FitPoint &pt : points) {
        if (!(pt.sigma > 0) || !std::isfinite(pt.sigma)) {
            throw std::invalid_argument("Every fit point needs a positive standard error.");
        }
        if (!(pt.d > 0)) {
            throw std::invalid_argument("Fit distances must be positive.");
        }
        ds.insert(pt.d);
    }
    if (ds.size() < 2) {
        throw std::invalid_argument("Threshold fit needs at least two distinct distances.");
    }
    if (points.size() < 6) {
        throw std::invalid_argument("Threshold fit needs at least six data points.");
    }
    if (!(options.nu_min > 0 && options.nu_max > options.nu_min)) {
        throw std::invalid_argument("Invalid nu search range.");
    }
    double p_lo = std::numeric_limits<double>::infinity();
    double p_hi = -std::numeric_limits<double>::infinity();
    for (const FitPoint &pt : points) {
        p_lo = std::min(p_lo, pt.p);
        p_hi = std::max(p_hi, pt.p);
    }
    if (!(p_hi > p_lo)) {
        throw std::invalid_argument("Threshold fit needs at least two distinct p values.");
    }
    Scales scales(points);
    GridBest best = grid_search(scales, p_lo, p_hi, options.nu_min, options.nu_max, options);
    if (!best.fit.ok) {
        throw DegenerateFit("Normal equations are ill-conditioned at every grid point.");
    }
    FitResult out;
    out.p_th = best.p_th;
    out.nu = best.nu;
    out.A = best.fit.A;
    out.B = best.fit.B;
    out.C = best.fit.C;
    out.chi2 = best.fit.chi2;
    out.sigma_B = std::sqrt(std::max(0.0, best.fit.var_B));
    out.n_points = points.size();
    out.p_min = p_lo;
    out.p_max = p_hi;
    for (double d : ds) {
        out.distances.push_back(static_cast<int>(d));
    }
    if (!(out.B > 0) || std::abs(out.B) <= 2 * out.sigma_B) {
        throw DegenerateFit("No threshold crossing: fitted slope B = " + std::to_string(out.B) +
                            " (sigma " + std::to_string(out.sigma_B) + ").");
    }
    if (with_sigma) {
        out.sigma_p_th = profile_sigma(scales, best, p_lo, p_hi, options);
    }
    return out;
}

}  // namespace

FitResult fit_points_threshold(std::span<const FitPoint> points, const FitOptions &options) {
    return fit_impl(points, options, true);
}

FitResult fit_threshold(std::span<const SweepRecord> records, const FitOptions &options) {
    std::vector<FitPoint> pts = fit_points(records, options.floor_zero_sigma);
    return fit_points_threshold(pts, options);
}

double bootstrap_sigma(std::span<const SweepRecord> records, const FitResult &fit, int n_boot, uint64_t seed,
                       const FitOptions &options) {
    if (n_boot < 2) {
        throw std::invalid_argument("bootstrap_sigma needs n_boot >= 2; the spread of one replicate is undefined.");
    }
    if (!(fit.sigma_p_th > 0)) {
        throw std::invalid_argument("bootstrap_sigma needs a valid fit.");
    }
    FitOptions replicate_options = options;
    replicate_options.floor_zero_sigma = true;
    std::vector<double> estimates;
    std::vector<SweepRecord> sample(records.begin(), records.end());
    for (int b = 0; b < n_boot; b++) {
        RngStream rng(seed, static_cast<uint64_t>(b));
        for (size_t i = 0; i < sample.size(); i++) {
            std::binomial_distribution<uint64_t> draw(records[i].trials, records[i].p_logical());
            sample[i].failures = draw(rng);
        }
        try {
            std::vector<FitPoint> pts = fit_points(sample, true);
            estimates.push_back(fit_impl(pts, replicate_options, false).p_th);
        } catch (const DegenerateFit &) {
            // Dropped replicate: no crossing in this resample.
        } catch (const std::invalid_argument &) {
            // Dropped replicate: all points collapsed onto a boundary.
        }
    }
    if (estimates.size() < 2) {
        throw DegenerateFit("Fewer than two bootstrap replicates produced a fit.");
    }
    double mean = 0;
    for (double e : estimates) {
        mean += e;
    }
    mean /= static_cast<double>(estimates.size());
    double var = 0;
    for (double e : estimates) {
        var += (e - mean) * (e - mean);
    }
    var /= static_cast<double>(estimates.size() - 1);
    return std::sqrt(var);
}

std::string fit_to_json(const FitResult &fit) {
    nlohmann::json j;
    j["p_th"] = fit.p_th;
    j["sigma_p_th"] = fit.sigma_p_th;
    j["nu"] = fit.nu;
    j["A"] = fit.A;
    j["B"] = fit.B;
    j["C"] = fit.C;
    j["sigma_B"] = fit.sigma_B;
    j["chi2"] = fit.chi2;
    j["n_points"] = fit.n_points;
    j["p_range"] = {fit.p_min, fit.p_max};
    j["distances"] = fit.distances;
    return j.dump(1);
}

}  // namespace clustersim
