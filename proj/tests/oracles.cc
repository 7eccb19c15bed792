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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace clustersim::testing {

namespace {

double best_completion(int n, const std::vector<double> &w, std::vector<uint8_t> &used) {
    int first = -1;
    for (int i = 0; i < n; i++) {
        if (!used[i]) {
            first = i;
            break;
        }
    }
    if (first < 0) {
        return 0.0;
    }
    used[first] = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = first + 1; j < n; j++) {
        if (used[j]) {
            continue;
        }
        used[j] = 1;
        best = std::min(best, w[first * n + j] + best_completion(n, w, used));
        used[j] = 0;
    }
    used[first] = 0;
    return best;
}

}  // namespace

double brute_force_min_matching(int n, const std::vector<double> &w) {
    if (n % 2 != 0) {
        throw std::invalid_argument("brute_force_min_matching needs an even vertex count.");
    }
    std::vector<uint8_t> used(n, 0);
    return best_completion(n, w, used);
}

double matching_weight(int n, const std::vector<double> &w, const std::vector<int32_t> &mate) {
    double total = 0;
    for (int i = 0; i < n; i++) {
        if (mate[i] < 0) {
            return std::numeric_limits<double>::infinity();
        }
        if (mate[i] > i) {
            total += w[i * n + mate[i]];
        }
    }
    return total;
}

std::vector<double> floyd_warshall(uint32_t n, const std::vector<CsrGraph::Edge> &edges) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(static_cast<size_t>(n) * n, inf);
    for (uint32_t i = 0; i < n; i++) {
        d[i * n + i] = 0;
    }
    for (const auto &e : edges) {
        d[e.a * n + e.b] = std::min(d[e.a * n + e.b], e.weight);
        d[e.b * n + e.a] = std::min(d[e.b * n + e.a], e.weight);
    }
    for (uint32_t k = 0; k < n; k++) {
        for (uint32_t i = 0; i < n; i++) {
            for (uint32_t j = 0; j < n; j++) {
                d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
            }
        }
    }
    return d;
}

double random_quantized_weight(RngStream &rng, double max) {
    const uint64_t steps = static_cast<uint64_t>(max / kWeightQuantum);
    return static_cast<double>(1 + rng() % steps) * kWeightQuantum;
}

std::vector<CsrGraph::Edge> random_sparse_graph(RngStream &rng, uint32_t n, double density) {
    std::vector<CsrGraph::Edge> edges;
    for (uint32_t a = 0; a < n; a++) {
        for (uint32_t b = a + 1; b < n; b++) {
            if (rng.uniform() < density) {
                edges.push_back({a, b, random_quantized_weight(rng, 10.0), static_cast<MembraneMask>(rng() & 0xF)});
            }
        }
    }
    return edges;
}

std::vector<SweepRecord> synthetic_records(const PlantedModel &model, const std::vector<int> &distances,
                                           const std::vector<double> &ps, uint64_t trials, uint64_t seed) {
    std::vector<SweepRecord> out;
    uint64_t stream = 0;
    for (int d : distances) {
        for (double p : ps) {
            const double x = (p - model.p_th) * std::pow(d, 1.0 / model.nu);
            const double pl = std::clamp(model.A + model.B * x + model.C * x * x, 0.0, 1.0);
            RngStream rng(seed, stream++);
            std::binomial_distribution<uint64_t> draw(trials, pl);
            SweepRecord r;
            r.d_z = d;
            r.dims = {d, d, d};
            r.p_cz = p;
            r.trials = trials;
            r.failures = draw(rng);
            r.seed = seed;
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace clustersim::testing
