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

#include <benchmark/benchmark.h>

#include <vector>

#include "clustersim/decoder.h"
#include "clustersim/experiment.h"
#include "clustersim/matching.h"
#include "clustersim/noise.h"
#include "clustersim/rng.h"

namespace clustersim {
namespace {

NoiseParams circuit_z(double p_cz, Bias eta) {
    NoiseParams params{NoiseModel::CircuitZ, 0.0, eta};
    params.base_rate = invert_pcz(p_cz, params);
    return params;
}

void BM_FaultSampling(benchmark::State &state) {
    const Lattice lat = build_rhg({static_cast<int>(state.range(0)), static_cast<int>(state.range(0)),
                                   static_cast<int>(state.range(0))});
    FaultSampler sampler(lat, circuit_z(0.01, Bias(1.0)));
    std::vector<uint32_t> fired;
    uint64_t i = 0;
    for (auto _ : state) {
        RngStream rng(1, i++);
        sampler.sample(rng, fired);
        benchmark::DoNotOptimize(fired.data());
    }
    state.counters["locations"] = static_cast<double>(sampler.num_locations());
}
BENCHMARK(BM_FaultSampling)->Arg(5)->Arg(9);

void BM_MinWeightPerfectMatching(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    RngStream rng(2, 0);
    std::vector<MatchEdge> edges;
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            edges.push_back({i, j, quantize_weight(1.0 + 10.0 * rng.uniform())});
        }
    }
    BlossomMatcher matcher;
    for (auto _ : state) {
        benchmark::DoNotOptimize(matcher.min_weight_perfect_matching(n, edges));
    }
}
BENCHMARK(BM_MinWeightPerfectMatching)->Arg(10)->Arg(40)->Arg(100);

void BM_Dijkstra(benchmark::State &state) {
    const Lattice lat = build_rhg({9, 9, 9});
    const DecodingGraph graph = build_graph(lat, circuit_z(0.01, Bias(1.0)));
    ShortestPaths sp;
    uint32_t source = 0;
    const CsrGraph &g = graph.sector_graph(Sector::Primal);
    for (auto _ : state) {
        dijkstra(g, source, sp);
        source = (source + 37) % g.num_nodes();
    }
}
BENCHMARK(BM_Dijkstra);

void BM_Trial(benchmark::State &state, LatticeKind kind, Dims dims, double p_cz, Bias eta) {
    const Lattice lat = build_lattice(kind, dims);
    const PointEngine engine(lat, circuit_z(p_cz, eta));
    PointEngine::Workspace ws(engine);
    uint64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(engine.run_trial(3, i++, ws));
    }
}
BENCHMARK_CAPTURE(BM_Trial, rhg_d5_below, LatticeKind::RHG, Dims{5, 5, 5}, 0.006, Bias(1.0));
BENCHMARK_CAPTURE(BM_Trial, rhg_d9_threshold, LatticeKind::RHG, Dims{9, 9, 9}, 0.009, Bias(1.0));
BENCHMARK_CAPTURE(BM_Trial, xzzx_d12_high_bias, LatticeKind::XZZX, Dims{4, 12, 12}, 0.022, Bias(1e4));

}  // namespace
}  // namespace clustersim

BENCHMARK_MAIN();
