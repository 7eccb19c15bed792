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

#include "clustersim/decoder.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "clustersim/rng.h"
#include "json.hpp"
#include "oracles.h"

namespace clustersim {
namespace {

struct Built {
    Lattice lattice;
    std::vector<FaultEvent> events;
    EventEffects effects;
    DecodingGraph graph;
};

Built build(LatticeKind kind, Dims dims, NoiseParams params, GraphOptions options = {}) {
    Lattice lat = build_lattice(kind, dims);
    auto events = enumerate_events(lat, params);
    EventEffects effects(lat, events);
    DecodingGraph graph(lat, events, effects, options);
    return Built{std::move(lat), std::move(events), std::move(effects), std::move(graph)};
}

TEST(QuantizeWeight, RoundsToQuantum) {
    EXPECT_EQ(quantize_weight(1.0), 1.0);
    EXPECT_EQ(quantize_weight(kWeightQuantum * 3.4), kWeightQuantum * 3);
    EXPECT_TRUE(std::isinf(quantize_weight(kInfiniteWeight)));
}

TEST(Dijkstra, MatchesFloydWarshallOnRandomGraphs) {
    for (uint64_t trial = 0; trial < 200; trial++) {
        RngStream rng(41, trial);
        const uint32_t n = 2 + static_cast<uint32_t>(rng() % 11);
        const auto edges = testing::random_sparse_graph(rng, n, 0.3);
        const CsrGraph g(n, edges);
        const auto fw = testing::floyd_warshall(n, edges);
        ShortestPaths sp;
        for (uint32_t s = 0; s < n; s++) {
            dijkstra(g, s, sp);
            for (uint32_t t = 0; t < n; t++) {
                ASSERT_EQ(sp.dist[t], fw[s * n + t]) << "trial " << trial;
                const auto path = sp.path_to(t);
                if (std::isinf(sp.dist[t])) {
                    EXPECT_TRUE(path.empty());
                    continue;
                }
                ASSERT_EQ(path.front(), s);
                ASSERT_EQ(path.back(), t);
                // Path weight and mask are consistent with the edges used.
                double total = 0;
                MembraneMask mask = 0;
                for (size_t i = 1; i < path.size(); i++) {
                    double best = kInfiniteWeight;
                    MembraneMask m = 0;
                    for (const auto &arc : g.neighbors(path[i - 1])) {
                        if (arc.node == path[i] && arc.weight < best) {
                            best = arc.weight;
                            m = arc.logical;
                        }
                    }
                    total += best;
                    mask ^= m;
                }
                EXPECT_EQ(total, sp.dist[t]);
                EXPECT_EQ(mask, sp.mask[t]);
            }
        }
    }
}

TEST(Dijkstra, EarlyExitSettlesTargets) {
    RngStream rng(42, 0);
    const uint32_t n = 12;
    const auto edges = testing::random_sparse_graph(rng, n, 0.4);
    const CsrGraph g(n, edges);
    const auto fw = testing::floyd_warshall(n, edges);
    ShortestPaths sp;
    std::vector<uint32_t> targets{3, 7};
    dijkstra(g, 0, sp, targets);
    for (uint32_t t : targets) {
        EXPECT_EQ(sp.dist[t], fw[t]);
    }
}

TEST(DecodingGraph, EdgesStayWithinOneSectorWithPositiveWeights) {
    Built b = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(10.0)});
    ASSERT_FALSE(b.graph.edges().empty());
    for (const GraphEdge &e : b.graph.edges()) {
        EXPECT_EQ(b.lattice.check_sector(e.a), b.lattice.check_sector(e.b));
        EXPECT_LT(e.a, e.b);
        EXPECT_GT(e.weight, 0.0);
        EXPECT_TRUE(std::isfinite(e.weight));
        EXPECT_EQ(e.weight, quantize_weight(-std::log(e.probability)));
        EXPECT_EQ(e.logical & ~b.graph.sector_mask(b.lattice.check_sector(e.a)), 0);
    }
}

TEST(DecodingGraph, RepresentativeFlipsItsEndpoints) {
    for (LatticeKind kind : {LatticeKind::RHG, LatticeKind::XZZX}) {
        Built b = build(kind, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(3.0)});
        for (const GraphEdge &e : b.graph.edges()) {
            const Sector s = b.lattice.check_sector(e.a);
            std::vector<uint32_t> in_sector;
            for (uint32_t c : b.effects.checks(e.representative)) {
                if (b.lattice.check_sector(c) == s) {
                    in_sector.push_back(c);
                }
            }
            EXPECT_EQ(in_sector, (std::vector<uint32_t>{e.a, e.b}));
            EXPECT_EQ(e.logical, b.effects.logical(e.representative) & b.graph.sector_mask(s));
        }
    }
}

TEST(DecodingGraph, ProbabilitiesArePlainSumsOfTwoCheckEvents) {
    for (bool xor_combine : {false, true}) {
        GraphOptions options;
        options.xor_combine = xor_combine;
        Built b = build(LatticeKind::XZZX, {2, 3, 2}, {NoiseModel::CircuitZ, 0.01, Bias(2.0)}, options);
        std::map<std::pair<uint32_t, uint32_t>, double> expect;
        std::map<std::pair<uint32_t, uint32_t>, double> best;
        for (size_t i = 0; i < b.events.size(); i++) {
            for (Sector s : {Sector::Primal, Sector::Dual}) {
                std::vector<uint32_t> cs;
                for (uint32_t c : b.effects.checks(i)) {
                    if (b.lattice.check_sector(c) == s) {
                        cs.push_back(c);
                    }
                }
                if (cs.size() != 2) {
                    continue;
                }
                double &acc = expect[{cs[0], cs[1]}];
                const double p = b.events[i].probability;
                acc = xor_combine ? acc + p - 2 * acc * p : acc + p;
                best[{cs[0], cs[1]}] = std::max(best[{cs[0], cs[1]}], p);
            }
        }
        ASSERT_EQ(b.graph.edges().size(), expect.size());
        for (const GraphEdge &e : b.graph.edges()) {
            EXPECT_DOUBLE_EQ(e.probability, (expect[{e.a, e.b}]));
            EXPECT_EQ(b.events[e.representative].probability, (best[{e.a, e.b}]));
        }
    }
}

TEST(DecodingGraph, LikelyEdgesAreLighter) {
    // At infinite bias only Z-fault edges exist; at finite bias the extra
    // edges fed purely by p/eta terms are heavier than every Z-fed edge.
    Built zonly = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.001, Bias::infinite()});
    Built biased = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.001, Bias(1000.0)});
    std::set<std::pair<uint32_t, uint32_t>> z_edges;
    double heaviest_z = 0;
    for (const GraphEdge &e : zonly.graph.edges()) {
        z_edges.insert({e.a, e.b});
    }
    double lightest_other = kInfiniteWeight;
    for (const GraphEdge &e : biased.graph.edges()) {
        if (z_edges.count({e.a, e.b})) {
            heaviest_z = std::max(heaviest_z, e.weight);
        } else {
            lightest_other = std::min(lightest_other, e.weight);
        }
    }
    ASSERT_TRUE(std::isfinite(lightest_other));
    EXPECT_LT(heaviest_z, lightest_other);
}

TEST(DecodingGraph, XzzxInfiniteBiasSplitsIntoPlanes) {
    Built b = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias::infinite()});
    for (Sector s : {Sector::Primal, Sector::Dual}) {
        const auto labels = b.graph.component_labels(s);
        std::map<uint32_t, std::set<int>> planes;
        for (uint32_t local = 0; local < labels.size(); local++) {
            const uint32_t id = local + b.lattice.check_offset(s);
            planes[labels[local]].insert(b.lattice.checks()[id].center.u);
        }
        EXPECT_GE(planes.size(), static_cast<size_t>(b.lattice.dims().u));
        for (const auto &[label, us] : planes) {
            EXPECT_EQ(us.size(), 1u);
        }
    }
}

TEST(DecodingGraph, RhgInfiniteBiasStaysConnected) {
    Built b = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias::infinite()});
    for (Sector s : {Sector::Primal, Sector::Dual}) {
        const auto labels = b.graph.component_labels(s);
        EXPECT_EQ(std::set<uint32_t>(labels.begin(), labels.end()).size(), 1u);
    }
}

TEST(BuildGraph, RejectsNoiselessParameters) {
    Lattice lat = build_rhg({2, 2, 2});
    EXPECT_THROW(build_graph(lat, {NoiseModel::CircuitZ, 0.0, Bias(1.0)}), std::invalid_argument);
}

TEST(PairWeights, AdjacentChecksUseTheirEdge) {
    Built b = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::Phenomenological, 0.01, Bias(10.0)});
    const GraphEdge &e = b.graph.edges().front();
    std::vector<uint32_t> t{e.a, e.b};
    PairWeights pw = pair_weights(b.graph, t);
    EXPECT_EQ(pw.w(0, 1), e.weight);
    EXPECT_EQ(pw.w(0, 0), 0.0);
    EXPECT_EQ(pw.path(b.graph, 0, 1), (std::vector<uint32_t>{e.a, e.b}));
}

TEST(PairWeights, IsAMetric) {
    Built b = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(5.0)});
    std::vector<uint32_t> t;
    for (uint32_t c = b.lattice.check_offset(Sector::Dual); c < b.lattice.checks().size(); c += 3) {
        t.push_back(c);
    }
    PairWeights pw = pair_weights(b.graph, t);
    const size_t k = t.size();
    for (size_t i = 0; i < k; i++) {
        for (size_t j = 0; j < k; j++) {
            EXPECT_EQ(pw.w(i, j), pw.w(j, i));
            for (size_t m = 0; m < k; m++) {
                EXPECT_LE(pw.w(i, j), pw.w(i, m) + pw.w(m, j));
            }
        }
    }
}

TEST(PairWeights, UnreachableAcrossInfiniteBiasPlanes) {
    Built b = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias::infinite()});
    uint32_t a = 0;
    uint32_t other = 0;
    for (const CellCheck &c : b.lattice.checks()) {
        if (c.sector == Sector::Primal && c.center.u != b.lattice.checks()[a].center.u) {
            other = c.id;
            break;
        }
    }
    std::vector<uint32_t> t{a, other};
    EXPECT_TRUE(std::isinf(pair_weights(b.graph, t).w(0, 1)));
}

TEST(PairWeights, RejectsMixedSectors) {
    Built b = build(LatticeKind::RHG, {2, 2, 2}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    std::vector<uint32_t> t{0, b.lattice.check_offset(Sector::Dual)};
    EXPECT_THROW(pair_weights(b.graph, t), std::invalid_argument);
}

TEST(Match, EmptySyndrome) {
    Built b = build(LatticeKind::RHG, {2, 2, 2}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    MatchingResult r = match(b.graph, Syndrome{});
    EXPECT_TRUE(r.pairs.empty());
    EXPECT_EQ(r.total_weight, 0.0);
    EXPECT_EQ(r.correction_logical_bits, 0);
}

TEST(Match, TwoChecksFormTheOnlyPair) {
    Built b = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    std::vector<uint32_t> t{1, 17};
    MatchingResult r = match(b.graph, Syndrome{t});
    ASSERT_EQ(r.pairs.size(), 1u);
    EXPECT_EQ(r.pairs[0], std::make_pair(1u, 17u));
    EXPECT_EQ(r.total_weight, pair_weights(b.graph, t).w(0, 1));
}

TEST(Match, OddSectorCountIsInvariantViolation) {
    Built b = build(LatticeKind::RHG, {2, 2, 2}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    EXPECT_THROW(match(b.graph, Syndrome{{0, 1, 2}}), InvariantViolation);
}

TEST(Match, UnmatchablePlanesAreInvariantViolation) {
    Built b = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias::infinite()});
    // One check in each of two different planes.
    uint32_t other = 0;
    for (const CellCheck &c : b.lattice.checks()) {
        if (c.sector == Sector::Primal && c.center.u != b.lattice.checks()[0].center.u) {
            other = c.id;
            break;
        }
    }
    EXPECT_THROW(match(b.graph, Syndrome{{0, other}}), InvariantViolation);
}

TEST(Match, RandomSyndromesMatchBruteForce) {
    Built b = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(2.0)});
    for (uint64_t trial = 0; trial < 100; trial++) {
        RngStream rng(43, trial);
        const size_t k = 2 * (1 + rng() % 5);
        std::set<uint32_t> chosen;
        while (chosen.size() < k) {
            chosen.insert(static_cast<uint32_t>(rng() % b.graph.nodes_per_sector()));
        }
        std::vector<uint32_t> t(chosen.begin(), chosen.end());
        PairWeights pw = pair_weights(b.graph, t);
        const MatchingResult r = match(b.graph, Syndrome{t});
        ASSERT_EQ(r.pairs.size(), k / 2);
        EXPECT_EQ(r.total_weight, testing::brute_force_min_matching(static_cast<int>(k), pw.weight));
        double sum = 0;
        MembraneMask mask = 0;
        for (const auto &[x, y] : r.pairs) {
            const size_t i = std::find(t.begin(), t.end(), x) - t.begin();
            const size_t j = std::find(t.begin(), t.end(), y) - t.begin();
            sum += pw.w(i, j);
            mask ^= pw.mask[i * k + j];
        }
        EXPECT_EQ(sum, r.total_weight);
        EXPECT_EQ(mask, r.correction_logical_bits);
    }
}

TEST(Decoder, CachedAndUncachedDistancesAgree) {
    GraphOptions no_cache;
    no_cache.apsp_node_limit = 0;
    Built cached = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.02, Bias(3.0)});
    Built direct = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.02, Bias(3.0)}, no_cache);
    ASSERT_TRUE(cached.graph.has_distance_cache(Sector::Primal));
    ASSERT_FALSE(direct.graph.has_distance_cache(Sector::Primal));
    Decoder a(cached.graph);
    Decoder d(direct.graph);
    NoiseParams params{NoiseModel::CircuitZ, 0.02, Bias(3.0)};
    for (uint64_t trial = 0; trial < 200; trial++) {
        RngStream rng(44, trial);
        const auto faults = sample_faults(cached.lattice, params, rng);
        const Syndrome s = syndrome(cached.lattice, propagate(cached.lattice, faults));
        const MatchingResult ra = a.decode(s.flipped_checks);
        const MatchingResult rd = d.decode(s.flipped_checks);
        EXPECT_EQ(ra.total_weight, rd.total_weight);
        EXPECT_EQ(ra.correction_logical_bits, rd.correction_logical_bits);
    }
}

TEST(DecodeTrial, NoFaultsNoFailure) {
    Built b = build(LatticeKind::RHG, {2, 2, 2}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    EXPECT_EQ(decode_trial(b.graph, b.lattice, FlipFrame{}), 0);
}

TEST(DecodeTrial, EverySingleFaultIsCorrected) {
    for (LatticeKind kind : {LatticeKind::RHG, LatticeKind::XZZX}) {
        for (NoiseModel model : {NoiseModel::CircuitZ, NoiseModel::Phenomenological}) {
            Built b = build(kind, {3, 3, 3}, {model, 0.01, Bias(1.0)});
            Decoder dec(b.graph);
            for (size_t i = 0; i < b.events.size(); i++) {
                const auto checks = b.effects.checks(i);
                const MatchingResult r = dec.decode(checks);
                ASSERT_EQ(r.correction_logical_bits, b.effects.logical(i))
                    << lattice_kind_name(kind) << " event " << i << " " << b.events[i].pauli.str();
            }
        }
    }
    // The same on the short-axis shape used at high bias.
    Built b = build(LatticeKind::XZZX, {3, 9, 9}, {NoiseModel::CircuitZ, 0.01, Bias(100.0)});
    Decoder dec(b.graph);
    for (size_t i = 0; i < b.events.size(); i++) {
        if (b.effects.checks(i).size() == 2) {
            ASSERT_EQ(dec.decode(b.effects.checks(i)).correction_logical_bits, b.effects.logical(i)) << i;
        }
    }
}

TEST(DecodeTrial, SingleFinalZIsCorrected) {
    Built b = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    for (const QubitSpec &q : b.lattice.qubits()) {
        FaultEvent e{{LocationKind::Meas, q.id}, PauliFrame{{q.id, Pauli::Z}}, 0.01};
        const FlipFrame f = propagate(b.lattice, std::span(&e, 1));
        EXPECT_EQ(decode_trial(b.graph, b.lattice, f), 0);
    }
}

TEST(DecodeTrial, NonContractibleSheetIsAFailure) {
    Built b = build(LatticeKind::RHG, {2, 2, 2}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    // Primal chain of faces wrapping the u axis.
    FlipFrame f;
    for (int u = 0; u < 4; u += 2) {
        f.flipped.push_back(static_cast<QubitId>(b.lattice.qubit_at({u, 1, 1})));
    }
    std::sort(f.flipped.begin(), f.flipped.end());
    EXPECT_TRUE(syndrome(b.lattice, f).flipped_checks.empty());
    EXPECT_EQ(decode_trial(b.graph, b.lattice, f), 1u);
}

TEST(ExportGraph, ListsNodesEdgesAndComponents) {
    Built b = build(LatticeKind::XZZX, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias::infinite()});
    auto doc = nlohmann::json::parse(export_graph(b.graph, b.lattice));
    EXPECT_EQ(doc["nodes"].size(), b.lattice.checks().size());
    EXPECT_EQ(doc["edges"].size(), b.graph.edges().size());
    EXPECT_GE(doc["components"]["primal"]["count"].get<int>(), 3);
    Built r = build(LatticeKind::RHG, {3, 3, 3}, {NoiseModel::CircuitZ, 0.01, Bias(1.0)});
    auto rdoc = nlohmann::json::parse(export_graph(r.graph, r.lattice));
    EXPECT_EQ(rdoc["components"]["primal"]["count"].get<int>(), 1);
    EXPECT_EQ(rdoc["components"]["dual"]["count"].get<int>(), 1);
}

}  // namespace
}  // namespace clustersim
