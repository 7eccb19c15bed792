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

#ifndef CLUSTERSIM_DECODER_H
#define CLUSTERSIM_DECODER_H

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "clustersim/lattice.h"
#include "clustersim/matching.h"
#include "clustersim/noise.h"
#include "clustersim/propagation.h"

namespace clustersim {

inline constexpr double kInfiniteWeight = std::numeric_limits<double>::infinity();

/// Rounds a weight to the matcher's quantum (2^-20). Sums of quantized
/// weights are exact in double precision, so shortest-path values do not
/// depend on summation order.
double quantize_weight(double w);

/// Weighted undirected graph in CSR form with a logical mask per edge.
class CsrGraph {
   public:
    struct Arc {
        uint32_t node;
        double weight;
        MembraneMask logical;
    };
    struct Edge {
        uint32_t a;
        uint32_t b;
        double weight;
        MembraneMask logical;
    };

    CsrGraph() = default;
    CsrGraph(uint32_t num_nodes, std::span<const Edge> edges);

    uint32_t num_nodes() const {
        return static_cast<uint32_t>(offsets_.size() - 1);
    }
    std::span<const Arc> neighbors(uint32_t node) const {
        return {arcs_.data() + offsets_[node], offsets_[node + 1] - offsets_[node]};
    }

   private:
    std::vector<uint32_t> offsets_{0};
    std::vector<Arc> arcs_;
};

/// Single-source shortest paths. `mask[v]` is the XOR of edge logical masks
/// along the recovered path; `pred[v]` is -1 for the source and unreachable
/// nodes.
struct ShortestPaths {
    std::vector<double> dist;
    std::vector<int32_t> pred;
    std::vector<MembraneMask> mask;

    /// Node sequence source -> v, empty if unreachable.
    std::vector<uint32_t> path_to(uint32_t v) const;
};

/// Dijkstra from `source`. If `targets` is non-empty the search stops once
/// every target is settled.
void dijkstra(const CsrGraph &graph, uint32_t source, ShortestPaths &out, std::span<const uint32_t> targets = {});

struct GraphOptions {
    /// Combine parallel mechanisms as p1 + p2 - 2 p1 p2 instead of p1 + p2.
    bool xor_combine = false;
    /// Sectors with at most this many checks cache all-pairs distances.
    uint32_t apsp_node_limit = 2500;
};

/// Local edge between two checks of one sector.
struct GraphEdge {
    uint32_t a = 0;
    uint32_t b = 0;
    double probability = 0.0;
    double weight = 0.0;
    MembraneMask logical = 0;
    /// Index into enumerate_events of the dominant contributing event.
    uint32_t representative = 0;
};

/// Decoding graph: nodes are checks (global check ids), one independent
/// subgraph per sector.
class DecodingGraph {
   public:
    DecodingGraph(const Lattice &lattice, std::span<const FaultEvent> events, const EventEffects &effects,
                  const GraphOptions &options = {});

    uint32_t num_nodes() const {
        return 2 * per_sector_;
    }
    uint32_t nodes_per_sector() const {
        return per_sector_;
    }
    const std::vector<GraphEdge> &edges() const {
        return edges_;
    }
    const CsrGraph &sector_graph(Sector s) const {
        return sector_graphs_[static_cast<int>(s)];
    }
    /// Membrane bits belonging to a sector.
    MembraneMask sector_mask(Sector s) const {
        return sector_masks_[static_cast<int>(s)];
    }
    Sector node_sector(uint32_t node) const {
        return node < per_sector_ ? Sector::Primal : Sector::Dual;
    }
    uint32_t local_index(uint32_t node) const {
        return node < per_sector_ ? node : node - per_sector_;
    }

    bool has_distance_cache(Sector s) const {
        return !apsp_dist_[static_cast<int>(s)].empty();
    }
    /// Cached distance / path mask between local node indices of a sector.
    double cached_distance(Sector s, uint32_t a, uint32_t b) const {
        return apsp_dist_[static_cast<int>(s)][static_cast<size_t>(a) * per_sector_ + b];
    }
    MembraneMask cached_mask(Sector s, uint32_t a, uint32_t b) const {
        return apsp_mask_[static_cast<int>(s)][static_cast<size_t>(a) * per_sector_ + b];
    }

    /// Connected-component label per local node of a sector (isolated nodes
    /// get their own label).
    std::vector<uint32_t> component_labels(Sector s) const;

   private:
    uint32_t per_sector_ = 0;
    std::vector<GraphEdge> edges_;
    std::array<CsrGraph, 2> sector_graphs_;
    std::array<MembraneMask, 2> sector_masks_{};
    std::array<std::vector<double>, 2> apsp_dist_;
    std::array<std::vector<MembraneMask>, 2> apsp_mask_;
};

/// Enumerates events, precomputes their effects and builds the graph.
/// Throws std::invalid_argument if the noise produces no fault events.
DecodingGraph build_graph(const Lattice &lattice, const NoiseParams &params, const GraphOptions &options = {});

/// Terminal-to-terminal shortest-path weights within one sector.
struct PairWeights {
    std::vector<uint32_t> terminals;
    /// Row-major k x k; +inf for unreachable pairs.
    std::vector<double> weight;
    std::vector<MembraneMask> mask;
    /// Shortest-path trees rooted at each terminal, over local node indices.
    std::vector<ShortestPaths> trees;

    double w(size_t i, size_t j) const {
        return weight[i * terminals.size() + j];
    }
    /// Global check ids along a minimizing path between terminals i and j.
    std::vector<uint32_t> path(const DecodingGraph &graph, size_t i, size_t j) const;
};

/// Terminals are global check ids, all in one sector.
PairWeights pair_weights(const DecodingGraph &graph, std::span<const uint32_t> terminals);

struct MatchingResult {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    double total_weight = 0.0;
    MembraneMask correction_logical_bits = 0;
};

/// Thrown when a decoder invariant fails (odd defect count in a sector or no
/// perfect matching); signals a propagation bug.
class InvariantViolation : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Per-thread decoding engine with reusable buffers.
class Decoder {
   public:
    explicit Decoder(const DecodingGraph &graph);

    /// `flipped_checks` are global check ids, sorted. Matched pairs are
    /// only listed when `record_pairs` is set.
    MatchingResult decode(std::span<const uint32_t> flipped_checks, bool record_pairs = false);

   private:
    void decode_sector(Sector s, std::span<const uint32_t> terminals, bool record_pairs, MatchingResult &out);

    const DecodingGraph &graph_;
    BlossomMatcher matcher_;
    std::vector<MatchEdge> match_edges_;
    std::vector<double> dist_;
    std::vector<MembraneMask> mask_;
    ShortestPaths tree_;
    std::vector<uint32_t> local_terminals_;
};

MatchingResult match(const DecodingGraph &graph, const Syndrome &syndrome);

/// Failure bit per membrane: actual logical flips XOR correction bits.
MembraneMask decode_trial(const DecodingGraph &graph, const Lattice &lattice, const FlipFrame &frame);

/// JSON document listing nodes, local edges and per-sector components.
std::string export_graph(const DecodingGraph &graph, const Lattice &lattice);

}  // namespace clustersim

#endif
