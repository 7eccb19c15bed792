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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "json.hpp"

namespace clustersim {

double quantize_weight(double w) {
    if (!std::isfinite(w)) {
        return w;
    }
    return std::round(w / kWeightQuantum) * kWeightQuantum;
}

CsrGraph::CsrGraph(uint32_t num_nodes, std::span<const Edge> edges) {
    std::vector<uint32_t> degree(num_nodes, 0);
    for (const Edge &e : edges) {
        if (e.a >= num_nodes || e.b >= num_nodes) {
            throw std::invalid_argument("Graph edge references a missing node.");
        }
        if (!(e.weight >= 0) || !std::isfinite(e.weight)) {
            throw std::invalid_argument("Graph edge weights must be finite and non-negative.");
        }
        degree[e.a]++;
        degree[e.b]++;
    }
    offsets_.assign(num_nodes + 1, 0);
    for (uint32_t v = 0; v < num_nodes; v++) {
        offsets_[v + 1] = offsets_[v] + degree[v];
    }
    arcs_.resize(offsets_.back());
    std::vector<uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const Edge &e : edges) {
        arcs_[fill[e.a]++] = {e.b, e.weight, e.logical};
        arcs_[fill[e.b]++] = {e.a, e.weight, e.logical};
    }
}

std::vector<uint32_t> ShortestPaths::path_to(uint32_t v) const {
    if (!std::isfinite(dist[v])) {
        return {};
    }
    std::vector<uint32_t> out;
    for (int64_t cur = v; cur != -1; cur = pred[cur]) {
        out.push_back(static_cast<uint32_t>(cur));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void dijkstra(const CsrGraph &graph, uint32_t source, ShortestPaths &out, std::span<const uint32_t> targets) {
    const uint32_t n = graph.num_nodes();
    if (source >= n) {
        throw std::invalid_argument("Dijkstra source is not a graph node.");
    }
    out.dist.assign(n, kInfiniteWeight);
    out.pred.assign(n, -1);
    out.mask.assign(n, 0);
    std::vector<uint8_t> settled(n, 0);
    size_t remaining = 0;
    std::vector<uint8_t> is_target;
    if (!targets.empty()) {
        is_target.assign(n, 0);
        for (uint32_t t : targets) {
            if (t >= n) {
                throw std::invalid_argument("Dijkstra target is not a graph node.");
            }
            if (!is_target[t]) {
                is_target[t] = 1;
                remaining++;
            }
        }
    }
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    out.dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (settled[v]) {
            continue;
        }
        settled[v] = 1;
        if (!is_target.empty() && is_target[v] && --remaining == 0) {
            break;
        }
        for (const CsrGraph::Arc &arc : graph.neighbors(v)) {
            const double nd = d + arc.weight;
            if (nd < out.dist[arc.node]) {
                out.dist[arc.node] = nd;
                out.pred[arc.node] = static_cast<int32_t>(v);
                out.mask[arc.node] = out.mask[v] ^ arc.logical;
                heap.emplace(nd, arc.node);
            }
        }
    }
}

DecodingGraph::DecodingGraph(const Lattice &lattice, std::span<const FaultEvent> events,
                             const EventEffects &effects, const GraphOptions &options) {
    if (events.size() != effects.size()) {
        throw std::invalid_argument("Event list and effect table differ in size.");
    }
    per_sector_ = lattice.num_checks(Sector::Primal);
    for (const LogicalMembrane &m : lattice.logicals()) {
        sector_masks_[static_cast<int>(m.sector)] |= static_cast<MembraneMask>(1u << m.id);
    }

    struct Accum {
        double probability = 0;
        double best = -1;
        uint32_t representative = 0;
        MembraneMask logical = 0;
    };
    std::unordered_map<uint64_t, size_t> index;
    std::vector<std::pair<uint64_t, Accum>> accum;
    std::array<std::vector<uint32_t>, 2> by_sector;
    for (uint32_t e = 0; e < events.size(); e++) {
        std::span<const uint32_t> checks = effects.checks(e);
        by_sector[0].clear();
        by_sector[1].clear();
        for (uint32_t c : checks) {
            by_sector[static_cast<int>(lattice.check_sector(c))].push_back(c);
        }
        for (int s = 0; s < 2; s++) {
            if (by_sector[s].size() != 2) {
                continue;
            }
            const uint64_t key = (static_cast<uint64_t>(by_sector[s][0]) << 32) | by_sector[s][1];
            auto [it, inserted] = index.emplace(key, accum.size());
            if (inserted) {
                accum.push_back({key, Accum{}});
            }
            Accum &a = accum[it->second].second;
            const double p = events[e].probability;
            a.probability = options.xor_combine ? a.probability + p - 2 * a.probability * p : a.probability + p;
            if (p > a.best) {
                a.best = p;
                a.representative = e;
                a.logical = effects.logical(e) & sector_masks_[s];
            }
        }
    }
    std::sort(accum.begin(), accum.end(), [](const auto &x, const auto &y) {
        return x.first < y.first;
    });
    std::array<std::vector<CsrGraph::Edge>, 2> sector_edges;
    for (const auto &[key, a] : accum) {
        if (!(a.probability > 0.0 && a.probability < 1.0)) {
            throw std::logic_error("Accumulated edge probability outside (0, 1).");
        }
        GraphEdge edge;
        edge.a = static_cast<uint32_t>(key >> 32);
        edge.b = static_cast<uint32_t>(key & 0xFFFFFFFFu);
        edge.probability = a.probability;
        edge.weight = quantize_weight(-std::log(a.probability));
        edge.logical = a.logical;
        edge.representative = a.representative;
        edges_.push_back(edge);
        const int s = static_cast<int>(lattice.check_sector(edge.a));
        sector_edges[s].push_back({local_index(edge.a), local_index(edge.b), edge.weight, edge.logical});
    }
    for (int s = 0; s < 2; s++) {
        sector_graphs_[s] = CsrGraph(per_sector_, sector_edges[s]);
    }

    for (int s = 0; s < 2; s++) {
        if (per_sector_ > options.apsp_node_limit) {
            continue;
        }
        const size_t n = per_sector_;
        apsp_dist_[s].resize(n * n);
        apsp_mask_[s].resize(n * n);
        ShortestPaths tree;
        for (uint32_t src = 0; src < n; src++) {
            dijkstra(sector_graphs_[s], src, tree);
            std::copy(tree.dist.begin(), tree.dist.end(), apsp_dist_[s].begin() + src * n);
            std::copy(tree.mask.begin(), tree.mask.end(), apsp_mask_[s].begin() + src * n);
        }
        // One path convention per unordered pair: the lower-index source.
        for (size_t a = 0; a < n; a++) {
            for (size_t b = 0; b < a; b++) {
                apsp_mask_[s][a * n + b] = apsp_mask_[s][b * n + a];
            }
        }
    }
}

std::vector<uint32_t> DecodingGraph::component_labels(Sector s) const {
    const CsrGraph &g = sector_graph(s);
    std::vector<uint32_t> label(g.num_nodes(), UINT32_MAX);
    uint32_t next = 0;
    std::vector<uint32_t> stack;
    for (uint32_t root = 0; root < g.num_nodes(); root++) {
        if (label[root] != UINT32_MAX) {
            continue;
        }
        label[root] = next;
        stack.push_back(root);
        while (!stack.empty()) {
            uint32_t v = stack.back();
            stack.pop_back();
            for (const CsrGraph::Arc &arc : g.neighbors(v)) {
                if (label[arc.node] == UINT32_MAX) {
                    label[arc.node] = next;
                    stack.push_back(arc.node);
                }
            }
        }
        next++;
    }
    return label;
}

DecodingGraph build_graph(const Lattice &lattice, const NoiseParams &params, const GraphOptions &options) {
    params.validate();
    std::vector<FaultEvent> events = enumerate_events(lattice, params);
    if (events.empty()) {
        throw std::invalid_argument("Noise parameters produce no fault events; the decoding graph would be empty.");
    }
    EventEffects effects(lattice, events);
    return DecodingGraph(lattice, events, effects, options);
}

std::vector<uint32_t> PairWeights::path(const DecodingGraph &graph, size_t i, size_t j) const {
    const uint32_t target = graph.local_index(terminals[j]);
    std::vector<uint32_t> local = trees[i].path_to(target);
    const uint32_t offset = graph.node_sector(terminals[i]) == Sector::Primal ? 0 : graph.nodes_per_sector();
    for (uint32_t &v : local) {
        v += offset;
    }
    return local;
}

PairWeights pair_weights(const DecodingGraph &graph, std::span<const uint32_t> terminals) {
    PairWeights out;
    out.terminals.assign(terminals.begin(), terminals.end());
    const size_t k = terminals.size();
    out.weight.assign(k * k, 0.0);
    out.mask.assign(k * k, 0);
    out.trees.resize(k);
    if (k == 0) {
        return out;
    }
    const Sector s = graph.node_sector(terminals[0]);
    for (uint32_t t : terminals) {
        if (t >= graph.num_nodes() || graph.node_sector(t) != s) {
            throw std::invalid_argument("pair_weights terminals must be checks of one sector.");
        }
    }
    const CsrGraph &g = graph.sector_graph(s);
    for (size_t i = 0; i < k; i++) {
        dijkstra(g, graph.local_index(terminals[i]), out.trees[i]);
        for (size_t j = 0; j < k; j++) {
            const uint32_t lj = graph.local_index(terminals[j]);
            out.weight[i * k + j] = out.trees[i].dist[lj];
            out.mask[i * k + j] = out.trees[i].mask[lj];
        }
    }
    return out;
}

Decoder::Decoder(const DecodingGraph &graph) : graph_(graph) {}

void Decoder::decode_sector(Sector s, std::span<const uint32_t> terminals, bool record_pairs, MatchingResult &out) {
    const size_t k = terminals.size();
    if (k == 0) {
        return;
    }
    if (k % 2 != 0) {
        throw InvariantViolation("Odd number of flipped checks in the " + std::string(sector_name(s)) + " sector.");
    }
    local_terminals_.resize(k);
    for (size_t i = 0; i < k; i++) {
        local_terminals_[i] = graph_.local_index(terminals[i]);
    }
    dist_.assign(k * k, kInfiniteWeight);
    mask_.assign(k * k, 0);
    if (graph_.has_distance_cache(s)) {
        for (size_t i = 0; i < k; i++) {
            for (size_t j = i + 1; j < k; j++) {
                dist_[i * k + j] = graph_.cached_distance(s, local_terminals_[i], local_terminals_[j]);
                mask_[i * k + j] = graph_.cached_mask(s, local_terminals_[i], local_terminals_[j]);
            }
        }
    } else {
        const CsrGraph &g = graph_.sector_graph(s);
        for (size_t i = 0; i + 1 < k; i++) {
            dijkstra(g, local_terminals_[i], tree_,
                     std::span<const uint32_t>(local_terminals_.data() + i + 1, k - i - 1));
            for (size_t j = i + 1; j < k; j++) {
                dist_[i * k + j] = tree_.dist[local_terminals_[j]];
                mask_[i * k + j] = tree_.mask[local_terminals_[j]];
            }
        }
    }
    match_edges_.clear();
    for (size_t i = 0; i < k; i++) {
        for (size_t j = i + 1; j < k; j++) {
            if (std::isfinite(dist_[i * k + j])) {
                match_edges_.push_back({static_cast<int32_t>(i), static_cast<int32_t>(j), dist_[i * k + j]});
            }
        }
    }
    std::vector<int32_t> mate;
    try {
        mate = matcher_.min_weight_perfect_matching(static_cast<int32_t>(k), match_edges_);
    } catch (const std::runtime_error &e) {
        throw InvariantViolation(std::string("Syndrome cannot be perfectly matched: ") + e.what());
    }
    for (size_t i = 0; i < k; i++) {
        const size_t j = static_cast<size_t>(mate[i]);
        if (j <= i) {
            continue;
        }
        out.total_weight += dist_[i * k + j];
        out.correction_logical_bits ^= mask_[i * k + j];
        if (record_pairs) {
            out.pairs.emplace_back(terminals[i], terminals[j]);
        }
    }
}

MatchingResult Decoder::decode(std::span<const uint32_t> flipped_checks, bool record_pairs) {
    MatchingResult out;
    const auto split = std::lower_bound(flipped_checks.begin(), flipped_checks.end(), graph_.nodes_per_sector());
    const size_t n_primal = static_cast<size_t>(split - flipped_checks.begin());
    decode_sector(Sector::Primal, flipped_checks.subspan(0, n_primal), record_pairs, out);
    decode_sector(Sector::Dual, flipped_checks.subspan(n_primal), record_pairs, out);
    return out;
}

MatchingResult match(const DecodingGraph &graph, const Syndrome &syndrome) {
    std::vector<uint32_t> sorted = syndrome.flipped_checks;
    std::sort(sorted.begin(), sorted.end());
    Decoder decoder(graph);
    return decoder.decode(sorted, true);
}

MembraneMask decode_trial(const DecodingGraph &graph, const Lattice &lattice, const FlipFrame &frame) {
    const MembraneMask actual = logical_flips(lattice, frame);
    const MatchingResult result = match(graph, syndrome(lattice, frame));
    return actual ^ result.correction_logical_bits;
}

std::string export_graph(const DecodingGraph &graph, const Lattice &lattice) {
    using nlohmann::json;
    json doc;
    doc["lattice"] = std::string(lattice_kind_name(lattice.kind()));
    doc["dims"] = {lattice.dims().u, lattice.dims().v, lattice.dims().w};
    json nodes = json::array();
    for (const CellCheck &c : lattice.checks()) {
        nodes.push_back({{"id", c.id},
                         {"sector", std::string(sector_name(c.sector))},
                         {"center", {c.center.u, c.center.v, c.center.w}}});
    }
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const GraphEdge &e : graph.edges()) {
        edges.push_back({{"a", e.a},
                         {"b", e.b},
                         {"probability", e.probability},
                         {"weight", e.weight},
                         {"logical", e.logical},
                         {"representative", e.representative}});
    }
    doc["edges"] = std::move(edges);
    json components = json::object();
    for (Sector s : {Sector::Primal, Sector::Dual}) {
        std::vector<uint32_t> labels = graph.component_labels(s);
        uint32_t count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
        components[std::string(sector_name(s))] = {{"count", count}, {"labels", labels}};
    }
    doc["components"] = std::move(components);
    return doc.dump(1);
}

}  // namespace clustersim
