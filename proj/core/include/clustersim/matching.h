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

#ifndef CLUSTERSIM_MATCHING_H
#define CLUSTERSIM_MATCHING_H

#include <cstdint>
#include <span>
#include <vector>

namespace clustersim {

struct IntEdge {
    int32_t u = 0;
    int32_t v = 0;
    int64_t weight = 0;
};

struct MatchEdge {
    int32_t u = 0;
    int32_t v = 0;
    double weight = 0.0;
};

/// Edge weights are quantized to multiples of 2^-20 before matching. Weights
/// that are already such multiples are matched exactly.
inline constexpr double kWeightQuantum = 1.0 / 1048576.0;

/// Exact maximum-weight matching on a general graph (Edmonds' blossom
/// algorithm with dual variables, O(n^3)). With `max_cardinality` the result
/// maximizes weight among maximum-cardinality matchings. Buffers are reused
/// across calls, so one instance per thread avoids reallocation.
class BlossomMatcher {
   public:
    /// Returns mate[v] (or -1) for v in [0, n).
    std::vector<int32_t> max_weight_matching(int32_t n, std::span<const IntEdge> edges, bool max_cardinality);

    /// Minimum-weight perfect matching. Weights must be finite and
    /// non-negative. Throws std::runtime_error if no perfect matching exists.
    std::vector<int32_t> min_weight_perfect_matching(int32_t n, std::span<const MatchEdge> edges);

   private:
    int64_t slack(int32_t k) const;
    void blossom_leaves(int32_t b, std::vector<int32_t> &out) const;
    void assign_label(int32_t w, int32_t t, int32_t p);
    int32_t scan_blossom(int32_t v, int32_t w);
    void add_blossom(int32_t base, int32_t k);
    void expand_blossom(int32_t b, bool endstage);
    void augment_blossom(int32_t b, int32_t v);
    void augment_matching(int32_t k);

    int32_t nvertex_ = 0;
    std::vector<IntEdge> edges_;
    std::vector<int32_t> endpoint_;
    std::vector<std::vector<int32_t>> neighbend_;
    std::vector<int32_t> mate_;
    std::vector<int32_t> label_;
    std::vector<int32_t> labelend_;
    std::vector<int32_t> inblossom_;
    std::vector<int32_t> blossomparent_;
    std::vector<std::vector<int32_t>> blossomchilds_;
    std::vector<int32_t> blossombase_;
    std::vector<std::vector<int32_t>> blossomendps_;
    std::vector<int32_t> bestedge_;
    std::vector<std::vector<int32_t>> blossombestedges_;
    std::vector<uint8_t> has_bestedges_;
    std::vector<int32_t> unusedblossoms_;
    std::vector<int64_t> dualvar_;
    std::vector<uint8_t> allowedge_;
    std::vector<int32_t> queue_;
    std::vector<int32_t> scratch_;
    std::vector<IntEdge> int_edges_;
};

/// Convenience wrapper around a temporary BlossomMatcher.
std::vector<int32_t> min_weight_perfect_matching(int32_t n, std::span<const MatchEdge> edges);

}  // namespace clustersim

#endif
