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

// Maximum-weight general matching following the primal-dual formulation of
// Galil ("Efficient algorithms for finding maximum matching in graphs",
// 1986) in the structure popularised by Joris van Rantwijk's reference
// implementation. Edge endpoints are numbered p = 2k (first vertex of edge
// k) and p = 2k + 1 (second vertex); blossoms have ids in [n, 2n).

#include "clustersim/matching.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clustersim {

namespace {

int32_t wrap_index(int32_t j, size_t len) {
    int32_t n = static_cast<int32_t>(len);
    return ((j % n) + n) % n;
}

}  // namespace

int64_t BlossomMatcher::slack(int32_t k) const {
    const IntEdge &e = edges_[k];
    return dualvar_[e.u] + dualvar_[e.v] - 2 * e.weight;
}

void BlossomMatcher::blossom_leaves(int32_t b, std::vector<int32_t> &out) const {
    if (b < nvertex_) {
        out.push_back(b);
        return;
    }
    for (int32_t t : blossomchilds_[b]) {
        blossom_leaves(t, out);
    }
}

void BlossomMatcher::assign_label(int32_t w, int32_t t, int32_t p) {
    while (true) {
        const int32_t b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            blossom_leaves(b, queue_);
            return;
        }
        // T-blossom: its base's mate becomes an S-vertex.
        const int32_t base = blossombase_[b];
        if (mate_[base] < 0) {
            throw std::logic_error("Blossom matcher: T-blossom base is unmatched.");
        }
        w = endpoint_[mate_[base]];
        t = 1;
        p = mate_[base] ^ 1;
    }
}

int32_t BlossomMatcher::scan_blossom(int32_t v, int32_t w) {
    std::vector<int32_t> path;
    int32_t base = -1;
    while (v != -1 || w != -1) {
        int32_t b = inblossom_[v];
        if (label_[b] & 4) {
            base = blossombase_[b];
            break;
        }
        path.push_back(b);
        label_[b] = 5;
        if (labelend_[b] == -1) {
            v = -1;
        } else {
            v = endpoint_[labelend_[b]];
            b = inblossom_[v];
            v = endpoint_[labelend_[b]];
        }
        if (w != -1) {
            std::swap(v, w);
        }
    }
    for (int32_t b : path) {
        label_[b] = 1;
    }
    return base;
}

void BlossomMatcher::add_blossom(int32_t base, int32_t k) {
    int32_t v = edges_[k].u;
    int32_t w = edges_[k].v;
    const int32_t bb = inblossom_[base];
    int32_t bv = inblossom_[v];
    int32_t bw = inblossom_[w];
    const int32_t b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int32_t> &path = blossomchilds_[b];
    std::vector<int32_t> &endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        blossomparent_[bv] = b;
        path.push_back(bv);
        endps.push_back(labelend_[bv]);
        v = endpoint_[labelend_[bv]];
        bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
        blossomparent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    std::vector<int32_t> leaves;
    blossom_leaves(b, leaves);
    for (int32_t leaf : leaves) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    }
    // Least-slack edges from the new blossom to neighbouring S-blossoms.
    std::vector<int32_t> bestedgeto(2 * static_cast<size_t>(nvertex_), -1);
    auto consider = [&](int32_t kk) {
        int32_t i = edges_[kk].u;
        int32_t j = edges_[kk].v;
        if (inblossom_[j] == b) {
            std::swap(i, j);
        }
        const int32_t bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
            bestedgeto[bj] = kk;
        }
    };
    for (int32_t sub : path) {
        if (!has_bestedges_[sub]) {
            std::vector<int32_t> sub_leaves;
            blossom_leaves(sub, sub_leaves);
            for (int32_t leaf : sub_leaves) {
                for (int32_t p : neighbend_[leaf]) {
                    consider(p / 2);
                }
            }
        } else {
            for (int32_t kk : blossombestedges_[sub]) {
                consider(kk);
            }
        }
        blossombestedges_[sub].clear();
        has_bestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    blossombestedges_[b].clear();
    for (int32_t kk : bestedgeto) {
        if (kk != -1) {
            blossombestedges_[b].push_back(kk);
        }
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int32_t kk : blossombestedges_[b]) {
        if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
            bestedge_[b] = kk;
        }
    }
}

void BlossomMatcher::expand_blossom(int32_t b, bool endstage) {
    // Promote sub-blossoms to top level. Copy: recursion recycles ids.
    const std::vector<int32_t> childs = blossomchilds_[b];
    for (int32_t s : childs) {
        blossomparent_[s] = -1;
        if (s < nvertex_) {
            inblossom_[s] = s;
        } else if (endstage && dualvar_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            std::vector<int32_t> leaves;
            blossom_leaves(s, leaves);
            for (int32_t leaf : leaves) {
                inblossom_[leaf] = s;
            }
        }
    }
    if (!endstage && label_[b] == 2) {
        // Relabel the sub-blossoms of an expanding T-blossom, starting from
        // the one through which it was reached and walking to the base.
        const std::vector<int32_t> &ch = blossomchilds_[b];
        const std::vector<int32_t> &ep = blossomendps_[b];
        const size_t len = ch.size();
        const int32_t entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int32_t j = static_cast<int32_t>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int32_t jstep;
        int32_t endptrick;
        if (j & 1) {
            j -= static_cast<int32_t>(len);
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int32_t p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[ep[wrap_index(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[ep[wrap_index(j - endptrick, len)] / 2] = 1;
            j += jstep;
            p = ep[wrap_index(j - endptrick, len)] ^ endptrick;
            allowedge_[p / 2] = 1;
            j += jstep;
        }
        int32_t bv = ch[wrap_index(j, len)];
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (ch[wrap_index(j, len)] != entrychild) {
            bv = ch[wrap_index(j, len)];
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            std::vector<int32_t> leaves;
            blossom_leaves(bv, leaves);
            int32_t reached = -1;
            for (int32_t leaf : leaves) {
                if (label_[leaf] != 0) {
                    reached = leaf;
                    break;
                }
            }
            if (reached != -1) {
                label_[reached] = 0;
                label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                assign_label(reached, 2, labelend_[reached]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
}

void BlossomMatcher::augment_blossom(int32_t b, int32_t v) {
    int32_t t = v;
    while (blossomparent_[t] != b) {
        t = blossomparent_[t];
    }
    if (t >= nvertex_) {
        augment_blossom(t, v);
    }
    std::vector<int32_t> &ch = blossomchilds_[b];
    std::vector<int32_t> &ep = blossomendps_[b];
    const size_t len = ch.size();
    const int32_t i = static_cast<int32_t>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int32_t j = i;
    int32_t jstep;
    int32_t endptrick;
    if (i & 1) {
        j -= static_cast<int32_t>(len);
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = ch[wrap_index(j, len)];
        const int32_t p = ep[wrap_index(j - endptrick, len)] ^ endptrick;
        if (t >= nvertex_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = ch[wrap_index(j, len)];
        if (t >= nvertex_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    blossombase_[b] = blossombase_[ch[0]];
}

void BlossomMatcher::augment_matching(int32_t k) {
    const int32_t ends[2][2] = {{edges_[k].u, 2 * k + 1}, {edges_[k].v, 2 * k}};
    for (const auto &start : ends) {
        int32_t s = start[0];
        int32_t p = start[1];
        while (true) {
            const int32_t bs = inblossom_[s];
            if (bs >= nvertex_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            const int32_t t = endpoint_[labelend_[bs]];
            const int32_t bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            const int32_t j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= nvertex_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int32_t> BlossomMatcher::max_weight_matching(int32_t n, std::span<const IntEdge> edges,
                                                         bool max_cardinality) {
    if (n < 0) {
        throw std::invalid_argument("Vertex count must be non-negative.");
    }
    nvertex_ = n;
    edges_.assign(edges.begin(), edges.end());
    const int32_t nedge = static_cast<int32_t>(edges_.size());
    if (n == 0 || nedge == 0) {
        return std::vector<int32_t>(static_cast<size_t>(n), -1);
    }
    int64_t maxweight = 0;
    for (const IntEdge &e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n || e.u == e.v) {
            throw std::invalid_argument("Matching edge references invalid vertices.");
        }
        maxweight = std::max(maxweight, e.weight);
    }
    const size_t n2 = 2 * static_cast<size_t>(n);
    endpoint_.resize(2 * static_cast<size_t>(nedge));
    for (int32_t k = 0; k < nedge; k++) {
        endpoint_[2 * k] = edges_[k].u;
        endpoint_[2 * k + 1] = edges_[k].v;
    }
    neighbend_.resize(static_cast<size_t>(n));
    for (auto &list : neighbend_) {
        list.clear();
    }
    for (int32_t k = 0; k < nedge; k++) {
        neighbend_[edges_[k].u].push_back(2 * k + 1);
        neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(static_cast<size_t>(n), -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(static_cast<size_t>(n));
    for (int32_t i = 0; i < n; i++) {
        inblossom_[i] = i;
    }
    blossomparent_.assign(n2, -1);
    blossomchilds_.resize(n2);
    blossomendps_.resize(n2);
    blossombestedges_.resize(n2);
    for (size_t b = 0; b < n2; b++) {
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombestedges_[b].clear();
    }
    has_bestedges_.assign(n2, 0);
    blossombase_.assign(n2, -1);
    for (int32_t i = 0; i < n; i++) {
        blossombase_[i] = i;
    }
    bestedge_.assign(n2, -1);
    unusedblossoms_.clear();
    for (int32_t b = n; b < static_cast<int32_t>(n2); b++) {
        unusedblossoms_.push_back(b);
    }
    dualvar_.assign(n2, 0);
    for (int32_t i = 0; i < n; i++) {
        dualvar_[i] = maxweight;
    }
    allowedge_.assign(static_cast<size_t>(nedge), 0);
    queue_.clear();

    for (int32_t stage = 0; stage < n; stage++) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (size_t b = static_cast<size_t>(n); b < n2; b++) {
            blossombestedges_[b].clear();
            has_bestedges_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();
        for (int32_t v = 0; v < n; v++) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                const int32_t v = queue_.back();
                queue_.pop_back();
                for (int32_t p : neighbend_[v]) {
                    const int32_t k = p / 2;
                    const int32_t w = endpoint_[p];
                    if (inblossom_[v] == inblossom_[w]) {
                        continue;
                    }
                    int64_t kslack = 0;
                    if (!allowedge_[k]) {
                        kslack = slack(k);
                        if (kslack <= 0) {
                            allowedge_[k] = 1;
                        }
                    }
                    if (allowedge_[k]) {
                        if (label_[inblossom_[w]] == 0) {
                            assign_label(w, 2, p ^ 1);
                        } else if (label_[inblossom_[w]] == 1) {
                            const int32_t base = scan_blossom(v, w);
                            if (base >= 0) {
                                add_blossom(base, k);
                            } else {
                                augment_matching(k);
                                augmented = true;
                                break;
                            }
                        } else if (label_[w] == 0) {
                            label_[w] = 2;
                            labelend_[w] = p ^ 1;
                        }
                    } else if (label_[inblossom_[w]] == 1) {
                        const int32_t b = inblossom_[v];
                        if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                            bestedge_[b] = k;
                        }
                    } else if (label_[w] == 0) {
                        if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                            bestedge_[w] = k;
                        }
                    }
                }
            }
            if (augmented) {
                break;
            }

            int32_t deltatype = -1;
            int64_t delta = 0;
            int32_t deltaedge = -1;
            int32_t deltablossom = -1;
            if (!max_cardinality) {
                deltatype = 1;
                delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n);
            }
            for (int32_t v = 0; v < n; v++) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    const int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int32_t b = 0; b < static_cast<int32_t>(n2); b++) {
                if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    const int64_t kslack = slack(bestedge_[b]);
                    if (kslack % 2 != 0) {
                        throw std::logic_error("Blossom matcher: odd slack between S-blossoms.");
                    }
                    const int64_t d = kslack / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int32_t b = n; b < static_cast<int32_t>(n2); b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                    (deltatype == -1 || dualvar_[b] < delta)) {
                    delta = dualvar_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n));
            }
            for (int32_t v = 0; v < n; v++) {
                const int32_t l = label_[inblossom_[v]];
                if (l == 1) {
                    dualvar_[v] -= delta;
                } else if (l == 2) {
                    dualvar_[v] += delta;
                }
            }
            for (int32_t b = n; b < static_cast<int32_t>(n2); b++) {
                if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                    if (label_[b] == 1) {
                        dualvar_[b] += delta;
                    } else if (label_[b] == 2) {
                        dualvar_[b] -= delta;
                    }
                }
            }
            if (deltatype == 1) {
                break;
            } else if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int32_t i = edges_[deltaedge].u;
                int32_t j = edges_[deltaedge].v;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[deltaedge].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int32_t b = n; b < static_cast<int32_t>(n2); b++) {
            if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }
    std::vector<int32_t> out(static_cast<size_t>(n), -1);
    for (int32_t v = 0; v < n; v++) {
        if (mate_[v] >= 0) {
            out[v] = endpoint_[mate_[v]];
        }
    }
    return out;
}

std::vector<int32_t> BlossomMatcher::min_weight_perfect_matching(int32_t n, std::span<const MatchEdge> edges) {
    if (n % 2 != 0) {
        throw std::runtime_error("Perfect matching requires an even vertex count, got " + std::to_string(n) + ".");
    }
    int_edges_.clear();
    int64_t max_w = 0;
    for (const MatchEdge &e : edges) {
        if (!std::isfinite(e.weight) || e.weight < 0 || e.weight > 1e9) {
            throw std::invalid_argument("Matching weights must be finite, non-negative and below 1e9.");
        }
        const int64_t w = std::llround(e.weight / kWeightQuantum);
        max_w = std::max(max_w, w);
        int_edges_.push_back({e.u, e.v, w});
    }
    // Maximizing (big - w) over maximum-cardinality matchings minimizes the
    // total weight; the factor 2 keeps every dual update integral.
    const int64_t big = max_w + 1;
    for (IntEdge &e : int_edges_) {
        e.weight = 2 * (big - e.weight);
    }
    std::vector<int32_t> mate = max_weight_matching(n, int_edges_, true);
    for (int32_t v = 0; v < n; v++) {
        if (mate[v] < 0) {
            throw std::runtime_error("Graph has no perfect matching.");
        }
    }
    return mate;
}

std::vector<int32_t> min_weight_perfect_matching(int32_t n, std::span<const MatchEdge> edges) {
    BlossomMatcher matcher;
    return matcher.min_weight_perfect_matching(n, edges);
}

}  // namespace clustersim
