// Copyright 2026 The mpsum Authors
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

// The structure follows J. van Rantwijk's well-known reference
// implementation of Galil's presentation of Edmonds' algorithm. Vertices
// are 0..n-1, blossoms n..2n-1. An edge endpoint p names edge p/2 seen from
// vertex endpoint[p]; p^1 is the opposite endpoint.

#include "mpsum/blossom.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mpsum {

namespace {

class Solver {
   public:
    Solver(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality)
        : n_(n), edges_(edges), max_cardinality_(max_cardinality) {
    }

    std::vector<int> solve();

   private:
    int64_t slack(int k) const {
        const WeightedEdge &e = edges_[static_cast<size_t>(k)];
        return dual_[e.u] + dual_[e.v] - 2 * e.weight;
    }

    template <typename F>
    void for_leaves(int b, F &&f) const {
        if (b < n_) {
            f(b);
            return;
        }
        for (int t : childs_[b]) {
            for_leaves(t, f);
        }
    }

    void assign_label(int w, int t, int p);
    int scan_blossom(int v, int w);
    void add_blossom(int base, int k);
    void expand_blossom(int b, bool endstage);
    void augment_blossom(int b, int v);
    void augment_matching(int k);

    int n_;
    const std::vector<WeightedEdge> &edges_;
    bool max_cardinality_;

    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> childs_;
    std::vector<int> base_;
    std::vector<std::vector<int>> endps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> bestedges_;
    std::vector<uint8_t> has_bestedges_;
    std::vector<int> unused_;
    std::vector<int64_t> dual_;
    std::vector<uint8_t> allowedge_;
    std::vector<int> queue_;
};

void Solver::assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
        for_leaves(b, [this](int v) { queue_.push_back(v); });
    } else if (t == 2) {
        int base = base_[b];
        assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
}

int Solver::scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
        int b = inblossom_[v];
        if (label_[b] & 4) {
            base = base_[b];
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
    for (int b : path) {
        label_[b] = 1;
    }
    return base;
}

void Solver::add_blossom(int base, int k) {
    int v = edges_[static_cast<size_t>(k)].u;
    int w = edges_[static_cast<size_t>(k)].v;
    int bb = inblossom_[base];
    int bv = inblossom_[v];
    int bw = inblossom_[w];
    int b = unused_.back();
    unused_.pop_back();
    base_[b] = base;
    parent_[b] = -1;
    parent_[bb] = b;
    std::vector<int> &path = childs_[b];
    std::vector<int> &endps = endps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
        parent_[bv] = b;
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
        parent_[bw] = b;
        path.push_back(bw);
        endps.push_back(labelend_[bw] ^ 1);
        w = endpoint_[labelend_[bw]];
        bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dual_[b] = 0;
    for_leaves(b, [&](int leaf) {
        if (label_[inblossom_[leaf]] == 2) {
            queue_.push_back(leaf);
        }
        inblossom_[leaf] = b;
    });

    std::vector<int> bestedgeto(static_cast<size_t>(2 * n_), -1);
    auto consider = [&](int e) {
        int i = edges_[static_cast<size_t>(e)].u;
        int j = edges_[static_cast<size_t>(e)].v;
        if (inblossom_[j] == b) {
            std::swap(i, j);
        }
        int bj = inblossom_[j];
        if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj]))) {
            bestedgeto[bj] = e;
        }
    };
    for (int sub : path) {
        if (!has_bestedges_[sub]) {
            for_leaves(sub, [&](int leaf) {
                for (int p : neighbend_[leaf]) {
                    consider(p / 2);
                }
            });
        } else {
            for (int e : bestedges_[sub]) {
                consider(e);
            }
        }
        bestedges_[sub].clear();
        has_bestedges_[sub] = 0;
        bestedge_[sub] = -1;
    }
    bestedges_[b].clear();
    for (int e : bestedgeto) {
        if (e != -1) {
            bestedges_[b].push_back(e);
        }
    }
    has_bestedges_[b] = 1;
    bestedge_[b] = -1;
    for (int e : bestedges_[b]) {
        if (bestedge_[b] == -1 || slack(e) < slack(bestedge_[b])) {
            bestedge_[b] = e;
        }
    }
}

void Solver::expand_blossom(int b, bool endstage) {
    // Copy: recursive expansion may reuse child slots.
    const std::vector<int> children = childs_[b];
    for (int s : children) {
        parent_[s] = -1;
        if (s < n_) {
            inblossom_[s] = s;
        } else if (endstage && dual_[s] == 0) {
            expand_blossom(s, endstage);
        } else {
            for_leaves(s, [&](int leaf) { inblossom_[leaf] = s; });
        }
    }
    if (!endstage && label_[b] == 2) {
        const std::vector<int> &ch = childs_[b];
        const std::vector<int> &ep = endps_[b];
        const int len = static_cast<int>(ch.size());
        auto at = [len](const std::vector<int> &v, int idx) {
            return v[static_cast<size_t>(((idx % len) + len) % len)];
        };
        int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
        int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
        int jstep;
        int endptrick;
        if (j & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        int p = labelend_[b];
        while (j != 0) {
            label_[endpoint_[p ^ 1]] = 0;
            label_[endpoint_[at(ep, j - endptrick) ^ endptrick ^ 1]] = 0;
            assign_label(endpoint_[p ^ 1], 2, p);
            allowedge_[static_cast<size_t>(at(ep, j - endptrick) / 2)] = 1;
            j += jstep;
            p = at(ep, j - endptrick) ^ endptrick;
            allowedge_[static_cast<size_t>(p / 2)] = 1;
            j += jstep;
        }
        int bv = at(ch, j);
        label_[endpoint_[p ^ 1]] = label_[bv] = 2;
        labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
        bestedge_[bv] = -1;
        j += jstep;
        while (at(ch, j) != entrychild) {
            bv = at(ch, j);
            if (label_[bv] == 1) {
                j += jstep;
                continue;
            }
            int found = -1;
            for_leaves(bv, [&](int leaf) {
                if (found == -1 && label_[leaf] != 0) {
                    found = leaf;
                }
            });
            if (found != -1) {
                label_[found] = 0;
                label_[endpoint_[mate_[base_[bv]]]] = 0;
                assign_label(found, 2, labelend_[found]);
            }
            j += jstep;
        }
    }
    label_[b] = labelend_[b] = -1;
    childs_[b].clear();
    endps_[b].clear();
    base_[b] = -1;
    bestedges_[b].clear();
    has_bestedges_[b] = 0;
    bestedge_[b] = -1;
    unused_.push_back(b);
}

void Solver::augment_blossom(int b, int v) {
    int t = v;
    while (parent_[t] != b) {
        t = parent_[t];
    }
    if (t >= n_) {
        augment_blossom(t, v);
    }
    std::vector<int> &ch = childs_[b];
    std::vector<int> &ep = endps_[b];
    const int len = static_cast<int>(ch.size());
    auto at = [len](const std::vector<int> &vec, int idx) {
        return vec[static_cast<size_t>(((idx % len) + len) % len)];
    };
    int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
    int j = i;
    int jstep;
    int endptrick;
    if (i & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
    } else {
        jstep = -1;
        endptrick = 1;
    }
    while (j != 0) {
        j += jstep;
        t = at(ch, j);
        int p = at(ep, j - endptrick) ^ endptrick;
        if (t >= n_) {
            augment_blossom(t, endpoint_[p]);
        }
        j += jstep;
        t = at(ch, j);
        if (t >= n_) {
            augment_blossom(t, endpoint_[p ^ 1]);
        }
        mate_[endpoint_[p]] = p ^ 1;
        mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(ch.begin(), ch.begin() + i, ch.end());
    std::rotate(ep.begin(), ep.begin() + i, ep.end());
    base_[b] = base_[ch[0]];
}

void Solver::augment_matching(int k) {
    const int ends[2][2] = {{edges_[static_cast<size_t>(k)].u, 2 * k + 1}, {edges_[static_cast<size_t>(k)].v, 2 * k}};
    for (const auto &start : ends) {
        int s = start[0];
        int p = start[1];
        while (true) {
            int bs = inblossom_[s];
            if (bs >= n_) {
                augment_blossom(bs, s);
            }
            mate_[s] = p;
            if (labelend_[bs] == -1) {
                break;
            }
            int t = endpoint_[labelend_[bs]];
            int bt = inblossom_[t];
            s = endpoint_[labelend_[bt]];
            int j = endpoint_[labelend_[bt] ^ 1];
            if (bt >= n_) {
                augment_blossom(bt, j);
            }
            mate_[j] = labelend_[bt];
            p = labelend_[bt] ^ 1;
        }
    }
}

std::vector<int> Solver::solve() {
    if (n_ < 0) {
        throw std::invalid_argument("vertex count must be nonnegative");
    }
    const int nedge = static_cast<int>(edges_.size());
    int64_t maxweight = 0;
    for (const WeightedEdge &e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_ || e.u == e.v) {
            throw std::invalid_argument("invalid edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ")");
        }
        maxweight = std::max(maxweight, e.weight);
    }
    const size_t n2 = static_cast<size_t>(2 * n_);
    endpoint_.resize(static_cast<size_t>(2 * nedge));
    neighbend_.assign(static_cast<size_t>(n_), {});
    for (int k = 0; k < nedge; k++) {
        const WeightedEdge &e = edges_[static_cast<size_t>(k)];
        endpoint_[static_cast<size_t>(2 * k)] = e.u;
        endpoint_[static_cast<size_t>(2 * k + 1)] = e.v;
        neighbend_[static_cast<size_t>(e.u)].push_back(2 * k + 1);
        neighbend_[static_cast<size_t>(e.v)].push_back(2 * k);
    }
    mate_.assign(static_cast<size_t>(n_), -1);
    label_.assign(n2, 0);
    labelend_.assign(n2, -1);
    inblossom_.resize(static_cast<size_t>(n_));
    for (int v = 0; v < n_; v++) {
        inblossom_[static_cast<size_t>(v)] = v;
    }
    parent_.assign(n2, -1);
    childs_.assign(n2, {});
    base_.assign(n2, -1);
    for (int v = 0; v < n_; v++) {
        base_[static_cast<size_t>(v)] = v;
    }
    endps_.assign(n2, {});
    bestedge_.assign(n2, -1);
    bestedges_.assign(n2, {});
    has_bestedges_.assign(n2, 0);
    unused_.clear();
    for (int b = 2 * n_ - 1; b >= n_; b--) {
        unused_.push_back(b);
    }
    std::reverse(unused_.begin(), unused_.end());
    dual_.assign(n2, 0);
    for (int v = 0; v < n_; v++) {
        dual_[static_cast<size_t>(v)] = maxweight;
    }
    allowedge_.assign(static_cast<size_t>(nedge), 0);

    for (int stage = 0; stage < n_; stage++) {
        std::fill(label_.begin(), label_.end(), 0);
        std::fill(bestedge_.begin(), bestedge_.end(), -1);
        for (size_t b = static_cast<size_t>(n_); b < n2; b++) {
            bestedges_[b].clear();
            has_bestedges_[b] = 0;
        }
        std::fill(allowedge_.begin(), allowedge_.end(), 0);
        queue_.clear();
        for (int v = 0; v < n_; v++) {
            if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                assign_label(v, 1, -1);
            }
        }
        bool augmented = false;
        while (true) {
            while (!queue_.empty() && !augmented) {
                int v = queue_.back();
                queue_.pop_back();
                for (int p : neighbend_[v]) {
                    int k = p / 2;
                    int w = endpoint_[p];
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
                            int base = scan_blossom(v, w);
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
                        int b = inblossom_[v];
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

            int deltatype = -1;
            int64_t delta = 0;
            int deltaedge = -1;
            int deltablossom = -1;
            if (!max_cardinality_) {
                deltatype = 1;
                delta = *std::min_element(dual_.begin(), dual_.begin() + n_);
            }
            for (int v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                    int64_t d = slack(bestedge_[v]);
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 2;
                        deltaedge = bestedge_[v];
                    }
                }
            }
            for (int b = 0; b < 2 * n_; b++) {
                if (parent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                    int64_t d = slack(bestedge_[b]) / 2;
                    if (deltatype == -1 || d < delta) {
                        delta = d;
                        deltatype = 3;
                        deltaedge = bestedge_[b];
                    }
                }
            }
            for (int b = n_; b < 2 * n_; b++) {
                if (base_[b] >= 0 && parent_[b] == -1 && label_[b] == 2 && (deltatype == -1 || dual_[b] < delta)) {
                    delta = dual_[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if (deltatype == -1) {
                deltatype = 1;
                delta = std::max<int64_t>(0, *std::min_element(dual_.begin(), dual_.begin() + n_));
            }

            for (int v = 0; v < n_; v++) {
                if (label_[inblossom_[v]] == 1) {
                    dual_[v] -= delta;
                } else if (label_[inblossom_[v]] == 2) {
                    dual_[v] += delta;
                }
            }
            for (int b = n_; b < 2 * n_; b++) {
                if (base_[b] >= 0 && parent_[b] == -1) {
                    if (label_[b] == 1) {
                        dual_[b] += delta;
                    } else if (label_[b] == 2) {
                        dual_[b] -= delta;
                    }
                }
            }

            if (deltatype == 1) {
                break;
            }
            if (deltatype == 2) {
                allowedge_[deltaedge] = 1;
                int i = edges_[static_cast<size_t>(deltaedge)].u;
                int j = edges_[static_cast<size_t>(deltaedge)].v;
                if (label_[inblossom_[i]] == 0) {
                    std::swap(i, j);
                }
                queue_.push_back(i);
            } else if (deltatype == 3) {
                allowedge_[deltaedge] = 1;
                queue_.push_back(edges_[static_cast<size_t>(deltaedge)].u);
            } else {
                expand_blossom(deltablossom, false);
            }
        }
        if (!augmented) {
            break;
        }
        for (int b = n_; b < 2 * n_; b++) {
            if (parent_[b] == -1 && base_[b] >= 0 && label_[b] == 1 && dual_[b] == 0) {
                expand_blossom(b, true);
            }
        }
    }

    std::vector<int> result(static_cast<size_t>(n_), -1);
    for (int v = 0; v < n_; v++) {
        if (mate_[v] >= 0) {
            result[static_cast<size_t>(v)] = endpoint_[mate_[v]];
        }
    }
    return result;
}

}  // namespace

std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality) {
    if (edges.empty()) {
        return std::vector<int>(static_cast<size_t>(std::max(n, 0)), -1);
    }
    // Doubling keeps every dual variable integral through the half-slack steps.
    std::vector<WeightedEdge> doubled = edges;
    for (WeightedEdge &e : doubled) {
        e.weight *= 2;
    }
    Solver solver(n, doubled, max_cardinality);
    return solver.solve();
}

}  // namespace mpsum
