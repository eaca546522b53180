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

#include "mpsum/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mpsum/blossom.hpp"

namespace mpsum {

namespace {

int64_t quantize(double w) {
    return static_cast<int64_t>(std::llround(w * kWeightScale));
}

}  // namespace

MatchingGeometry::MatchingGeometry(std::shared_ptr<const CodeLayout> layout) : layout_(std::move(layout)) {
    if (!layout_) {
        throw std::invalid_argument("null layout");
    }
    const CodeLayout &lay = *layout_;
    local_.resize(lay.num_stabilisers());
    for (Pauli kind : {Pauli::X, Pauli::Z}) {
        const size_t slot = kind_slot(kind);
        std::vector<uint32_t> checks = lay.checks_of_kind(kind);
        kind_count_[slot] = checks.size();
        for (size_t i = 0; i < checks.size(); i++) {
            local_[checks[i]] = static_cast<uint32_t>(i);
        }
        const size_t n = checks.size();
        pairs_[slot].resize(n * (n - 1) / 2);
        pair_count_[slot].resize(n * (n - 1) / 2);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                size_t k = pair_slot(checks[i], checks[j]);
                pairs_[slot][k] = build_pair_dag(lay, checks[i], checks[j]);
                pair_count_[slot][k] = num_paths(pairs_[slot][k]);
            }
        }
    }
    boundary_.resize(lay.num_stabilisers());
    boundary_count_.resize(lay.num_stabilisers());
    for (uint32_t c = 0; c < lay.num_stabilisers(); c++) {
        boundary_[c] = build_boundary_dag(lay, c);
        boundary_count_[c] = num_paths(boundary_[c]);
    }
}

size_t MatchingGeometry::pair_slot(uint32_t check_a, uint32_t check_b) const {
    const CodeLayout &lay = *layout_;
    if (check_a >= lay.num_stabilisers() || check_b >= lay.num_stabilisers()) {
        throw std::invalid_argument("stabiliser index out of range");
    }
    if (lay.stabilisers[check_a].kind != lay.stabilisers[check_b].kind || check_a == check_b) {
        throw std::invalid_argument("pair endpoints must be distinct stabilisers of one kind");
    }
    size_t i = local_[check_a];
    size_t j = local_[check_b];
    if (i > j) {
        std::swap(i, j);
    }
    const size_t n = kind_count_[kind_slot(lay.stabilisers[check_a].kind)];
    // Row-major index into the strict upper triangle.
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

const BoundingBoxDag &MatchingGeometry::pair_dag(uint32_t check_a, uint32_t check_b) const {
    size_t k = pair_slot(check_a, check_b);
    return pairs_[kind_slot(layout_->stabilisers[check_a].kind)][k];
}

uint64_t MatchingGeometry::pair_paths(uint32_t check_a, uint32_t check_b) const {
    size_t k = pair_slot(check_a, check_b);
    return pair_count_[kind_slot(layout_->stabilisers[check_a].kind)][k];
}

const BoundingBoxDag &MatchingGeometry::boundary_dag(uint32_t check) const {
    return boundary_.at(check);
}

uint64_t MatchingGeometry::boundary_paths(uint32_t check) const {
    return boundary_count_.at(check);
}

std::vector<SyndromeGraph::Edge> SyndromeGraph::edges() const {
    const uint32_t n = static_cast<uint32_t>(num_real());
    std::vector<Edge> out;
    for (uint32_t i = 0; i < n; i++) {
        for (uint32_t j = i + 1; j < n; j++) {
            out.push_back({i, j, pair(i, j)});
        }
    }
    for (uint32_t i = 0; i < n; i++) {
        out.push_back({i, n + i, boundary_weight[i]});
    }
    for (uint32_t i = 0; i < n; i++) {
        for (uint32_t j = i + 1; j < n; j++) {
            out.push_back({n + i, n + j, 0.0});
        }
    }
    return out;
}

SyndromeGraph build_syndrome_graph(const MatchingGeometry &geometry, std::span<const uint8_t> syndrome,
                                   Pauli component, const WeightStrategy &strategy, std::span<const double> odds) {
    const CodeLayout &layout = geometry.layout();
    if (syndrome.size() != layout.num_stabilisers()) {
        throw std::invalid_argument("syndrome has " + std::to_string(syndrome.size()) + " bits for " +
                                    std::to_string(layout.num_stabilisers()) + " stabilisers");
    }
    if (component != Pauli::X && component != Pauli::Z) {
        throw std::invalid_argument("matching component must be X or Z");
    }
    if (strategy.kind == Strategy::bp_multipath && odds.size() != layout.num_qubits()) {
        throw std::invalid_argument("bp_multipath weights need one odds value per qubit");
    }
    strategy.validate();
    const Pauli kind = detecting_kind(component);
    SyndromeGraph g;
    g.component = component;
    for (uint32_t c = 0; c < layout.num_stabilisers(); c++) {
        if (syndrome[c] && layout.stabilisers[c].kind == kind) {
            g.checks.push_back(c);
        }
    }
    const size_t n = g.checks.size();
    g.pair_weight.assign(n * n, 0.0);
    g.boundary_weight.resize(n);
    for (size_t i = 0; i < n; i++) {
        const uint32_t a = g.checks[i];
        g.boundary_weight[i] = edge_weight(strategy, geometry.boundary_dag(a), geometry.boundary_paths(a), odds);
        for (size_t j = i + 1; j < n; j++) {
            const uint32_t b = g.checks[j];
            double w = edge_weight(strategy, geometry.pair_dag(a, b), geometry.pair_paths(a, b), odds);
            g.pair_weight[i * n + j] = w;
            g.pair_weight[j * n + i] = w;
        }
    }
    return g;
}

Matching mwpm(const SyndromeGraph &graph) {
    // Every perfect matching pairs some events among themselves and sends
    // the rest to their own virtual partners; the leftover virtual partners
    // pair up for free. The cost is therefore sum(boundary) minus the total
    // gain b_i + b_j - w_ij of the real pairs, so a maximum-gain matching on
    // the real events alone is exact.
    const size_t n = graph.num_real();
    std::vector<WeightedEdge> edges;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            int64_t gain = quantize(graph.boundary_weight[i] + graph.boundary_weight[j] - graph.pair(i, j));
            if (gain > 0) {
                edges.push_back({static_cast<int>(i), static_cast<int>(j), gain});
            }
        }
    }
    std::vector<int> mate = max_weight_matching(static_cast<int>(n), edges, false);

    Matching m;
    std::vector<uint32_t> free_virtual;
    for (size_t i = 0; i < n; i++) {
        if (mate[i] < 0) {
            m.pairs.emplace_back(static_cast<uint32_t>(i), static_cast<uint32_t>(n + i));
            m.total_weight += graph.boundary_weight[i];
        } else if (static_cast<size_t>(mate[i]) > i) {
            m.pairs.emplace_back(static_cast<uint32_t>(i), static_cast<uint32_t>(mate[i]));
            m.total_weight += graph.pair(i, static_cast<size_t>(mate[i]));
            free_virtual.push_back(static_cast<uint32_t>(n + i));
            free_virtual.push_back(static_cast<uint32_t>(n + static_cast<size_t>(mate[i])));
        }
    }
    std::sort(free_virtual.begin(), free_virtual.end());
    for (size_t k = 0; k + 1 < free_virtual.size(); k += 2) {
        m.pairs.emplace_back(free_virtual[k], free_virtual[k + 1]);
    }
    return m;
}

std::vector<std::pair<uint32_t, uint32_t>> min_weight_perfect_matching(
    size_t n, const std::vector<SyndromeGraph::Edge> &edges) {
    if (n % 2 != 0) {
        throw std::invalid_argument("perfect matching needs an even vertex count");
    }
    if (n == 0) {
        return {};
    }
    // Among maximum-cardinality matchings, maximising C - w minimises w.
    double top = 0.0;
    for (const auto &e : edges) {
        if (e.u >= n || e.v >= n || e.u == e.v) {
            throw std::invalid_argument("invalid edge");
        }
        top = std::max(top, std::abs(e.weight));
    }
    std::vector<WeightedEdge> flipped;
    for (const auto &e : edges) {
        flipped.push_back({static_cast<int>(e.u), static_cast<int>(e.v), quantize(2 * top + 1 - e.weight)});
    }
    std::vector<int> mate = max_weight_matching(static_cast<int>(n), flipped, true);
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (size_t v = 0; v < n; v++) {
        if (mate[v] < 0) {
            throw std::runtime_error("graph has no perfect matching");
        }
        if (static_cast<size_t>(mate[v]) > v) {
            out.emplace_back(static_cast<uint32_t>(v), static_cast<uint32_t>(mate[v]));
        }
    }
    return out;
}

void realise_correction(const MatchingGeometry &geometry, const SyndromeGraph &graph, const Matching &matching,
                        std::span<const double> odds, PauliError &correction) {
    const CodeLayout &layout = geometry.layout();
    if (correction.num_qubits() != layout.num_qubits()) {
        throw std::invalid_argument("correction size does not match the layout");
    }
    std::vector<double> flat;
    if (odds.empty()) {
        flat.assign(layout.num_qubits(), 1.0);
        odds = flat;
    }
    const size_t n = graph.num_real();
    std::vector<uint8_t> &plane = correction.plane(graph.component);
    for (const auto &[u, v] : matching.pairs) {
        const bool u_real = u < n;
        const bool v_real = v < n;
        std::vector<uint32_t> qubits;
        if (u_real && v_real) {
            qubits = max_odds_qubits(geometry.pair_dag(graph.checks[u], graph.checks[v]), odds);
        } else if (u_real || v_real) {
            uint32_t r = u_real ? u : v;
            uint32_t partner = u_real ? v : u;
            if (partner != n + r) {
                throw std::runtime_error("event matched to a foreign virtual vertex");
            }
            qubits = max_odds_qubits(geometry.boundary_dag(graph.checks[r]), odds);
        }
        for (uint32_t q : qubits) {
            plane[q] ^= 1;
        }
    }
}

}  // namespace mpsum
