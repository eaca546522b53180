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

// Brute-force reference implementations. Each is written independently of
// the library code it checks and is only practical on small inputs.

#ifndef MPSUM_TESTS_ORACLES_HPP
#define MPSUM_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "mpsum/bp.hpp"
#include "mpsum/dagsum.hpp"
#include "mpsum/lattice.hpp"
#include "mpsum/matching.hpp"

namespace oracle {

using mpsum::Dist4;
using mpsum::Pauli;

/// Every initial-to-final path of a DAG as a list of edge indices, by DFS.
inline std::vector<std::vector<uint32_t>> enumerate_paths(const mpsum::BoundingBoxDag &dag) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> stack;
    std::function<void(uint32_t)> walk = [&](uint32_t v) {
        for (uint32_t f : dag.finals) {
            if (f == v) {
                out.push_back(stack);
            }
        }
        for (uint32_t e = 0; e < dag.edges.size(); e++) {
            if (dag.edges[e].from == v) {
                stack.push_back(e);
                walk(dag.edges[e].to);
                stack.pop_back();
            }
        }
    };
    walk(dag.initial);
    return out;
}

inline double path_product(const std::vector<uint32_t> &path, const std::vector<double> &edge_odds) {
    double prod = 1.0;
    for (uint32_t e : path) {
        prod *= edge_odds[e];
    }
    return prod;
}

/// All minimum-length step sequences between two grid positions found by
/// exhaustive search over step sequences, with no use of the DAG builder.
inline uint64_t count_grid_paths(const mpsum::StepGrid &grid, mpsum::GridPos from, mpsum::GridPos to) {
    const int ds = to.s > from.s ? 1 : -1;
    const int dt = to.t > from.t ? 1 : -1;
    std::function<uint64_t(int, int)> go = [&](int s, int t) -> uint64_t {
        if (s == to.s && t == to.t) {
            return 1;
        }
        uint64_t total = 0;
        if (s != to.s && grid.step_qubit(s, t, ds, 0) >= 0) {
            total += go(s + ds, t);
        }
        if (t != to.t && grid.step_qubit(s, t, 0, dt) >= 0) {
            total += go(s, t + dt);
        }
        return total;
    };
    return go(from.s, from.t);
}

/// Minimum total weight over all perfect matchings, by recursion on the
/// lowest unmatched vertex. Returns the pairs of one optimum.
inline std::pair<double, std::vector<std::pair<uint32_t, uint32_t>>> min_perfect_matching(
    size_t n, const std::vector<mpsum::SyndromeGraph::Edge> &edges) {
    std::vector<std::vector<double>> w(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
    for (const auto &e : edges) {
        w[e.u][e.v] = std::min(w[e.u][e.v], e.weight);
        w[e.v][e.u] = w[e.u][e.v];
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<uint32_t, uint32_t>> best_pairs;
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    std::vector<bool> used(n, false);
    std::function<void(double)> rec = [&](double acc) {
        size_t i = 0;
        while (i < n && used[i]) {
            i++;
        }
        if (i == n) {
            if (acc < best) {
                best = acc;
                best_pairs = pairs;
            }
            return;
        }
        used[i] = true;
        for (size_t j = i + 1; j < n; j++) {
            if (!used[j] && std::isfinite(w[i][j])) {
                used[j] = true;
                pairs.emplace_back(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
                rec(acc + w[i][j]);
                pairs.pop_back();
                used[j] = false;
            }
        }
        used[i] = false;
    };
    rec(0.0);
    return {best, best_pairs};
}

inline bool anticommutes(Pauli kind, int e) {
    // Single-qubit Paulis anticommute iff both are non-identity and differ.
    return e != 0 && e != static_cast<int>(kind);
}

/// Check-to-qubit message by direct enumeration over all 4^(deg-1)
/// assignments of the other support qubits.
inline Dist4 check_message_direct(Pauli kind, const std::vector<Dist4> &others, bool syndrome) {
    Dist4 out{0, 0, 0, 0};
    const size_t m = others.size();
    size_t total = 1;
    for (size_t k = 0; k < m; k++) {
        total *= 4;
    }
    for (int target = 0; target < 4; target++) {
        for (size_t code = 0; code < total; code++) {
            size_t c = code;
            double weight = 1.0;
            int parity = anticommutes(kind, target) ? 1 : 0;
            for (size_t k = 0; k < m; k++) {
                int e = static_cast<int>(c % 4);
                c /= 4;
                weight *= others[k][static_cast<size_t>(e)];
                parity ^= anticommutes(kind, e) ? 1 : 0;
            }
            if (parity == (syndrome ? 1 : 0)) {
                out[static_cast<size_t>(target)] += weight;
            }
        }
    }
    double sum = out[0] + out[1] + out[2] + out[3];
    for (double &v : out) {
        v /= sum;
    }
    return out;
}

/// Exact posterior marginals given the syndrome, by enumerating all 4^n
/// errors on n qubits.
inline std::vector<Dist4> exact_marginals(size_t n, const std::vector<mpsum::Stabiliser> &checks,
                                          const std::vector<Dist4> &prior, const std::vector<uint8_t> &syndrome) {
    std::vector<Dist4> out(n, Dist4{0, 0, 0, 0});
    size_t total = 1;
    for (size_t k = 0; k < n; k++) {
        total *= 4;
    }
    std::vector<int> e(n);
    for (size_t code = 0; code < total; code++) {
        size_t c = code;
        double weight = 1.0;
        for (size_t q = 0; q < n; q++) {
            e[q] = static_cast<int>(c % 4);
            c /= 4;
            weight *= prior[q][static_cast<size_t>(e[q])];
        }
        bool ok = true;
        for (size_t k = 0; k < checks.size() && ok; k++) {
            int parity = 0;
            for (uint32_t q : checks[k].qubits) {
                parity ^= anticommutes(checks[k].kind, e[q]) ? 1 : 0;
            }
            ok = parity == syndrome[k];
        }
        if (!ok) {
            continue;
        }
        for (size_t q = 0; q < n; q++) {
            out[q][static_cast<size_t>(e[q])] += weight;
        }
    }
    for (Dist4 &d : out) {
        double sum = d[0] + d[1] + d[2] + d[3];
        for (double &v : d) {
            v /= sum;
        }
    }
    return out;
}

inline Dist4 random_dist(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    Dist4 d{u(rng), u(rng), u(rng), u(rng)};
    double s = d[0] + d[1] + d[2] + d[3];
    for (double &v : d) {
        v /= s;
    }
    return d;
}

}  // namespace oracle

#endif
