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

#include "mpsum/dagsum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpsum {

namespace {

constexpr int kDirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

// Sentinel coordinates for the free source and sink of a traversal graph.
constexpr Coord kSourceCoord{std::numeric_limits<int>::min(), std::numeric_limits<int>::min()};
constexpr Coord kSinkCoord{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};

Pauli check_kind(const CodeLayout &layout, uint32_t check) {
    if (check >= layout.num_stabilisers()) {
        throw std::invalid_argument("stabiliser index " + std::to_string(check) + " out of range");
    }
    return layout.stabilisers[check].kind;
}

// Appends layers to `dag` starting from `start` grid cells (already added
// as dag vertices with indices `start_ids`). A cell w becomes a successor of
// u in layer k when the step u -> w crosses a qubit and accept(u, w, k + 1)
// holds. Returns dag vertex ids of the final layer.
template <typename Accept>
std::vector<uint32_t> grow_layers(BoundingBoxDag &dag, const StepGrid &grid, std::vector<size_t> layer,
                                  std::vector<uint32_t> layer_ids, int num_layers, Accept accept) {
    std::vector<int32_t> id_of(grid.check.size(), -1);
    for (size_t k = 0; k < layer.size(); k++) {
        id_of[layer[k]] = static_cast<int32_t>(layer_ids[k]);
    }
    for (int step = 0; step < num_layers; step++) {
        std::vector<size_t> next;
        for (size_t cell : layer) {
            int s = static_cast<int>(cell % static_cast<size_t>(grid.width));
            int t = static_cast<int>(cell / static_cast<size_t>(grid.width));
            for (const auto &dir : kDirs) {
                if (grid.step_qubit(s, t, dir[0], dir[1]) < 0) {
                    continue;
                }
                size_t w = grid.index(s + dir[0], t + dir[1]);
                if (accept(cell, w, step + 1)) {
                    next.push_back(w);
                }
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        std::vector<uint32_t> next_ids;
        for (size_t w : next) {
            uint32_t id = dag.add_vertex(grid.coord[w]);
            id_of[w] = static_cast<int32_t>(id);
            next_ids.push_back(id);
        }
        for (size_t cell : layer) {
            int s = static_cast<int>(cell % static_cast<size_t>(grid.width));
            int t = static_cast<int>(cell / static_cast<size_t>(grid.width));
            for (const auto &dir : kDirs) {
                int32_t q = grid.step_qubit(s, t, dir[0], dir[1]);
                if (q < 0) {
                    continue;
                }
                size_t w = grid.index(s + dir[0], t + dir[1]);
                if (std::binary_search(next.begin(), next.end(), w) && accept(cell, w, step + 1)) {
                    dag.add_edge(static_cast<uint32_t>(id_of[cell]), static_cast<uint32_t>(id_of[w]), q);
                }
            }
        }
        layer = std::move(next);
        layer_ids = std::move(next_ids);
    }
    return layer_ids;
}

std::vector<int32_t> bfs_from_side(const StepGrid &grid, uint8_t side) {
    std::vector<int32_t> dist(grid.check.size(), -1);
    std::deque<size_t> queue;
    for (size_t k = 0; k < grid.check.size(); k++) {
        if (grid.exit_side[k] == side) {
            dist[k] = 0;
            queue.push_back(k);
        }
    }
    while (!queue.empty()) {
        size_t cell = queue.front();
        queue.pop_front();
        // Exits on the far side terminate a path.
        if (grid.exit_side[cell] != 0 && grid.exit_side[cell] != side) {
            continue;
        }
        int s = static_cast<int>(cell % static_cast<size_t>(grid.width));
        int t = static_cast<int>(cell / static_cast<size_t>(grid.width));
        for (const auto &dir : kDirs) {
            if (grid.step_qubit(s, t, dir[0], dir[1]) < 0) {
                continue;
            }
            size_t w = grid.index(s + dir[0], t + dir[1]);
            if (dist[w] < 0) {
                dist[w] = dist[cell] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

void check_edge_odds(const BoundingBoxDag &dag, std::span<const double> edge_odds) {
    if (edge_odds.size() != dag.edges.size()) {
        throw std::invalid_argument("odds vector has " + std::to_string(edge_odds.size()) + " entries for " +
                                    std::to_string(dag.edges.size()) + " edges");
    }
    for (double o : edge_odds) {
        if (!(o > 0.0) || !std::isfinite(o)) {
            throw std::invalid_argument("edge odds must be positive and finite");
        }
    }
}

// Edge indices grouped by source vertex, sources in topological order.
struct Adjacency {
    std::vector<uint32_t> order;
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> out;
};

Adjacency adjacency(const BoundingBoxDag &dag) {
    Adjacency adj;
    adj.order = topological_order(dag);
    const size_t n = dag.vertices.size();
    adj.offsets.assign(n + 1, 0);
    for (const DagEdge &e : dag.edges) {
        adj.offsets[e.from + 1]++;
    }
    for (size_t v = 0; v < n; v++) {
        adj.offsets[v + 1] += adj.offsets[v];
    }
    adj.out.resize(dag.edges.size());
    std::vector<uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (uint32_t k = 0; k < dag.edges.size(); k++) {
        adj.out[fill[dag.edges[k].from]++] = k;
    }
    return adj;
}

void check_vertices(const BoundingBoxDag &dag) {
    const size_t n = dag.vertices.size();
    if (dag.initial >= n) {
        throw std::invalid_argument("initial vertex out of range");
    }
    for (uint32_t f : dag.finals) {
        if (f >= n) {
            throw std::invalid_argument("final vertex out of range");
        }
    }
}

}  // namespace

BoundingBoxDag build_pair_dag(const CodeLayout &layout, uint32_t check_a, uint32_t check_b) {
    const Pauli kind = check_kind(layout, check_a);
    if (check_kind(layout, check_b) != kind) {
        throw std::invalid_argument("pair endpoints must be stabilisers of the same kind");
    }
    if (check_a == check_b) {
        throw std::invalid_argument("pair endpoints must differ");
    }
    const StepGrid &grid = layout.grid(kind);
    const GridPos p0 = layout.stabiliser_pos[check_a];
    const GridPos p1 = layout.stabiliser_pos[check_b];
    const int ds = p1.s > p0.s ? 1 : -1;
    const int dt = p1.t > p0.t ? 1 : -1;
    const int ns = std::abs(p1.s - p0.s);
    const int nt = std::abs(p1.t - p0.t);
    const int cols = nt + 1;
    auto box = [cols](int i, int j) {
        return static_cast<size_t>(i * cols + j);
    };
    auto step_s = [&](int i, int j) {
        return grid.step_qubit(p0.s + i * ds, p0.t + j * dt, ds, 0);
    };
    auto step_t = [&](int i, int j) {
        return grid.step_qubit(p0.s + i * ds, p0.t + j * dt, 0, dt);
    };

    std::vector<uint8_t> reach(static_cast<size_t>((ns + 1) * cols), 0);
    std::vector<uint8_t> coreach(reach.size(), 0);
    reach[box(0, 0)] = 1;
    for (int i = 0; i <= ns; i++) {
        for (int j = 0; j <= nt; j++) {
            if (!reach[box(i, j)]) {
                continue;
            }
            if (i < ns && step_s(i, j) >= 0) {
                reach[box(i + 1, j)] = 1;
            }
            if (j < nt && step_t(i, j) >= 0) {
                reach[box(i, j + 1)] = 1;
            }
        }
    }
    if (!reach[box(ns, nt)]) {
        throw std::runtime_error("no minimum-length path between stabilisers " + std::to_string(check_a) +
                                 " and " + std::to_string(check_b));
    }
    coreach[box(ns, nt)] = 1;
    for (int i = ns; i >= 0; i--) {
        for (int j = nt; j >= 0; j--) {
            if (i < ns && coreach[box(i + 1, j)] && step_s(i, j) >= 0) {
                coreach[box(i, j)] = 1;
            }
            if (j < nt && coreach[box(i, j + 1)] && step_t(i, j) >= 0) {
                coreach[box(i, j)] = 1;
            }
        }
    }

    BoundingBoxDag dag;
    std::vector<int32_t> id(reach.size(), -1);
    for (int layer = 0; layer <= ns + nt; layer++) {
        for (int i = std::max(0, layer - nt); i <= std::min(ns, layer); i++) {
            int j = layer - i;
            if (reach[box(i, j)] && coreach[box(i, j)]) {
                size_t cell = grid.index(p0.s + i * ds, p0.t + j * dt);
                id[box(i, j)] = static_cast<int32_t>(dag.add_vertex(grid.coord[cell]));
            }
        }
    }
    for (int layer = 0; layer < ns + nt; layer++) {
        for (int i = std::max(0, layer - nt); i <= std::min(ns, layer); i++) {
            int j = layer - i;
            int32_t from = id[box(i, j)];
            if (from < 0) {
                continue;
            }
            if (i < ns && id[box(i + 1, j)] >= 0 && step_s(i, j) >= 0) {
                dag.add_edge(static_cast<uint32_t>(from), static_cast<uint32_t>(id[box(i + 1, j)]), step_s(i, j));
            }
            if (j < nt && id[box(i, j + 1)] >= 0 && step_t(i, j) >= 0) {
                dag.add_edge(static_cast<uint32_t>(from), static_cast<uint32_t>(id[box(i, j + 1)]), step_t(i, j));
            }
        }
    }
    dag.initial = static_cast<uint32_t>(id[box(0, 0)]);
    dag.finals = {static_cast<uint32_t>(id[box(ns, nt)])};
    dag.min_length = ns + nt;
    dag.sorted = true;
    return dag;
}

BoundingBoxDag build_boundary_dag(const CodeLayout &layout, uint32_t check) {
    const Pauli kind = check_kind(layout, check);
    const StepGrid &grid = layout.grid(kind);
    const GridPos p = layout.stabiliser_pos[check];
    const size_t start = grid.index(p.s, p.t);
    const int dist = grid.exit_distance[start];
    if (dist <= 0) {
        throw std::runtime_error("stabiliser " + std::to_string(check) + " cannot reach the boundary");
    }
    BoundingBoxDag dag;
    dag.initial = dag.add_vertex(grid.coord[start]);
    dag.finals = grow_layers(dag, grid, {start}, {dag.initial}, dist, [&](size_t, size_t w, int layer) {
        return grid.exit_distance[w] == dist - layer;
    });
    dag.min_length = dist;
    dag.sorted = true;
    return dag;
}

BoundingBoxDag build_traversal_dag(const CodeLayout &layout, Pauli kind) {
    const StepGrid &grid = layout.grid(kind);
    const std::vector<int32_t> from_first = bfs_from_side(grid, 1);
    const std::vector<int32_t> from_second = bfs_from_side(grid, 2);
    int length = std::numeric_limits<int>::max();
    for (size_t k = 0; k < grid.check.size(); k++) {
        if (grid.exit_side[k] == 2 && from_first[k] >= 0) {
            length = std::min(length, from_first[k]);
        }
    }
    if (length == std::numeric_limits<int>::max()) {
        throw std::runtime_error("no path crosses the lattice");
    }
    auto on_min_path = [&](size_t k) {
        return from_first[k] >= 0 && from_second[k] >= 0 && from_first[k] + from_second[k] == length;
    };

    BoundingBoxDag dag;
    dag.initial = dag.add_vertex(kSourceCoord);
    std::vector<size_t> first;
    std::vector<uint32_t> first_ids;
    for (size_t k = 0; k < grid.check.size(); k++) {
        if (grid.exit_side[k] == 1 && on_min_path(k)) {
            first.push_back(k);
            first_ids.push_back(dag.add_vertex(grid.coord[k]));
        }
    }
    for (uint32_t id : first_ids) {
        dag.add_edge(dag.initial, id, -1);
    }
    std::vector<uint32_t> last =
        grow_layers(dag, grid, first, first_ids, length, [&](size_t u, size_t w, int layer) {
            return grid.exit_side[u] != 2 && grid.exit_side[w] != 1 && from_first[w] == layer && on_min_path(w);
        });
    uint32_t sink = dag.add_vertex(kSinkCoord);
    for (uint32_t id : last) {
        dag.add_edge(id, sink, -1);
    }
    dag.finals = {sink};
    dag.min_length = length;
    dag.sorted = true;
    return dag;
}

std::vector<uint32_t> topological_order(const BoundingBoxDag &dag) {
    const size_t n = dag.vertices.size();
    std::vector<uint32_t> indegree(n, 0);
    std::vector<std::vector<uint32_t>> out(n);
    for (const DagEdge &e : dag.edges) {
        if (e.from >= n || e.to >= n) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        indegree[e.to]++;
        out[e.from].push_back(e.to);
    }
    std::deque<uint32_t> ready;
    for (uint32_t v = 0; v < n; v++) {
        if (indegree[v] == 0) {
            ready.push_back(v);
        }
    }
    std::vector<uint32_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        uint32_t v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (uint32_t w : out[v]) {
            if (--indegree[w] == 0) {
                ready.push_back(w);
            }
        }
    }
    if (order.size() != n) {
        throw std::invalid_argument("graph contains a cycle");
    }
    return order;
}

uint64_t num_paths(const BoundingBoxDag &dag) {
    check_vertices(dag);
    Adjacency adj = adjacency(dag);
    std::vector<uint64_t> count(dag.vertices.size(), 0);
    count[dag.initial] = 1;
    for (uint32_t v : adj.order) {
        if (count[v] == 0) {
            continue;
        }
        for (uint32_t k = adj.offsets[v]; k < adj.offsets[v + 1]; k++) {
            uint32_t w = dag.edges[adj.out[k]].to;
            if (__builtin_add_overflow(count[w], count[v], &count[w])) {
                throw std::overflow_error("path count exceeds 64 bits");
            }
        }
    }
    uint64_t total = 0;
    for (uint32_t f : dag.finals) {
        if (__builtin_add_overflow(total, count[f], &total)) {
            throw std::overflow_error("path count exceeds 64 bits");
        }
    }
    return total;
}

double path_sum(const BoundingBoxDag &dag, std::span<const double> edge_odds) {
    check_vertices(dag);
    check_edge_odds(dag, edge_odds);
    std::vector<double> acc(dag.vertices.size(), 0.0);
    acc[dag.initial] = 1.0;
    if (dag.sorted) {
        for (size_t k = 0; k < dag.edges.size(); k++) {
            acc[dag.edges[k].to] += edge_odds[k] * acc[dag.edges[k].from];
        }
    } else {
        Adjacency adj = adjacency(dag);
        for (uint32_t v : adj.order) {
            for (uint32_t k = adj.offsets[v]; k < adj.offsets[v + 1]; k++) {
                uint32_t e = adj.out[k];
                acc[dag.edges[e].to] += edge_odds[e] * acc[v];
            }
        }
    }
    double total = 0.0;
    for (uint32_t f : dag.finals) {
        total += acc[f];
    }
    return total;
}

std::vector<double> edge_odds_from_qubits(const BoundingBoxDag &dag, std::span<const double> qubit_odds) {
    std::vector<double> out(dag.edges.size(), 1.0);
    for (size_t k = 0; k < dag.edges.size(); k++) {
        int32_t q = dag.edges[k].qubit;
        if (q >= 0) {
            if (static_cast<size_t>(q) >= qubit_odds.size()) {
                throw std::invalid_argument("qubit odds vector too short");
            }
            out[k] = qubit_odds[static_cast<size_t>(q)];
        }
    }
    return out;
}

double path_sum_qubit_odds(const BoundingBoxDag &dag, std::span<const double> qubit_odds) {
    if (!dag.sorted) {
        return path_sum(dag, edge_odds_from_qubits(dag, qubit_odds));
    }
    // Hot path: builder-made DAGs are already in evaluation order.
    thread_local std::vector<double> acc;
    acc.assign(dag.vertices.size(), 0.0);
    acc[dag.initial] = 1.0;
    for (const DagEdge &e : dag.edges) {
        double o = e.qubit >= 0 ? qubit_odds[static_cast<size_t>(e.qubit)] : 1.0;
        acc[e.to] += o * acc[e.from];
    }
    double total = 0.0;
    for (uint32_t f : dag.finals) {
        total += acc[f];
    }
    return total;
}

std::vector<uint32_t> max_odds_path(const BoundingBoxDag &dag, std::span<const double> edge_odds) {
    check_vertices(dag);
    check_edge_odds(dag, edge_odds);
    Adjacency adj = adjacency(dag);
    const size_t n = dag.vertices.size();
    std::vector<uint8_t> is_final(n, 0);
    for (uint32_t f : dag.finals) {
        is_final[f] = 1;
    }
    std::vector<double> best(n, 0.0);
    for (auto it = adj.order.rbegin(); it != adj.order.rend(); ++it) {
        uint32_t v = *it;
        double b = is_final[v] ? 1.0 : 0.0;
        for (uint32_t k = adj.offsets[v]; k < adj.offsets[v + 1]; k++) {
            uint32_t e = adj.out[k];
            b = std::max(b, edge_odds[e] * best[dag.edges[e].to]);
        }
        best[v] = b;
    }
    if (best[dag.initial] == 0.0) {
        throw std::runtime_error("no path from the initial vertex reaches a final vertex");
    }

    std::vector<uint32_t> path;
    uint32_t v = dag.initial;
    while (true) {
        int64_t chosen = -1;
        double chosen_value = 0.0;
        for (uint32_t k = adj.offsets[v]; k < adj.offsets[v + 1]; k++) {
            uint32_t e = adj.out[k];
            double value = edge_odds[e] * best[dag.edges[e].to];
            if (value == 0.0) {
                continue;
            }
            if (chosen < 0 || value > chosen_value ||
                (value == chosen_value &&
                 dag.vertices[dag.edges[e].to] < dag.vertices[dag.edges[static_cast<size_t>(chosen)].to])) {
                chosen = e;
                chosen_value = value;
            }
        }
        if (chosen < 0 || (is_final[v] && chosen_value <= 1.0)) {
            break;
        }
        path.push_back(static_cast<uint32_t>(chosen));
        v = dag.edges[static_cast<size_t>(chosen)].to;
    }
    return path;
}

std::vector<uint32_t> max_odds_qubits(const BoundingBoxDag &dag, std::span<const double> qubit_odds) {
    std::vector<uint32_t> qubits;
    for (uint32_t e : max_odds_path(dag, edge_odds_from_qubits(dag, qubit_odds))) {
        if (dag.edges[e].qubit >= 0) {
            qubits.push_back(static_cast<uint32_t>(dag.edges[e].qubit));
        }
    }
    return qubits;
}

}  // namespace mpsum
