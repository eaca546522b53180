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

#ifndef MPSUM_DAGSUM_HPP
#define MPSUM_DAGSUM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mpsum/lattice.hpp"

namespace mpsum {

struct DagEdge {
    uint32_t from = 0;
    uint32_t to = 0;
    /// Qubit crossed by this step, or -1 for a free edge (odds fixed at 1).
    int32_t qubit = -1;
};

/// Directed acyclic graph of minimum-length paths from one detection event
/// to another detection event, to the boundary, or across the lattice.
///
/// Builders emit vertices in topological order with edges sorted by source
/// vertex and set `sorted`; hand-built graphs may leave it false, in which
/// case evaluation sorts them first and rejects cycles.
struct BoundingBoxDag {
    std::vector<Coord> vertices;
    std::vector<DagEdge> edges;
    uint32_t initial = 0;
    std::vector<uint32_t> finals;
    /// Number of qubit-crossing steps on every initial-to-final path.
    int min_length = 0;
    bool sorted = false;

    uint32_t add_vertex(Coord c) {
        vertices.push_back(c);
        return static_cast<uint32_t>(vertices.size() - 1);
    }
    void add_edge(uint32_t from, uint32_t to, int32_t qubit) {
        edges.push_back({from, to, qubit});
    }
};

/// All minimum-length step sequences between two stabilisers of one kind
/// that stay on the lattice. Steps that would cross a qubit outside the
/// lattice are dropped, so clipped boxes have fewer paths than the binomial.
BoundingBoxDag build_pair_dag(const CodeLayout &layout, uint32_t check_a, uint32_t check_b);

/// Minimum-length paths from a stabiliser to the nearest virtual exits.
BoundingBoxDag build_boundary_dag(const CodeLayout &layout, uint32_t check);

/// Minimum-length paths crossing the lattice between its two opposite
/// boundaries for the given stabiliser kind, i.e. minimum-weight logical
/// strings. Exits hang off a free source and a free sink vertex.
BoundingBoxDag build_traversal_dag(const CodeLayout &layout, Pauli kind);

/// Vertex order in which every edge points forward. Throws on a cycle.
std::vector<uint32_t> topological_order(const BoundingBoxDag &dag);

/// Exact number of initial-to-final paths. Throws on cycle or on overflow.
uint64_t num_paths(const BoundingBoxDag &dag);

/// Sum over paths of the product of edge odds. `edge_odds` is indexed like
/// `dag.edges`; all entries must be positive and finite.
double path_sum(const BoundingBoxDag &dag, std::span<const double> edge_odds);

/// Edge odds looked up from per-qubit odds; free edges get 1.
std::vector<double> edge_odds_from_qubits(const BoundingBoxDag &dag, std::span<const double> qubit_odds);

/// Path sum with per-qubit odds, without materialising the edge vector.
double path_sum_qubit_odds(const BoundingBoxDag &dag, std::span<const double> qubit_odds);

/// Maximum-odds path as a list of edge indices. Ties go to the successor
/// with the lexicographically smallest coordinate at each step.
std::vector<uint32_t> max_odds_path(const BoundingBoxDag &dag, std::span<const double> edge_odds);

/// Qubits crossed by max_odds_path, using per-qubit odds.
std::vector<uint32_t> max_odds_qubits(const BoundingBoxDag &dag, std::span<const double> qubit_odds);

}  // namespace mpsum

#endif
