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

#ifndef MPSUM_MATCHING_HPP
#define MPSUM_MATCHING_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "mpsum/dagsum.hpp"
#include "mpsum/lattice.hpp"
#include "mpsum/weights.hpp"

namespace mpsum {

/// Every pair and boundary DAG of a layout, built once and shared
/// read-only by all decodes on that layout.
class MatchingGeometry {
   public:
    explicit MatchingGeometry(std::shared_ptr<const CodeLayout> layout);

    const CodeLayout &layout() const {
        return *layout_;
    }
    const std::shared_ptr<const CodeLayout> &layout_ptr() const {
        return layout_;
    }
    /// Minimum-length paths between two stabilisers of the same kind.
    const BoundingBoxDag &pair_dag(uint32_t check_a, uint32_t check_b) const;
    uint64_t pair_paths(uint32_t check_a, uint32_t check_b) const;
    const BoundingBoxDag &boundary_dag(uint32_t check) const;
    uint64_t boundary_paths(uint32_t check) const;

   private:
    size_t pair_slot(uint32_t check_a, uint32_t check_b) const;

    std::shared_ptr<const CodeLayout> layout_;
    std::vector<uint32_t> local_;  // index of each check among its kind
    std::array<size_t, 2> kind_count_{};
    std::array<std::vector<BoundingBoxDag>, 2> pairs_;
    std::array<std::vector<uint64_t>, 2> pair_count_;
    std::vector<BoundingBoxDag> boundary_;
    std::vector<uint64_t> boundary_count_;
};

/// Detection events of one error component with their virtual partners.
/// Vertex i < n is the event at checks[i]; vertex n + i is its virtual
/// partner. Real-real weights come from pair DAGs, real-virtual weights from
/// boundary DAGs, and virtual-virtual edges are free.
struct SyndromeGraph {
    Pauli component = Pauli::X;
    std::vector<uint32_t> checks;
    std::vector<double> pair_weight;      // n * n, symmetric, diagonal unused
    std::vector<double> boundary_weight;  // n

    size_t num_real() const {
        return checks.size();
    }
    size_t num_vertices() const {
        return 2 * checks.size();
    }
    double pair(size_t i, size_t j) const {
        return pair_weight[i * checks.size() + j];
    }

    struct Edge {
        uint32_t u;
        uint32_t v;
        double weight;
    };
    /// The full edge list: real-real, then real-virtual, then virtual-virtual.
    std::vector<Edge> edges() const;
};

/// Perfect matching on a syndrome graph.
struct Matching {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    double total_weight = 0.0;
};

/// `syndrome` carries one bit per stabiliser; only bits of the kind that
/// detects `component` are read. `odds` is per qubit (bp_multipath only).
SyndromeGraph build_syndrome_graph(const MatchingGeometry &geometry, std::span<const uint8_t> syndrome,
                                   Pauli component, const WeightStrategy &strategy, std::span<const double> odds);

/// Exact minimum-weight perfect matching of a syndrome graph.
Matching mwpm(const SyndromeGraph &graph);

/// Exact minimum-weight perfect matching of an arbitrary graph on n
/// vertices. Throws if no perfect matching exists.
std::vector<std::pair<uint32_t, uint32_t>> min_weight_perfect_matching(
    size_t n, const std::vector<SyndromeGraph::Edge> &edges);

/// Flips, on the graph's error plane of `correction`, the qubits of the
/// maximum-odds path of every matched real-real and real-virtual pair.
/// `odds` may be empty, meaning all qubits are equally likely.
void realise_correction(const MatchingGeometry &geometry, const SyndromeGraph &graph, const Matching &matching,
                        std::span<const double> odds, PauliError &correction);

/// Weight quantum used when handing real weights to the integer solver.
inline constexpr double kWeightScale = 1e9;

}  // namespace mpsum

#endif
