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

#ifndef MPSUM_BLOSSOM_HPP
#define MPSUM_BLOSSOM_HPP

#include <cstdint>
#include <vector>

namespace mpsum {

struct WeightedEdge {
    int u = 0;
    int v = 0;
    int64_t weight = 0;
};

/// Maximum-weight matching on a general graph with integer weights, by
/// Edmonds' primal-dual blossom algorithm in O(n^3).
///
/// With `max_cardinality` set, returns the heaviest among the matchings of
/// maximum size. Returns mate[v] (or -1) for each of the n vertices. The
/// result is a deterministic function of the vertex count and edge order.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge> &edges, bool max_cardinality);

}  // namespace mpsum

#endif
