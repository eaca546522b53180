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

#ifndef MPSUM_WEIGHTS_HPP
#define MPSUM_WEIGHTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mpsum/dagsum.hpp"
#include "mpsum/noise.hpp"

namespace mpsum {

enum class Strategy : uint8_t { manhattan, path_count, bp_multipath, uniform };

const char *to_string(Strategy s);
/// Accepts the CLI spellings ("pathcount", "bp-multipath") and the enum names.
std::optional<Strategy> parse_strategy(std::string_view s);

inline constexpr double kMinOdds = 1e-12;
inline constexpr double kMaxOdds = 1e12;
inline constexpr double kMaxWeight = 50.0;

struct WeightStrategy {
    Strategy kind = Strategy::manhattan;
    /// Per-qubit flip probability of the matched component (path_count).
    double p = 0.0;
    /// BP rounds for bp_multipath; 0 means the code distance.
    int bp_rounds = 0;

    /// Throws std::invalid_argument if the parameters do not fit the kind.
    void validate() const;
};

/// Per-qubit odds of an error in the matched component.
struct QubitOdds {
    std::vector<double> odds;
    /// Set when some ratio had to be clamped.
    bool clamped = false;
};

/// Odds of an error component T (X or Z) from quaternary beliefs.
QubitOdds odds_from_beliefs(std::span<const Dist4> beliefs, Pauli component);

QubitOdds uniform_odds(size_t num_qubits, double p);

/// Matching weight of one edge. `num_paths` is the cached count of `dag`
/// (path_count only); `odds` is used by bp_multipath only.
double edge_weight(const WeightStrategy &strategy, const BoundingBoxDag &dag, uint64_t num_paths,
                   std::span<const double> odds);

/// Convenience overload that counts paths itself.
double edge_weight(const WeightStrategy &strategy, const BoundingBoxDag &dag, const QubitOdds &odds);

}  // namespace mpsum

#endif
