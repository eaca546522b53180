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

#include "mpsum/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpsum {

const char *to_string(Strategy s) {
    switch (s) {
        case Strategy::manhattan:
            return "manhattan";
        case Strategy::path_count:
            return "pathcount";
        case Strategy::bp_multipath:
            return "bp-multipath";
        case Strategy::uniform:
            return "uniform";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    if (s == "manhattan") {
        return Strategy::manhattan;
    }
    if (s == "pathcount" || s == "path_count") {
        return Strategy::path_count;
    }
    if (s == "bp-multipath" || s == "bp_multipath") {
        return Strategy::bp_multipath;
    }
    if (s == "uniform") {
        return Strategy::uniform;
    }
    return std::nullopt;
}

void WeightStrategy::validate() const {
    if (kind == Strategy::path_count && !(p > 0.0 && p < 0.5)) {
        throw std::invalid_argument("path_count weights need 0 < p < 0.5, got " + std::to_string(p));
    }
    if (bp_rounds < 0) {
        throw std::invalid_argument("bp rounds must be nonnegative");
    }
}

QubitOdds odds_from_beliefs(std::span<const Dist4> beliefs, Pauli component) {
    if (component != Pauli::X && component != Pauli::Z) {
        throw std::invalid_argument("odds component must be X or Z");
    }
    // The other single-plane error that leaves this component unflipped.
    const int keep = component == Pauli::X ? 3 : 1;
    const int flip = component == Pauli::X ? 1 : 3;
    QubitOdds out;
    out.odds.resize(beliefs.size());
    for (size_t q = 0; q < beliefs.size(); q++) {
        const Dist4 &b = beliefs[q];
        double num = b[flip] + b[2];
        double den = b[0] + b[keep];
        double o = den > 0.0 ? num / den : kMaxOdds;
        if (!(o >= kMinOdds) || o > kMaxOdds) {
            o = std::clamp(std::isnan(o) ? 1.0 : o, kMinOdds, kMaxOdds);
            out.clamped = true;
        }
        out.odds[q] = o;
    }
    return out;
}

QubitOdds uniform_odds(size_t num_qubits, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("uniform odds need 0 < p < 1, got " + std::to_string(p));
    }
    return {std::vector<double>(num_qubits, p / (1.0 - p)), false};
}

double edge_weight(const WeightStrategy &strategy, const BoundingBoxDag &dag, uint64_t num_paths,
                   std::span<const double> odds) {
    switch (strategy.kind) {
        case Strategy::manhattan:
        case Strategy::uniform:
            return static_cast<double>(dag.min_length);
        case Strategy::path_count: {
            strategy.validate();
            double scale = std::log((1.0 - strategy.p) / strategy.p);
            return static_cast<double>(dag.min_length) - std::log(static_cast<double>(num_paths)) / scale;
        }
        case Strategy::bp_multipath: {
            double w = -std::log(path_sum_qubit_odds(dag, odds));
            return std::clamp(w, -kMaxWeight, kMaxWeight);
        }
    }
    throw std::invalid_argument("unknown weight strategy");
}

double edge_weight(const WeightStrategy &strategy, const BoundingBoxDag &dag, const QubitOdds &odds) {
    uint64_t count = strategy.kind == Strategy::path_count ? num_paths(dag) : 1;
    return edge_weight(strategy, dag, count, odds.odds);
}

}  // namespace mpsum
