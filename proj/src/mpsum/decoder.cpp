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

#include "mpsum/decoder.hpp"

#include <stdexcept>

namespace mpsum {

Decoder::Decoder(std::shared_ptr<const MatchingGeometry> geometry, NoiseModel noise, Strategy strategy,
                 int bp_rounds)
    : geometry_(std::move(geometry)), noise_(noise) {
    if (!geometry_) {
        throw std::invalid_argument("null matching geometry");
    }
    channel(noise_);  // validates p
    strategy_.kind = strategy;
    strategy_.bp_rounds = bp_rounds > 0 ? bp_rounds : layout().distance;
    if (strategy == Strategy::path_count) {
        strategy_.p = plane_flip_probability(noise_);
    }
    strategy_.validate();
    if (strategy == Strategy::bp_multipath) {
        const Dist4 ch = channel(noise_);
        if (ch[0] <= 0.0 || ch[0] >= 1.0) {
            throw std::invalid_argument("bp_multipath needs 0 < p < 1");
        }
        tanner_ = tanner_graph(layout());
        prior_.assign(layout().num_qubits(), ch);
    }
}

DecodeOutcome Decoder::decode(const PauliError &error) const {
    const CodeLayout &lay = layout();
    if (error.num_qubits() != lay.num_qubits()) {
        throw std::invalid_argument("error size does not match the layout");
    }
    const bool iid = noise_.kind == NoiseKind::iid_xz;

    thread_local std::vector<uint8_t> syndrome;
    thread_local std::vector<uint8_t> z_part;
    if (iid) {
        extract_plane_syndrome(lay, Pauli::X, error.x_bits, syndrome);
    } else {
        extract_plane_syndrome(lay, Pauli::X, error.x_bits, syndrome);
        extract_plane_syndrome(lay, Pauli::Z, error.z_bits, z_part);
        for (size_t c = 0; c < syndrome.size(); c++) {
            syndrome[c] |= z_part[c];
        }
    }

    DecodeOutcome out;
    out.correction = PauliError(lay.num_qubits());

    thread_local BeliefState beliefs;
    const bool use_bp = strategy_.kind == Strategy::bp_multipath;
    bool any_lit = false;
    for (uint8_t b : syndrome) {
        any_lit |= b != 0;
    }
    if (use_bp && any_lit) {
        run_bp(tanner_, prior_, syndrome, {strategy_.bp_rounds, 0.0}, beliefs);
        out.bp_rounds = beliefs.round;
        out.bp_degenerate = beliefs.degenerate;
    }

    const Pauli components[2] = {Pauli::X, Pauli::Z};
    for (Pauli component : components) {
        if (iid && component == Pauli::Z) {
            break;
        }
        QubitOdds odds;
        if (use_bp && any_lit) {
            odds = odds_from_beliefs(beliefs.beliefs, component);
        } else if (use_bp) {
            odds.odds.assign(lay.num_qubits(), 1.0);
        }
        SyndromeGraph graph = build_syndrome_graph(*geometry_, syndrome, component, strategy_, odds.odds);
        if (graph.num_real() == 0) {
            continue;
        }
        Matching matching = mwpm(graph);
        (component == Pauli::X ? out.weight_x : out.weight_z) = matching.total_weight;
        realise_correction(*geometry_, graph, matching, odds.odds, out.correction);
    }

    PauliError residual = error ^ out.correction;
    if (iid) {
        thread_local std::vector<uint8_t> check;
        extract_plane_syndrome(lay, Pauli::X, residual.x_bits, check);
        for (uint8_t b : check) {
            if (b) {
                throw std::logic_error("correction does not cancel the syndrome");
            }
        }
        out.residual_class = flips_logical(lay, Pauli::X, residual.x_bits) ? LogicalClass::X : LogicalClass::I;
    } else {
        out.residual_class = logical_class(lay, residual);
    }
    out.success = out.residual_class == LogicalClass::I;
    return out;
}

bool Decoder::run_trial(RngStream &rng) const {
    PauliError error = sample(noise_, layout(), rng);
    return decode(error).success;
}

}  // namespace mpsum
