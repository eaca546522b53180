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

#include "mpsum/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpsum {

bool normalize(Dist4 &d) {
    double total = d[0] + d[1] + d[2] + d[3];
    if (!(total > 0.0) || !std::isfinite(total)) {
        d = {0.25, 0.25, 0.25, 0.25};
        return false;
    }
    for (double &v : d) {
        v /= total;
    }
    return true;
}

Dist4 check_message(Pauli check_kind, std::span<const Dist4> others, bool syndrome_bit, bool *degenerate) {
    // Only the parity of anticommuting factors matters, so each incoming
    // message collapses to (even mass, odd mass) and the product over the
    // other qubits reduces to the difference even - odd.
    double even = 1.0;
    double odd = 0.0;
    for (const Dist4 &m : others) {
        double m_even = 0.0;
        double m_odd = 0.0;
        for (int k = 0; k < 4; k++) {
            (anticommutes(check_kind, static_cast<Pauli>(k)) ? m_odd : m_even) += m[k];
        }
        double next_even = even * m_even + odd * m_odd;
        double next_odd = even * m_odd + odd * m_even;
        even = next_even;
        odd = next_odd;
    }
    Dist4 out;
    for (int k = 0; k < 4; k++) {
        bool flip = anticommutes(check_kind, static_cast<Pauli>(k)) != syndrome_bit;
        out[k] = flip ? odd : even;
    }
    bool ok = normalize(out);
    if (!ok && degenerate != nullptr) {
        *degenerate = true;
    }
    return out;
}

Dist4 qubit_message(const Dist4 &prior, std::span<const Dist4> others, bool *degenerate) {
    Dist4 out = prior;
    for (const Dist4 &m : others) {
        for (int k = 0; k < 4; k++) {
            out[k] *= m[k];
        }
        // Renormalise as we go so long products cannot underflow.
        double total = out[0] + out[1] + out[2] + out[3];
        if (total > 0.0) {
            for (double &v : out) {
                v /= total;
            }
        }
    }
    bool ok = normalize(out);
    if (!ok && degenerate != nullptr) {
        *degenerate = true;
    }
    return out;
}

BeliefState run_bp(const TannerGraph &tanner, std::span<const Dist4> prior, std::span<const uint8_t> syndrome,
                   const BpOptions &options, const BpRoundCallback &on_round) {
    BeliefState state;
    run_bp(tanner, prior, syndrome, options, state, on_round);
    return state;
}

void run_bp(const TannerGraph &tanner, std::span<const Dist4> prior, std::span<const uint8_t> syndrome,
            const BpOptions &options, BeliefState &state, const BpRoundCallback &on_round) {
    if (prior.size() != tanner.num_qubits) {
        throw std::invalid_argument("prior has " + std::to_string(prior.size()) + " entries for " +
                                    std::to_string(tanner.num_qubits) + " qubits");
    }
    if (syndrome.size() != tanner.num_checks()) {
        throw std::invalid_argument("syndrome has " + std::to_string(syndrome.size()) + " bits for " +
                                    std::to_string(tanner.num_checks()) + " checks");
    }
    if (options.rounds < 0) {
        throw std::invalid_argument("round count must be nonnegative");
    }
    for (const Dist4 &p : prior) {
        double total = p[0] + p[1] + p[2] + p[3];
        if (std::abs(total - 1.0) > 1e-9 || *std::min_element(p.begin(), p.end()) < 0.0) {
            throw std::invalid_argument("prior entries must be normalised distributions");
        }
    }

    const size_t num_edges = tanner.num_edges();
    state.prior.assign(prior.begin(), prior.end());
    state.beliefs.assign(prior.begin(), prior.end());
    state.messages_qc.resize(num_edges);
    for (size_t e = 0; e < num_edges; e++) {
        state.messages_qc[e] = prior[tanner.edge_qubit[e]];
    }
    state.messages_cq.assign(num_edges, Dist4{0.25, 0.25, 0.25, 0.25});
    state.round = 0;
    state.degenerate = false;

    Dist4 scratch[8];
    for (int round = 1; round <= options.rounds; round++) {
        for (size_t c = 0; c < tanner.num_checks(); c++) {
            const uint32_t begin = tanner.check_offsets[c];
            const uint32_t end = tanner.check_offsets[c + 1];
            if (end - begin > 8) {
                throw std::invalid_argument("check degree exceeds 8");
            }
            for (uint32_t e = begin; e < end; e++) {
                size_t n = 0;
                for (uint32_t f = begin; f < end; f++) {
                    if (f != e) {
                        scratch[n++] = state.messages_qc[f];
                    }
                }
                state.messages_cq[e] = check_message(tanner.check_kind[c], std::span<const Dist4>(scratch, n),
                                                     syndrome[c] != 0, &state.degenerate);
            }
        }

        double delta = 0.0;
        for (size_t q = 0; q < tanner.num_qubits; q++) {
            const uint32_t begin = tanner.qubit_offsets[q];
            const uint32_t end = tanner.qubit_offsets[q + 1];
            if (end - begin > 8) {
                throw std::invalid_argument("qubit degree exceeds 8");
            }
            for (uint32_t k = begin; k < end; k++) {
                size_t n = 0;
                for (uint32_t j = begin; j < end; j++) {
                    if (j != k) {
                        scratch[n++] = state.messages_cq[tanner.qubit_edges[j]];
                    }
                }
                state.messages_qc[tanner.qubit_edges[k]] =
                    qubit_message(prior[q], std::span<const Dist4>(scratch, n), &state.degenerate);
            }
            size_t n = 0;
            for (uint32_t j = begin; j < end; j++) {
                scratch[n++] = state.messages_cq[tanner.qubit_edges[j]];
            }
            Dist4 belief = qubit_message(prior[q], std::span<const Dist4>(scratch, n), &state.degenerate);
            for (int i = 0; i < 4; i++) {
                delta = std::max(delta, std::abs(belief[i] - state.beliefs[q][i]));
            }
            state.beliefs[q] = belief;
        }
        state.round = round;
        if (on_round) {
            on_round(state);
        }
        if (options.tolerance > 0.0 && delta < options.tolerance) {
            break;
        }
    }
}

}  // namespace mpsum
