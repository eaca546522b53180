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

#ifndef MPSUM_BP_HPP
#define MPSUM_BP_HPP

#include <functional>
#include <span>
#include <vector>

#include "mpsum/lattice.hpp"
#include "mpsum/noise.hpp"

namespace mpsum {

/// Whether Pauli e anticommutes with a single-qubit restriction of a
/// stabiliser of the given kind.
constexpr bool anticommutes(Pauli check_kind, Pauli e) {
    if (e == Pauli::I || e == check_kind) {
        return false;
    }
    return true;
}

struct BpOptions {
    int rounds = 1;
    /// Stop early once no belief component moves by more than this between
    /// rounds. Zero runs exactly `rounds` rounds.
    double tolerance = 0.0;
};

/// Messages and beliefs of quaternary belief propagation. Messages are
/// indexed by Tanner edge; beliefs and priors by qubit.
struct BeliefState {
    std::vector<Dist4> prior;
    std::vector<Dist4> messages_qc;
    std::vector<Dist4> messages_cq;
    std::vector<Dist4> beliefs;
    int round = 0;
    /// Set when some product vanished and was replaced by uniform.
    bool degenerate = false;
};

/// Message from a check to one of its qubits given the messages of the
/// other support qubits. `degenerate` is set if the result had to be
/// replaced by uniform.
Dist4 check_message(Pauli check_kind, std::span<const Dist4> others, bool syndrome_bit, bool *degenerate = nullptr);

/// Message from a qubit to one check: prior times the other incoming check
/// messages, normalised.
Dist4 qubit_message(const Dist4 &prior, std::span<const Dist4> others, bool *degenerate = nullptr);

using BpRoundCallback = std::function<void(const BeliefState &)>;

/// Flooding-schedule belief propagation. `syndrome` has one bit per check.
/// The callback, if given, sees the state after each completed round.
BeliefState run_bp(const TannerGraph &tanner, std::span<const Dist4> prior, std::span<const uint8_t> syndrome,
                   const BpOptions &options, const BpRoundCallback &on_round = {});

/// As above, reusing the buffers of `state` across calls.
void run_bp(const TannerGraph &tanner, std::span<const Dist4> prior, std::span<const uint8_t> syndrome,
            const BpOptions &options, BeliefState &state, const BpRoundCallback &on_round = {});

/// Normalises in place; returns false (and sets uniform) if the sum is not
/// positive and finite.
bool normalize(Dist4 &d);

}  // namespace mpsum

#endif
