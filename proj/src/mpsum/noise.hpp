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

#ifndef MPSUM_NOISE_HPP
#define MPSUM_NOISE_HPP

#include <array>
#include <optional>
#include <string_view>

#include "mpsum/lattice.hpp"
#include "mpsum/rng.hpp"

namespace mpsum {

/// Distribution over {I, X, Y, Z}, in that order.
using Dist4 = std::array<double, 4>;

enum class NoiseKind : uint8_t { iid_xz, depolarizing };

const char *to_string(NoiseKind k);
std::optional<NoiseKind> parse_noise_kind(std::string_view s);

struct NoiseModel {
    NoiseKind kind = NoiseKind::depolarizing;
    double p = 0.0;
};

/// Per-qubit channel. iid_xz flips the x and z planes independently with
/// probability p each; depolarizing applies X, Y, Z with p/3 each.
Dist4 channel(const NoiseModel &model);

/// Probability that a single plane (x or z) is flipped on a qubit.
double plane_flip_probability(const NoiseModel &model);

PauliError sample(const NoiseModel &model, const CodeLayout &layout, RngStream &rng);

}  // namespace mpsum

#endif
