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

#include "mpsum/noise.hpp"

#include <stdexcept>
#include <string>

namespace mpsum {

const char *to_string(NoiseKind k) {
    return k == NoiseKind::iid_xz ? "iidxz" : "depolarizing";
}

std::optional<NoiseKind> parse_noise_kind(std::string_view s) {
    if (s == "iidxz" || s == "iid_xz") {
        return NoiseKind::iid_xz;
    }
    if (s == "depolarizing") {
        return NoiseKind::depolarizing;
    }
    return std::nullopt;
}

static void check_model(const NoiseModel &model) {
    if (!(model.p >= 0.0 && model.p <= 1.0)) {
        throw std::invalid_argument("noise probability must lie in [0, 1], got " + std::to_string(model.p));
    }
}

Dist4 channel(const NoiseModel &model) {
    check_model(model);
    const double p = model.p;
    if (model.kind == NoiseKind::iid_xz) {
        return {(1 - p) * (1 - p), p * (1 - p), p * p, p * (1 - p)};
    }
    return {1 - p, p / 3, p / 3, p / 3};
}

double plane_flip_probability(const NoiseModel &model) {
    check_model(model);
    return model.kind == NoiseKind::iid_xz ? model.p : 2 * model.p / 3;
}

PauliError sample(const NoiseModel &model, const CodeLayout &layout, RngStream &rng) {
    const Dist4 ch = channel(model);
    const double c_x = ch[0];
    const double c_y = c_x + ch[1];
    const double c_z = c_y + ch[2];
    PauliError error(layout.num_qubits());
    if (model.p == 0.0) {
        return error;
    }
    for (size_t q = 0; q < layout.num_qubits(); q++) {
        double u = rng.uniform();
        if (u < c_x) {
            continue;
        }
        error.set(q, u < c_y ? Pauli::X : (u < c_z ? Pauli::Y : Pauli::Z));
    }
    return error;
}

}  // namespace mpsum
