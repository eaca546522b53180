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

#ifndef MPSUM_DECODER_HPP
#define MPSUM_DECODER_HPP

#include <memory>

#include "mpsum/bp.hpp"
#include "mpsum/matching.hpp"
#include "mpsum/noise.hpp"
#include "mpsum/rng.hpp"
#include "mpsum/weights.hpp"

namespace mpsum {

struct DecodeOutcome {
    PauliError correction;
    LogicalClass residual_class = LogicalClass::I;
    bool success = true;
    int bp_rounds = 0;
    bool bp_degenerate = false;
    double weight_x = 0.0;  // matching weight of the X-component graph
    double weight_z = 0.0;
};

/// Syndrome -> (optional BP) -> matchings -> correction -> verdict.
///
/// Under iid_xz noise only the x plane is decoded and judged, against
/// logical_z. Under depolarizing noise both planes are decoded
/// independently (sharing one BP pass for bp_multipath) and the full logical
/// class of the residual is judged.
class Decoder {
   public:
    Decoder(std::shared_ptr<const MatchingGeometry> geometry, NoiseModel noise, Strategy strategy,
            int bp_rounds = 0);

    const CodeLayout &layout() const {
        return geometry_->layout();
    }
    const NoiseModel &noise() const {
        return noise_;
    }
    const WeightStrategy &strategy() const {
        return strategy_;
    }

    DecodeOutcome decode(const PauliError &error) const;

    /// Samples one error from `rng`, decodes it, and reports success.
    bool run_trial(RngStream &rng) const;

   private:
    std::shared_ptr<const MatchingGeometry> geometry_;
    NoiseModel noise_;
    WeightStrategy strategy_;
    TannerGraph tanner_;
    std::vector<Dist4> prior_;
};

}  // namespace mpsum

#endif
