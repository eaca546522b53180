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

#ifndef MPSUM_MONTECARLO_HPP
#define MPSUM_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mpsum/lattice.hpp"
#include "mpsum/noise.hpp"
#include "mpsum/weights.hpp"

namespace mpsum {

inline constexpr uint64_t kDefaultSeed = 20190417;

struct SweepConfig {
    Boundary boundary = Boundary::rotated;
    NoiseKind noise = NoiseKind::depolarizing;
    Strategy strategy = Strategy::manhattan;
    std::vector<int> distances;
    std::vector<double> ps;
    uint64_t trials = 1000;
    uint64_t seed = kDefaultSeed;
    /// Worker threads; 0 uses the hardware concurrency.
    int workers = 0;
    /// BP rounds for bp_multipath; 0 means the code distance.
    int bp_rounds = 0;

    void validate() const;
};

struct SweepRecord {
    Boundary boundary = Boundary::rotated;
    NoiseKind noise = NoiseKind::depolarizing;
    Strategy strategy = Strategy::manhattan;
    int d = 0;
    double p = 0.0;
    uint64_t trials = 0;
    uint64_t failures = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    uint64_t seed = 0;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    /// True when the stop callback cut the sweep short. Only completed
    /// points are reported.
    bool interrupted = false;
};

using RecordCallback = std::function<void(const SweepRecord &)>;
using StopCallback = std::function<bool()>;

/// Runs every (d, p) point in increasing (d, p) order. Trial t at the i-th
/// smallest p uses trial_stream(seed, d, i, t), so results do not depend on
/// the worker count.
SweepResult run_sweep(const SweepConfig &config, const RecordCallback &on_record = {},
                      const StopCallback &should_stop = {});

/// Wilson score interval for a binomial proportion.
std::pair<double, double> confidence_interval(uint64_t failures, uint64_t trials, double level = 0.99);

struct ThresholdFit {
    double p_th = 0.0;
    double nu = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    /// One-sigma profile-likelihood half width on p_th.
    double p_th_err = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    /// Binomial deviance of the best fit.
    double deviance = 0.0;
    size_t n_points = 0;
};

class FitError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The data show no crossing of the curves for different distances.
class NoCrossingError : public FitError {
   public:
    using FitError::FitError;
};

/// Maximum-likelihood finite-size-scaling fit of
/// p_fail = a0 + a1 x + a2 x^2 with x = (p - p_th) d^(1/nu), over the p
/// values whose failure rates lie in [0.01, 0.6] at every distance.
ThresholdFit fit_threshold(const std::vector<SweepRecord> &records);

std::string fit_to_json(const ThresholdFit &fit);

}  // namespace mpsum

#endif
