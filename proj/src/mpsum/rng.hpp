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

#ifndef MPSUM_RNG_HPP
#define MPSUM_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace mpsum {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by a 64-bit key and three 32-bit stream words;
/// the fourth counter word enumerates blocks within the stream. Streams
/// with different identifiers are statistically independent, so each
/// Monte-Carlo trial can own a stream derived from its coordinates and
/// results do not depend on how trials are scheduled.
class Philox4x32 {
   public:
    using result_type = uint32_t;

    Philox4x32(uint64_t key, uint32_t w0, uint32_t w1, uint32_t w2)
        : key_{static_cast<uint32_t>(key), static_cast<uint32_t>(key >> 32)}, ctr_{0, w0, w1, w2} {
    }

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<uint32_t>::max();
    }

    result_type operator()() {
        if (used_ == 4) {
            refill();
        }
        return block_[used_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        uint64_t hi = (*this)() >> 5;
        uint64_t lo = (*this)() >> 6;
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    /// The keyed bijection on one counter block.
    static std::array<uint32_t, 4> bijection(std::array<uint32_t, 4> x, std::array<uint32_t, 2> k) {
        for (int round = 0; round < 10; round++) {
            uint64_t p0 = uint64_t{0xD2511F53} * x[0];
            uint64_t p1 = uint64_t{0xCD9E8D57} * x[2];
            uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
            uint32_t lo0 = static_cast<uint32_t>(p0);
            uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
            uint32_t lo1 = static_cast<uint32_t>(p1);
            x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
            k[0] += 0x9E3779B9;
            k[1] += 0xBB67AE85;
        }
        return x;
    }

   private:
    void refill() {
        block_ = bijection(ctr_, key_);
        used_ = 0;
        ctr_[0]++;
    }

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 4> block_{};
    int used_ = 4;
};

using RngStream = Philox4x32;

/// Stream for one Monte-Carlo trial, keyed by the master seed and the trial
/// coordinates (distance, index of p in the sweep, trial number).
inline RngStream trial_stream(uint64_t seed, uint32_t distance, uint32_t p_index, uint32_t trial) {
    return RngStream(seed, trial, p_index, distance);
}

}  // namespace mpsum

#endif
