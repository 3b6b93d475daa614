// Copyright 2026 The tsvf Authors
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

#ifndef TSVF_RNG_H
#define TSVF_RNG_H

#include <cstdint>
#include <random>
#include <span>

namespace tsvf {

/// Deterministic random stream owned by one chunk of Monte-Carlo trials.
///
/// Derivation of the stream for (seed, chunk): the two 64-bit integers are
/// split into 32-bit words and passed as
///     {seed_lo, seed_hi, chunk_lo, chunk_hi, 0x74737666}
/// to std::seed_seq, which then seeds a std::mt19937_64 (19937-bit state).
/// Both are fully specified by the C++ standard, so every conforming build
/// reproduces the same stream. uniform() takes the top 53 bits of one 64-bit
/// output and scales by 2⁻⁵³; std::uniform_real_distribution is avoided
/// because its algorithm is implementation-defined.
class RandomStream {
   public:
    static constexpr uint32_t kStreamTag = 0x74737666;

    using result_type = uint64_t;
    static constexpr result_type min() {
        return std::mt19937_64::min();
    }
    static constexpr result_type max() {
        return std::mt19937_64::max();
    }
    result_type operator()() {
        return engine_();
    }

    RandomStream(uint64_t seed, uint64_t chunk);

    uint64_t next() {
        return engine_();
    }
    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

   private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF draw over non-negative weights in index order. The cumulative
/// sum is rescaled by the total, so the weights need not sum to exactly 1.
/// Zero-weight entries are never selected.
size_t sample_index(std::span<const double> weights, double u);

}  // namespace tsvf

#endif
