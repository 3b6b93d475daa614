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

#include "tsvf/rng.h"

#include <array>

#include "tsvf/errors.h"

namespace tsvf {

namespace {

std::mt19937_64 seeded_engine(uint64_t seed, uint64_t chunk) {
    std::array<uint32_t, 5> words{
        static_cast<uint32_t>(seed),  static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(chunk),
        static_cast<uint32_t>(chunk >> 32), RandomStream::kStreamTag,
    };
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(uint64_t seed, uint64_t chunk) : engine_(seeded_engine(seed, chunk)) {
}

size_t sample_index(std::span<const double> weights, double u) {
    double total = 0;
    for (double w : weights) {
        total += w;
    }
    if (!(total > 0)) {
        throw Error("sample_index: all weights are zero");
    }
    double target = u * total;
    double cumulative = 0;
    size_t last_nonzero = 0;
    for (size_t k = 0; k < weights.size(); ++k) {
        if (weights[k] <= 0) {
            continue;
        }
        last_nonzero = k;
        cumulative += weights[k];
        if (target < cumulative) {
            return k;
        }
    }
    // Rounding in the cumulative sum can leave target == total.
    return last_nonzero;
}

}  // namespace tsvf
