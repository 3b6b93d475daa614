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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "tsvf/rng.h"

namespace tsvf {
namespace {

TEST(RandomStreamTest, GoldenOutputs) {
    RandomStream c0(7, 0);
    EXPECT_EQ(c0.next(), 0xe7b4c316aff3c69cull);
    EXPECT_EQ(c0.next(), 0x650f99a593ca809full);
    EXPECT_EQ(c0.next(), 0xf03ae848490d51d2ull);
    RandomStream c3(7, 3);
    EXPECT_EQ(c3.next(), 0x5682987d6c2fc62bull);
    EXPECT_EQ(c3.next(), 0x6fd09ba8821db793ull);
    EXPECT_EQ(c3.next(), 0xc3adc5b9648827a0ull);
}

TEST(RandomStreamTest, SeedSequenceDerivation) {
    const uint64_t seed = 0x123456789abcdefull, chunk = 0xfedcba9876ull;
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(chunk),
                      static_cast<uint32_t>(chunk >> 32), uint32_t{0x74737666}};
    std::mt19937_64 ref(seq);
    RandomStream s(seed, chunk);
    for (int k = 0; k < 100; ++k) {
        EXPECT_EQ(s.next(), ref());
    }
}

TEST(RandomStreamTest, UniformUsesTop53Bits) {
    RandomStream a(7, 0), b(7, 0);
    for (int k = 0; k < 100; ++k) {
        uint64_t x = a.next();
        double u = b.uniform();
        EXPECT_EQ(u, static_cast<double>(x >> 11) / 9007199254740992.0);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(RandomStreamTest, StreamsAreDistinct) {
    std::set<uint64_t> firsts;
    for (uint64_t seed = 0; seed < 8; ++seed) {
        for (uint64_t chunk = 0; chunk < 8; ++chunk) {
            firsts.insert(RandomStream(seed, chunk).next());
        }
    }
    EXPECT_EQ(firsts.size(), 64u);
}

TEST(SampleIndexTest, InverseCdf) {
    const std::vector<double> w{0.25, 0.0, 0.5, 0.25};
    EXPECT_EQ(sample_index(w, 0.0), 0u);
    EXPECT_EQ(sample_index(w, 0.2499), 0u);
    EXPECT_EQ(sample_index(w, 0.25), 2u);
    EXPECT_EQ(sample_index(w, 0.7499), 2u);
    EXPECT_EQ(sample_index(w, 0.75), 3u);
    EXPECT_EQ(sample_index(w, 0.9999999), 3u);
}

TEST(SampleIndexTest, NeverReturnsZeroWeight) {
    const std::vector<double> w{0.0, 1.0, 0.0};
    for (double u : {0.0, 0.5, std::nextafter(1.0, 0.0)}) {
        EXPECT_EQ(sample_index(w, u), 1u);
    }
    // Round-off leaving u * total at the end of the cumulative sum.
    const std::vector<double> tail{0.1, 0.2, 0.0};
    EXPECT_EQ(sample_index(tail, 1.0), 1u);
}

TEST(SampleIndexTest, Unnormalized) {
    const std::vector<double> w{2.0, 6.0};
    EXPECT_EQ(sample_index(w, 0.24), 0u);
    EXPECT_EQ(sample_index(w, 0.26), 1u);
}

}  // namespace
}  // namespace tsvf
