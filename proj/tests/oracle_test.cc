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

#include <cmath>
#include <numbers>

#include "reference.h"
#include "tsvf/errors.h"
#include "tsvf/instances.h"
#include "tsvf/oracle.h"

namespace tsvf {
namespace {

constexpr double kPi = std::numbers::pi;
const StateVector kUpZ = StateVector::basis(2, 0);
const StateVector kDownZ = StateVector::basis(2, 1);

std::vector<Stage> one_measurement(const SpectralObservable &a) {
    return {MeasureStage{a, "A"}};
}

TEST(SimulateTest, DeterministicAcrossWorkerCounts) {
    auto stages = one_measurement(spin_observable(1.1, 0.3));
    auto post = post_select_on(spin_state(2.0, -0.5));
    auto one = simulate(kUpZ, stages, post, {20000, 99, 1});
    auto three = simulate(kUpZ, stages, post, {20000, 99, 3});
    auto again = simulate(kUpZ, stages, post, {20000, 99, 0});
    EXPECT_EQ(one, three);
    EXPECT_EQ(one, again);
    auto other = simulate(kUpZ, stages, post, {20000, 100, 1});
    EXPECT_NE(one, other);
}

TEST(SimulateTest, PartialChunkCounts) {
    auto stats = simulate(kUpZ, one_measurement(pauli_observable('x')), {pauli_observable('z'), 1.0},
                          {kChunkTrials * 2 + 17, 5, 2});
    EXPECT_EQ(stats.trials, kChunkTrials * 2 + 17);
    uint64_t all = 0;
    for (auto c : stats.stages[0].all) {
        all += c;
    }
    EXPECT_EQ(all, stats.trials);
    uint64_t post = 0;
    for (auto c : stats.post_counts) {
        post += c;
    }
    EXPECT_EQ(post, stats.trials);
}

TEST(SimulateTest, PrefixIsStable) {
    // Trials are split into fixed chunks, so a longer run extends a shorter one.
    auto stages = one_measurement(pauli_observable('x'));
    const PostSelection post{pauli_observable('z'), 1.0};
    auto short_run = simulate(kUpZ, stages, post, {kChunkTrials, 3, 1});
    auto long_run = simulate(kUpZ, stages, post, {kChunkTrials * 2, 3, 1});
    auto second = simulate(kUpZ, stages, post, {kChunkTrials, 3, 1});
    EXPECT_EQ(short_run, second);
    EXPECT_GE(long_run.accepted, short_run.accepted);
}

TEST(SimulateTest, Errors) {
    const PostSelection post{pauli_observable('z'), 1.0};
    EXPECT_THROW(simulate(kUpZ, {}, post, {0, 1, 1}), InputError);
    EXPECT_THROW(simulate(kUpZ, {}, {pauli_observable('z'), 3.0}, {10, 1, 1}), InputError);
    EXPECT_THROW(simulate(StateVector::basis(3, 0), {}, post, {10, 1, 1}), DimensionMismatch);
    EXPECT_THROW(simulate(kDownZ, {}, post, {1000, 1, 1}), AllRejected);
}

TEST(SimulateTest, UnconditionalMatchesBorn) {
    auto a = spin_observable(kPi / 3);
    auto stats = simulate(kUpZ, one_measurement(a), {pauli_observable('z'), 1.0}, {100000, 11, 0});
    auto un = stats.unconditional(0);
    double se = standard_error(0.75, un.n);
    EXPECT_NEAR(un.frequency_of(+1), 0.75, 4 * se);
}

TEST(SimulateTest, ConditionalMatchesReferenceAbl) {
    RandomStream rng(31, 0);
    for (int k = 0; k < 5; ++k) {
        auto pre = random_state(3, rng), post = random_state(3, rng);
        auto a = random_observable(3, rng, true);
        auto stats = simulate(pre, one_measurement(a), post_select_on(post), {100000, 40u + static_cast<uint64_t>(k), 0});
        auto want = reference::abl(reference::vec(pre), reference::vec(post), reference::projectors(a));
        auto cond = stats.conditional(0);
        for (size_t j = 0; j < want.size(); ++j) {
            double se = std::max(standard_error(want[j], cond.n), 1e-12);
            EXPECT_NEAR(cond.entries[j].frequency, want[j], 4 * se) << "instance " << k << " branch " << j;
        }
    }
}

TEST(SimulateTest, UnitaryStagesEvolve) {
    // A beamsplitter before the post-selection: pre |0> reaches port 0 with 1/2.
    std::vector<Stage> stages{UnitaryStage{beamsplitter()}};
    auto stats = simulate(kUpZ, stages, {which_path(2), 0.0}, {50000, 2, 0});
    EXPECT_NEAR(stats.acceptance_fraction(), 0.5, 4 * standard_error(0.5, 50000));
}

TEST(SimulateTest, ConditionalGivenBranch) {
    std::vector<Stage> stages{MeasureStage{pauli_observable('x'), "x"}, MeasureStage{pauli_observable('z'), "z"}};
    auto stats = simulate(kUpZ, stages, {pauli_observable('x'), 1.0}, {40000, 8, 0});
    for (size_t b = 0; b < 2; ++b) {
        auto f = stats.conditional_given(1, 0, b);
        EXPECT_GT(f.n, 0u);
        EXPECT_NEAR(f.entries[0].frequency + f.entries[1].frequency, 1.0, 1e-12);
    }
    auto a = stats.conditional_given(1, 0, 0), b = stats.conditional_given(1, 0, 1);
    EXPECT_EQ(a.n + b.n, stats.accepted);
}

TEST(StandardErrorTest, Binomial) {
    EXPECT_DOUBLE_EQ(standard_error(0.5, 100), 0.05);
    EXPECT_EQ(standard_error(0.0, 100), 0.0);
    EXPECT_EQ(standard_error(1.0, 100), 0.0);
}

TEST(CompareToAblTest, FloorOnAcceptedTrials) {
    StageFrequencies f{"A", 99, {{1.0, 50, 50.0 / 99, 0.05}, {-1.0, 49, 49.0 / 99, 0.05}}};
    OutcomeDistribution p{{{1.0, 0.5}, {-1.0, 0.5}}};
    EXPECT_THROW(compare_to_abl(f, p, 4.0), InsufficientAcceptedTrials);
    EXPECT_NO_THROW(compare_to_abl(f, p, 4.0, 50));
    EXPECT_THROW(compare_to_abl(f, p, 0.0, 50), InputError);
}

TEST(CompareToAblTest, ZeroObservedSpread) {
    // All 1000 trials on +1: the spread comes from the prediction.
    StageFrequencies f{"A", 1000, {{1.0, 1000, 1.0, 0.0}, {-1.0, 0, 0.0, 0.0}}};
    auto near_one = compare_to_abl(f, {{{1.0, 0.999}, {-1.0, 0.001}}}, 4.0);
    EXPECT_TRUE(near_one.passes);
    auto half = compare_to_abl(f, {{{1.0, 0.5}, {-1.0, 0.5}}}, 4.0);
    EXPECT_FALSE(half.passes);
    auto certain = compare_to_abl(f, {{{1.0, 1.0}, {-1.0, 0.0}}}, 4.0);
    EXPECT_TRUE(certain.passes);
    EXPECT_EQ(certain.rows[0].z_score, 0.0);
}

TEST(InterpretationBTest, FavoursAbl) {
    auto r = interpretation_b_experiment(kPi / 3, 100000, 17);
    EXPECT_NEAR(r.born_prediction, 0.75, 1e-12);
    EXPECT_NEAR(r.abl_prediction, 0.9, 1e-12);
    EXPECT_EQ(r.unmeasured_accepted, r.unmeasured_trials);
    EXPECT_TRUE(r.agrees_with_abl) << r.z_vs_abl;
    EXPECT_GE(r.z_vs_born, 50.0);
}

TEST(SymmetryTest, OrderOfCommutingMeasurementsIrrelevant) {
    // Commuting observables on a qutrit: order must not change B statistics.
    Matrix pa = Matrix::Zero(3, 3), pb = Matrix::Zero(3, 3);
    pa(0, 0) = 1;
    pb(0, 0) = pb(1, 1) = 1;
    SpectralObservable a({{1.0, LinearOperator(pa)}, {0.0, LinearOperator(Matrix::Identity(3, 3) - pa)}});
    SpectralObservable b({{1.0, LinearOperator(pb)}, {0.0, LinearOperator(Matrix::Identity(3, 3) - pb)}});
    RandomStream rng(3, 0);
    auto r = symmetry_experiment(random_state(3, rng), a, b, 50000, 4);
    EXPECT_TRUE(r.passes);
}

TEST(InterpretationBTest, AlignedAndAntiAligned) {
    auto aligned = interpretation_b_experiment(0.0, 5000, 2);
    EXPECT_NEAR(aligned.born_prediction, 1.0, 1e-15);
    EXPECT_NEAR(aligned.abl_prediction, 1.0, 1e-15);
    EXPECT_EQ(aligned.frequency, 1.0);
    auto anti = interpretation_b_experiment(kPi, 5000, 2);
    EXPECT_NEAR(anti.born_prediction, 0.0, 1e-15);
    EXPECT_NEAR(anti.abl_prediction, 0.0, 1e-15);
    EXPECT_EQ(anti.frequency, 0.0);
}

TEST(SymmetryTest, SpinExamples) {
    auto xy = symmetry_experiment(kUpZ, pauli_observable('x'), pauli_observable('y'), 50000, 6);
    EXPECT_TRUE(xy.passes);
    for (const auto &row : xy.rows) {
        EXPECT_NEAR(row.frequency_b_first, 0.5, 4 * standard_error(0.5, xy.accepted_b_first));
        EXPECT_NEAR(row.frequency_b_second, 0.5, 4 * standard_error(0.5, xy.accepted_b_second));
    }
    auto zz = symmetry_experiment(kUpZ, pauli_observable('z'), pauli_observable('z'), 5000, 6);
    EXPECT_TRUE(zz.passes);
    EXPECT_EQ(zz.rows[0].frequency_b_first, 1.0);
    EXPECT_EQ(zz.rows[0].frequency_b_second, 1.0);
    auto same = symmetry_experiment(spin_state(0.7, 0.2), spin_observable(1.9), spin_observable(1.9), 20000, 6);
    EXPECT_TRUE(same.passes);
}

}  // namespace
}  // namespace tsvf
