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
#include "tsvf/pointer.h"
#include "tsvf/two_state.h"

namespace tsvf {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PointerStateTest, GaussianMoments) {
    auto p = make_gaussian_pointer(0.5, 1.0);
    EXPECT_NEAR(p.norm(), 1.0, 1e-12);
    EXPECT_NEAR(p.mean_position(), 0.5, 1e-12);
    EXPECT_NEAR(p.variance(), 1.0, 1e-10);
    EXPECT_NEAR(p.mean_momentum(), 0.0, 1e-12);
}

TEST(PointerStateTest, GridValidation) {
    EXPECT_THROW(make_gaussian_pointer(0, 1.0, 128), InputError);
    EXPECT_THROW(make_gaussian_pointer(0, 1.0, 4096, 8.0), InputError);
    EXPECT_THROW(make_gaussian_pointer(0, 1.0, 256, 64.0), InputError);
    EXPECT_THROW(make_gaussian_pointer(0, 0.0), InputError);
    EXPECT_THROW(PointerState(Vector::Ones(512), 0.0, 1.0, 32.0), InputError);
}

TEST(PointerStateTest, TranslationIsExact) {
    auto p = make_gaussian_pointer(0.0, 1.0);
    for (double s : {0.3, -2.7, 0.0123}) {
        auto moved = p.translated(s);
        // Compare against the analytic Gaussian centered at s on the same grid.
        double worst = 0;
        for (size_t k = 0; k < p.size(); ++k) {
            double x = p.position(k) - s;
            double a = std::pow(2 * kPi, -0.25) * std::exp(-x * x / 4);
            worst = std::max(worst, std::abs(moved.amplitudes()(static_cast<Eigen::Index>(k)) - a));
        }
        EXPECT_LT(worst, 1e-12) << s;
        EXPECT_NEAR(moved.mean_position(), s, 1e-10);
        EXPECT_NEAR(moved.norm(), 1.0, 1e-12);
    }
}

TEST(CoupleTest, BranchesAreTranslatedCopies) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto sys = spin_state(1.0, 0.4);
    auto joint = couple(sys, pointer, {2.0, pauli_observable('z')});
    EXPECT_NEAR(joint.norm(), 1.0, 1e-12);
    Readout r(joint);
    double mean = 0;
    for (size_t k = 0; k < r.probabilities().size(); ++k) {
        mean += r.probabilities()[k] * r.position(k);
    }
    double sz = std::norm(sys[0]) - std::norm(sys[1]);
    EXPECT_NEAR(mean, 2.0 * sz, 1e-10);
}

TEST(CoupleTest, RejectsShiftBeyondMargin) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    EXPECT_THROW(couple(StateVector::basis(2, 0), pointer, {17.0, pauli_observable('z')}), InputError);
    EXPECT_THROW(couple(StateVector::basis(2, 0), pointer, {-1.0, pauli_observable('z')}), InputError);
    EXPECT_THROW(couple(StateVector::basis(3, 0), pointer, {1.0, pauli_observable('z')}), DimensionMismatch);
}

TEST(ReadoutTest, CollapseInStrongRegime) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto joint = couple(spin_state(kPi / 2), pointer, {10.0, pauli_observable('z')});
    Readout r(joint);
    RandomStream rng(4, 0);
    for (int k = 0; k < 20; ++k) {
        auto s = r.sample(rng);
        // Lobes at +-10 are separated by 10 sigma, so collapse is onto an eigenstate.
        size_t expected = s.position > 0 ? 0 : 1;
        EXPECT_NEAR(std::abs(s.system[expected]), 1.0, 1e-9);
    }
}

TEST(WeakShiftTest, MatchesClosedFormOracle) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto pre = spin_state(1.0, 0.0), post = spin_state(2.0, 0.8);
    for (double lambda : {0.05, 0.3, 1.0, 3.0}) {
        double got = post_selected_mean_shift(pre, post, {lambda, pauli_observable('z')}, pointer);
        double want = reference::sigma_z_pointer_shift(reference::vec(pre), reference::vec(post), lambda, 1.0);
        EXPECT_NEAR(got, want, 1e-10) << lambda;
    }
}

TEST(WeakShiftTest, AmplifiedWeakValue) {
    // Nearly orthogonal selections: shift/lambda tracks a weak value far outside [-1, 1].
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto pre = spin_state(kPi / 2 + 0.6, 0.0), post = spin_state(kPi / 2 - 0.5, kPi);
    Complex aw = weak_value(TwoStateVector(pre, post), pauli::z());
    ASSERT_GT(std::abs(aw.real()), 10.0);
    double lambda = 0.002;
    double got = post_selected_mean_shift(pre, post, {lambda, pauli_observable('z')}, pointer);
    double want = reference::sigma_z_pointer_shift(reference::vec(pre), reference::vec(post), lambda, 1.0);
    EXPECT_NEAR(got, want, 1e-10);
    EXPECT_NEAR(got / lambda, aw.real(), 0.01 * std::abs(aw.real()));
}

TEST(WeakShiftTest, MomentumFollowsImaginaryPart) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto pre = spin_state(1.0, 0.0);
    for (double phi : {0.8, -0.8}) {
        auto post = spin_state(2.0, phi);
        Complex aw = weak_value(TwoStateVector(pre, post), pauli::z());
        double lambda = 0.02;
        double dp = post_selected_momentum_shift(pre, post, {lambda, pauli_observable('z')}, pointer);
        EXPECT_GT(dp * aw.imag(), 0.0);
        EXPECT_NEAR(dp, lambda * aw.imag() / 2, 0.02 * std::abs(lambda * aw.imag() / 2));
    }
}

TEST(WeakShiftTest, OrthogonalSelections) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    EXPECT_THROW(post_selected_mean_shift(StateVector::basis(2, 0), StateVector::basis(2, 1),
                                          {0.1, pauli_observable('x')}, pointer),
                 ZeroOverlap);
}

TEST(WeakSweepTest, QuadraticConvergence) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    const std::vector<double> strengths{0.1, 0.05, 0.025};
    auto rows = weak_sweep(spin_state(1.0, 0.0), spin_state(2.0, 0.8), pauli_observable('z'), strengths, pointer);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[1].error / rows[0].error, 0.25, 0.01);
    EXPECT_NEAR(rows[2].error / rows[1].error, 0.25, 0.01);
    const std::vector<double> bad{0.1, 0.0};
    EXPECT_THROW(weak_sweep(spin_state(1.0), spin_state(2.0), pauli_observable('z'), bad, pointer), InputError);
}

TEST(StrongReadoutTest, LobesFollowAbl) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto pre = spin_state(1.1, 0.4), post = spin_state(2.0, 1.3);
    auto predicted = abl_probabilities(TwoStateVector(pre, post), pauli_observable('z'));
    auto r = strong_readout_experiment(pre, post, {10.0, pauli_observable('z')}, pointer, 10000, 12);
    EXPECT_EQ(r.samples, 10000u);
    EXPECT_TRUE(compare_to_abl(r.lobes, predicted, 4.0).passes);
    auto again = strong_readout_experiment(pre, post, {10.0, pauli_observable('z')}, pointer, 10000, 12);
    EXPECT_EQ(again.lobes.entries[0].count, r.lobes.entries[0].count);
}

TEST(ReadoutTest, StrongRegimeCollapseFidelity) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    Readout r(couple(spin_state(kPi / 2), pointer, {10.0, pauli_observable('z')}));
    double upper = 0;
    size_t peak = 0;
    for (size_t k = 0; k < r.probabilities().size(); ++k) {
        if (r.position(k) > 0) {
            upper += r.probabilities()[k];
        }
        if (r.probabilities()[k] > r.probabilities()[peak]) {
            peak = k;
        }
    }
    EXPECT_NEAR(upper, 0.5, 1e-10);
    auto collapsed = r.collapsed_system(peak);
    double fidelity = std::norm(collapsed[r.position(peak) > 0 ? 0 : 1]);
    EXPECT_GT(fidelity, 1 - 1e-6);
}

TEST(ReadoutTest, ZeroCouplingLeavesPointer) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    Readout r(couple(spin_state(1.3, 0.5), pointer, {0.0, pauli_observable('z')}));
    double worst = 0;
    for (size_t k = 0; k < pointer.size(); ++k) {
        double p0 = std::norm(pointer.amplitudes()(static_cast<Eigen::Index>(k))) * pointer.dq();
        worst = std::max(worst, std::abs(r.probabilities()[k] - p0));
    }
    EXPECT_LT(worst, 1e-15);
}

TEST(ReadoutTest, EigenstateGivesSingleLobe) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    Readout r(couple(StateVector::basis(2, 1), pointer, {3.0, pauli_observable('z')}));
    double mean = 0;
    for (size_t k = 0; k < r.probabilities().size(); ++k) {
        mean += r.probabilities()[k] * r.position(k);
    }
    EXPECT_NEAR(mean, -3.0, 1e-10);
}

TEST(WeakShiftTest, SpecExamples) {
    auto pointer = make_gaussian_pointer(0.0, 1.0);
    auto up_z = StateVector::basis(2, 0);
    EXPECT_NEAR(post_selected_mean_shift(up_z, up_z, {2.5, pauli_observable('z')}, pointer), 2.5, 1e-10);
    double s = post_selected_mean_shift(up_z, spin_state(kPi / 2), {0.01, pauli_observable('z')}, pointer);
    EXPECT_NEAR(s / 0.01, 1.0, 1e-3);
    auto pre = spin_state(2 * kPi / 3, 0.0);
    Complex aw = weak_value(TwoStateVector(pre, up_z), pauli::z());
    double t = post_selected_mean_shift(pre, up_z, {0.01, pauli_observable('z')}, pointer);
    EXPECT_NEAR(t / 0.01, aw.real(), 1e-2);
}

}  // namespace
}  // namespace tsvf
