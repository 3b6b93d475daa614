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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "reference.h"
#include "tsvf/errors.h"
#include "tsvf/instances.h"
#include "tsvf/linalg.h"

namespace tsvf {
namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const reference::Mat &a, const LinearOperator &b) {
    double d = 0;
    for (size_t r = 0; r < a.size(); ++r) {
        for (size_t c = 0; c < a.size(); ++c) {
            d = std::max(d, std::abs(a[r][c] - b(r, c)));
        }
    }
    return d;
}

TEST(StateVectorTest, AcceptsSmallNormDrift) {
    Vector v(2);
    v << 1.0 + 2e-11, 0.0;
    StateVector s(v);
    EXPECT_NEAR(s.amplitudes().squaredNorm(), 1.0, 1e-15);
}

TEST(StateVectorTest, RejectsUnnormalized) {
    Vector v(2);
    v << 1.0, 1.0;
    EXPECT_THROW(StateVector{v}, InvalidState);
    Vector drift(2);
    drift << 1.0 + 1e-9, 0.0;
    EXPECT_THROW(StateVector{drift}, InvalidState);
}

TEST(StateVectorTest, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(StateVector(Vector(0)), InvalidState);
    Vector v(2);
    v << std::nan(""), 0.0;
    EXPECT_THROW(StateVector{v}, InvalidState);
    EXPECT_THROW(StateVector::normalize(Vector::Zero(3)), InvalidState);
}

TEST(StateVectorTest, BasisAndNormalize) {
    auto e = StateVector::basis(3, 2);
    EXPECT_EQ(e[2], Complex(1.0));
    EXPECT_THROW(StateVector::basis(3, 3), InvalidState);
    Vector v(2);
    v << 3.0, Complex(0, 4.0);
    auto s = StateVector::normalize(v);
    EXPECT_NEAR(std::abs(s[0] - 0.6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s[1] - Complex(0, 0.8)), 0.0, 1e-15);
}

TEST(LinearOperatorTest, RejectsNonSquare) {
    EXPECT_THROW(LinearOperator(Matrix(2, 3)), InvalidOperator);
    EXPECT_THROW(LinearOperator(Matrix(0, 0)), InvalidOperator);
}

TEST(LinearOperatorTest, PauliAlgebra) {
    auto x = pauli::x(), y = pauli::y(), z = pauli::z();
    auto xy = x * y;
    auto iz = Complex(0, 1) * z;
    EXPECT_LT((xy.matrix() - iz.matrix()).norm(), 1e-15);
    EXPECT_LT(((x * x).matrix() - Matrix::Identity(2, 2)).norm(), 1e-15);
    EXPECT_TRUE(y.is_hermitian());
    EXPECT_FALSE(xy.is_hermitian());
}

TEST(UnitaryTest, ValidatesUnitarity) {
    EXPECT_NO_THROW(beamsplitter());
    Matrix m(2, 2);
    m << 1, 1, 0, 1;
    EXPECT_THROW(Unitary{m}, InvalidOperator);
}

TEST(UnitaryTest, BalancedBeamsplitter) {
    auto u = beamsplitter();
    const double h = 1 / std::numbers::sqrt2;
    EXPECT_NEAR(std::abs(u.matrix()(0, 0) - h), 0, 1e-15);
    EXPECT_NEAR(std::abs(u.matrix()(0, 1) - Complex(0, h)), 0, 1e-15);
    EXPECT_NEAR(std::abs(u.matrix()(1, 0) - Complex(0, h)), 0, 1e-15);
    EXPECT_LT((beamsplitter(kPi / 4).matrix() - u.matrix()).norm(), 1e-15);
}

TEST(SpectralObservableTest, RejectsIncompleteResolution) {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1;
    EXPECT_THROW(SpectralObservable({{1.0, LinearOperator(p)}}), InvalidOperator);
}

TEST(SpectralObservableTest, RejectsNonProjector) {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 2;
    Matrix q = Matrix::Zero(2, 2);
    q(1, 1) = 1;
    try {
        SpectralObservable({{1.0, LinearOperator(q)}, {-1.0, LinearOperator(p)}});
        FAIL() << "expected InvalidOperator";
    } catch (const InvalidOperator &e) {
        EXPECT_NE(std::string(e.what()).find("branch 1"), std::string::npos) << e.what();
    }
}

TEST(SpectralObservableTest, RejectsRepeatedEigenvalue) {
    Matrix p = Matrix::Zero(2, 2);
    p(0, 0) = 1;
    Matrix q = Matrix::Zero(2, 2);
    q(1, 1) = 1;
    EXPECT_THROW(SpectralObservable({{1.0, LinearOperator(p)}, {1.0, LinearOperator(q)}}), InvalidOperator);
}

TEST(SpectralObservableTest, FromHermitianMergesDegenerate) {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = 2;
    h(1, 1) = 2;
    h(2, 2) = -1;
    auto obs = SpectralObservable::from_hermitian(LinearOperator(h));
    ASSERT_EQ(obs.size(), 2u);
    EXPECT_EQ(obs.eigenvalues(), (std::vector<double>{-1.0, 2.0}));
    EXPECT_NEAR(obs.branch(1).projector.matrix().trace().real(), 2.0, 1e-12);
    EXPECT_LT((obs.as_operator().matrix() - h).norm(), 1e-12);
}

TEST(SpectralObservableTest, RandomObservablesReassemble) {
    RandomStream rng(11, 0);
    for (int k = 0; k < 50; ++k) {
        size_t dim = 2 + static_cast<size_t>(k % 4);
        auto obs = random_observable(dim, rng, true);
        auto back = SpectralObservable::from_hermitian(obs.as_operator());
        auto want = obs.eigenvalues();
        std::sort(want.begin(), want.end());
        auto got = back.eigenvalues();
        ASSERT_EQ(got.size(), want.size());
        for (size_t j = 0; j < got.size(); ++j) {
            EXPECT_NEAR(got[j], want[j], 1e-12);
        }
        EXPECT_LT((back.as_operator().matrix() - obs.as_operator().matrix()).norm(), 1e-12);
    }
}

TEST(SpectralObservableTest, SpinObservableMatchesDirection) {
    double theta = 0.9, phi = -0.4;
    auto obs = spin_observable(theta, phi);
    EXPECT_EQ(obs.eigenvalues(), (std::vector<double>{1.0, -1.0}));
    Matrix n = std::sin(theta) * std::cos(phi) * pauli::x().matrix() +
               std::sin(theta) * std::sin(phi) * pauli::y().matrix() + std::cos(theta) * pauli::z().matrix();
    EXPECT_LT((obs.as_operator().matrix() - n).norm(), 1e-14);
    auto up = spin_state(theta, phi);
    EXPECT_NEAR(std::abs(inner_product(up.amplitudes(), tsvf::apply(obs.branch(0).projector, up))), 1.0, 1e-14);
}

TEST(SpectralObservableTest, ConjugatedBy) {
    auto u = beamsplitter();
    auto obs = which_path(2).conjugated_by(u);
    Matrix expected = u.matrix().adjoint() * which_path(2).as_operator().matrix() * u.matrix();
    EXPECT_LT((obs.as_operator().matrix() - expected).norm(), 1e-14);
}

TEST(SpectralObservableTest, DetectorBasisReadsRows) {
    auto u = beamsplitter();
    auto det = detector_basis(u);
    EXPECT_EQ(det.eigenvalues(), (std::vector<double>{1.0, 2.0}));
    // D1 fires with certainty on the state that the splitter sends to port 0.
    Vector in = u.matrix().adjoint().col(0);
    double p = inner_product(in, tsvf::apply(det.branch(0).projector, in)).real();
    EXPECT_NEAR(p, 1.0, 1e-14);
}

TEST(SpectralObservableTest, BellBasisIsComplete) {
    auto bell = bell_basis();
    ASSERT_EQ(bell.size(), 4u);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto &b : bell.branches()) {
        EXPECT_NEAR(b.projector.matrix().trace().real(), 1.0, 1e-14);
        sum += b.projector.matrix();
    }
    EXPECT_LT((sum - Matrix::Identity(4, 4)).norm(), 1e-14);
}

TEST(TensorTest, MatchesReferenceKronecker) {
    RandomStream rng(5, 1);
    for (int k = 0; k < 20; ++k) {
        auto a = random_observable(2, rng).as_operator();
        auto b = random_observable(3, rng).as_operator();
        EXPECT_LT(max_diff(reference::kron(reference::mat(a), reference::mat(b)), tensor(a, b)), 1e-14);
        auto s = random_state(2, rng), t = random_state(3, rng);
        auto st = tensor(s, t);
        auto ref = reference::kron(reference::vec(s), reference::vec(t));
        for (size_t i = 0; i < ref.size(); ++i) {
            EXPECT_LT(std::abs(ref[i] - st[i]), 1e-15);
        }
    }
}

TEST(TensorTest, EmbedPlacesFactor) {
    const std::vector<size_t> dims{2, 3, 2};
    auto y = pauli::y();
    auto e = embed(y, 0, dims);
    auto expected = reference::kron(reference::kron(reference::mat(y), reference::mat(LinearOperator::identity(3))),
                                    reference::mat(LinearOperator::identity(2)));
    EXPECT_LT(max_diff(expected, e), 1e-15);
    auto mid = embed(which_path(3).as_operator(), 1, dims);
    auto expected_mid =
        reference::kron(reference::kron(reference::mat(LinearOperator::identity(2)), reference::mat(which_path(3).as_operator())),
                        reference::mat(LinearOperator::identity(2)));
    EXPECT_LT(max_diff(expected_mid, mid), 1e-15);
    EXPECT_THROW(embed(y, 3, dims), InvalidOperator);
    EXPECT_THROW(embed(y, 1, dims), DimensionMismatch);
}

TEST(InnerProductTest, ConjugatesBra) {
    StateVector a{Complex(0, 1), 0.0};
    StateVector b{1.0, 0.0};
    EXPECT_EQ(inner_product(a, b), Complex(0, -1));
    EXPECT_THROW(inner_product(a, StateVector::basis(3, 0)), DimensionMismatch);
}

}  // namespace
}  // namespace tsvf
