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

#include "tsvf/linalg.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "tsvf/errors.h"

namespace tsvf {

namespace {

bool all_finite(const Matrix &m) {
    return m.allFinite();
}

double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_same_dim(const char *where, size_t a, size_t b) {
    if (a != b) {
        throw DimensionMismatch(where, a, b);
    }
}

}  // namespace

StateVector::StateVector(Vector amplitudes) {
    if (amplitudes.size() == 0) {
        throw InvalidState("state vector must have positive dimension");
    }
    if (!amplitudes.allFinite()) {
        throw InvalidState("state vector has non-finite amplitudes");
    }
    double n2 = amplitudes.squaredNorm();
    if (std::abs(n2 - 1.0) > kValidationTolerance) {
        throw InvalidState("state vector is not normalized (squared norm " + std::to_string(n2) + ")");
    }
    amps_ = amplitudes / std::sqrt(n2);
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(Vector(Eigen::Map<const Vector>(amplitudes.begin(), static_cast<Eigen::Index>(amplitudes.size())))) {
}

StateVector StateVector::normalize(const Vector &v) {
    if (v.size() == 0 || !v.allFinite()) {
        throw InvalidState("cannot normalize an empty or non-finite vector");
    }
    double n = v.norm();
    if (n < 1e-300) {
        throw InvalidState("cannot normalize a zero vector");
    }
    return StateVector(Vector(v / n), Trusted{});
}

StateVector StateVector::basis(size_t dim, size_t index) {
    if (index >= dim) {
        throw InvalidState("basis index " + std::to_string(index) + " out of range for dimension " + std::to_string(dim));
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v), Trusted{});
}

LinearOperator::LinearOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw InvalidOperator("operator must be a non-empty square matrix");
    }
    if (!all_finite(m_)) {
        throw InvalidOperator("operator has non-finite entries");
    }
}

LinearOperator LinearOperator::identity(size_t dim) {
    auto n = static_cast<Eigen::Index>(dim);
    return LinearOperator(Matrix::Identity(n, n));
}

LinearOperator LinearOperator::adjoint() const {
    return LinearOperator(m_.adjoint());
}

bool LinearOperator::is_hermitian(double tol) const {
    return max_abs(m_ - m_.adjoint()) <= tol;
}

LinearOperator operator*(const LinearOperator &a, const LinearOperator &b) {
    require_same_dim("operator product", a.dim(), b.dim());
    return LinearOperator(a.m_ * b.m_);
}

LinearOperator operator+(const LinearOperator &a, const LinearOperator &b) {
    require_same_dim("operator sum", a.dim(), b.dim());
    return LinearOperator(a.m_ + b.m_);
}

LinearOperator operator*(Complex s, const LinearOperator &a) {
    return LinearOperator(s * a.m_);
}

Unitary::Unitary(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw InvalidOperator("unitary must be a non-empty square matrix");
    }
    if (!all_finite(m_)) {
        throw InvalidOperator("unitary has non-finite entries");
    }
    Matrix defect = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
    if (max_abs(defect) > kValidationTolerance) {
        throw InvalidOperator("matrix is not unitary (max |U†U - I| = " + std::to_string(max_abs(defect)) + ")");
    }
}

Unitary Unitary::identity(size_t dim) {
    auto n = static_cast<Eigen::Index>(dim);
    return Unitary(Matrix::Identity(n, n), Trusted{});
}

Unitary Unitary::adjoint() const {
    return Unitary(m_.adjoint(), Trusted{});
}

Unitary operator*(const Unitary &a, const Unitary &b) {
    require_same_dim("unitary product", a.dim(), b.dim());
    return Unitary(a.m_ * b.m_, Unitary::Trusted{});
}

SpectralObservable::SpectralObservable(std::vector<SpectralBranch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw InvalidOperator("observable needs at least one branch");
    }
    dim_ = branches_.front().projector.dim();
    auto n = static_cast<Eigen::Index>(dim_);
    Matrix sum = Matrix::Zero(n, n);
    for (size_t j = 0; j < branches_.size(); ++j) {
        const auto &bj = branches_[j];
        std::string name = "branch " + std::to_string(j) + " (eigenvalue " + std::to_string(bj.eigenvalue) + ")";
        if (!std::isfinite(bj.eigenvalue)) {
            throw InvalidOperator(name + ": eigenvalue is not finite");
        }
        if (bj.projector.dim() != dim_) {
            throw InvalidOperator(name + ": projector dimension " + std::to_string(bj.projector.dim()) +
                                  " differs from " + std::to_string(dim_));
        }
        const Matrix &p = bj.projector.matrix();
        if (max_abs(p - p.adjoint()) > kValidationTolerance) {
            throw InvalidOperator(name + ": projector is not Hermitian");
        }
        if (max_abs(p * p - p) > kValidationTolerance) {
            throw InvalidOperator(name + ": projector is not idempotent");
        }
        for (size_t k = 0; k < j; ++k) {
            if (std::abs(branches_[k].eigenvalue - bj.eigenvalue) <= kDegeneracyTolerance) {
                throw InvalidOperator(name + ": eigenvalue repeats branch " + std::to_string(k));
            }
            if (max_abs(branches_[k].projector.matrix() * p) > kValidationTolerance) {
                throw InvalidOperator(name + ": projector is not orthogonal to branch " + std::to_string(k));
            }
        }
        sum += p;
    }
    if (max_abs(sum - Matrix::Identity(n, n)) > kValidationTolerance) {
        throw InvalidOperator("projectors do not resolve the identity");
    }
}

SpectralObservable SpectralObservable::from_hermitian(const LinearOperator &h, double merge_tol) {
    if (!h.is_hermitian()) {
        throw InvalidOperator("matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw InvalidOperator("eigendecomposition failed");
    }
    const auto &values = solver.eigenvalues();  // ascending
    const auto &vectors = solver.eigenvectors();
    auto n = values.size();
    std::vector<SpectralBranch> branches;
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && values(end) - values(end - 1) <= merge_tol) {
            ++end;
        }
        auto block = vectors.middleCols(start, end - start);
        Matrix p = block * block.adjoint();
        branches.push_back({values.segment(start, end - start).mean(), LinearOperator(std::move(p))});
        start = end;
    }
    return SpectralObservable(std::move(branches));
}

SpectralObservable SpectralObservable::trivial(size_t dim) {
    return SpectralObservable({{1.0, LinearOperator::identity(dim)}});
}

std::vector<double> SpectralObservable::eigenvalues() const {
    std::vector<double> out;
    out.reserve(branches_.size());
    for (const auto &b : branches_) {
        out.push_back(b.eigenvalue);
    }
    return out;
}

std::optional<size_t> SpectralObservable::find(double eigenvalue, double tol) const {
    for (size_t j = 0; j < branches_.size(); ++j) {
        if (std::abs(branches_[j].eigenvalue - eigenvalue) <= tol) {
            return j;
        }
    }
    return std::nullopt;
}

LinearOperator SpectralObservable::as_operator() const {
    auto n = static_cast<Eigen::Index>(dim_);
    Matrix m = Matrix::Zero(n, n);
    for (const auto &b : branches_) {
        m += b.eigenvalue * b.projector.matrix();
    }
    return LinearOperator(std::move(m));
}

SpectralObservable SpectralObservable::conjugated_by(const Unitary &u) const {
    require_same_dim("conjugated_by", dim_, u.dim());
    std::vector<SpectralBranch> out;
    out.reserve(branches_.size());
    for (const auto &b : branches_) {
        Matrix p = u.matrix().adjoint() * b.projector.matrix() * u.matrix();
        // Re-symmetrize so rounding in the triple product cannot break Hermiticity.
        Matrix sym = (p + p.adjoint()) / 2.0;
        out.push_back({b.eigenvalue, LinearOperator(std::move(sym))});
    }
    return SpectralObservable(std::move(out));
}

Complex inner_product(const Vector &bra, const Vector &ket) {
    require_same_dim("inner_product", static_cast<size_t>(bra.size()), static_cast<size_t>(ket.size()));
    return bra.dot(ket);  // Eigen conjugates the left operand
}

Complex inner_product(const StateVector &bra, const StateVector &ket) {
    return inner_product(bra.amplitudes(), ket.amplitudes());
}

Vector apply(const LinearOperator &op, const Vector &ket) {
    require_same_dim("apply", op.dim(), static_cast<size_t>(ket.size()));
    return op.matrix() * ket;
}

Vector apply(const LinearOperator &op, const StateVector &ket) {
    return apply(op, ket.amplitudes());
}

StateVector evolve(const Unitary &u, const StateVector &ket) {
    require_same_dim("evolve", u.dim(), ket.dim());
    return StateVector::normalize(u.matrix() * ket.amplitudes());
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    Vector v = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes()).eval();
    return StateVector::normalize(v);
}

LinearOperator tensor(const LinearOperator &a, const LinearOperator &b) {
    return LinearOperator(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
}

Unitary tensor(const Unitary &a, const Unitary &b) {
    return Unitary(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval());
}

LinearOperator embed(const LinearOperator &op, size_t position, std::span<const size_t> dims) {
    if (position >= dims.size()) {
        throw InvalidOperator("embed position " + std::to_string(position) + " out of range");
    }
    require_same_dim("embed", op.dim(), dims[position]);
    LinearOperator out = position == 0 ? op : LinearOperator::identity(dims[0]);
    for (size_t k = 1; k < dims.size(); ++k) {
        out = tensor(out, k == position ? op : LinearOperator::identity(dims[k]));
    }
    return out;
}

SpectralObservable embed(const SpectralObservable &obs, size_t position, std::span<const size_t> dims) {
    std::vector<SpectralBranch> out;
    out.reserve(obs.size());
    for (const auto &b : obs.branches()) {
        out.push_back({b.eigenvalue, embed(b.projector, position, dims)});
    }
    return SpectralObservable(std::move(out));
}

StateVector spin_state(double theta, double phi) {
    Vector v(2);
    v << std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2);
    return StateVector::normalize(v);
}

namespace pauli {

LinearOperator x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return LinearOperator(m);
}

LinearOperator y() {
    const Complex i{0, 1};
    Matrix m(2, 2);
    m << 0, -i, i, 0;
    return LinearOperator(m);
}

LinearOperator z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return LinearOperator(m);
}

}  // namespace pauli

namespace {

// (I ± n·σ)/2, written out so axis-aligned directions give exact entries.
SpectralObservable axis_observable(double nx, double ny, double nz) {
    Matrix n_sigma = nx * pauli::x().matrix() + ny * pauli::y().matrix() + nz * pauli::z().matrix();
    Matrix id = Matrix::Identity(2, 2);
    return SpectralObservable({
        {+1.0, LinearOperator((id + n_sigma) / 2.0)},
        {-1.0, LinearOperator((id - n_sigma) / 2.0)},
    });
}

}  // namespace

SpectralObservable spin_observable(double theta, double phi) {
    return axis_observable(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

SpectralObservable pauli_observable(char axis) {
    switch (axis) {
        case 'x':
            return axis_observable(1, 0, 0);
        case 'y':
            return axis_observable(0, 1, 0);
        case 'z':
            return axis_observable(0, 0, 1);
        default:
            throw InvalidOperator(std::string("unknown Pauli axis '") + axis + "'");
    }
}

SpectralObservable which_path(size_t dim) {
    std::vector<SpectralBranch> out;
    for (size_t k = 0; k < dim; ++k) {
        auto e = StateVector::basis(dim, k).amplitudes();
        out.push_back({static_cast<double>(k), LinearOperator(e * e.adjoint())});
    }
    return SpectralObservable(std::move(out));
}

SpectralObservable detector_basis(const Unitary &u) {
    std::vector<SpectralBranch> out;
    for (size_t k = 0; k < u.dim(); ++k) {
        // u†|k⟩ is the k-th row of u, conjugated.
        Vector v = u.matrix().row(static_cast<Eigen::Index>(k)).adjoint();
        out.push_back({static_cast<double>(k + 1), LinearOperator(v * v.adjoint())});
    }
    return SpectralObservable(std::move(out));
}

SpectralObservable bell_basis() {
    const double r = 1.0 / std::numbers::sqrt2;
    const std::vector<Vector> states = [&] {
        std::vector<Vector> s(4, Vector::Zero(4));
        s[0](0) = r, s[0](3) = r;   // Φ+
        s[1](0) = r, s[1](3) = -r;  // Φ−
        s[2](1) = r, s[2](2) = r;   // Ψ+
        s[3](1) = r, s[3](2) = -r;  // Ψ−
        return s;
    }();
    std::vector<SpectralBranch> out;
    for (size_t k = 0; k < states.size(); ++k) {
        out.push_back({static_cast<double>(k), LinearOperator(states[k] * states[k].adjoint())});
    }
    return SpectralObservable(std::move(out));
}

Unitary beamsplitter() {
    const double r = 1.0 / std::numbers::sqrt2;
    const Complex i{0, 1};
    Matrix m(2, 2);
    m << r, i * r, i * r, r;
    return Unitary(m);
}

Unitary beamsplitter(double eta) {
    const Complex i{0, 1};
    Matrix m(2, 2);
    m << std::cos(eta), i * std::sin(eta), i * std::sin(eta), std::cos(eta);
    return Unitary(m);
}

}  // namespace tsvf
