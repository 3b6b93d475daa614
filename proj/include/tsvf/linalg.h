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

#ifndef TSVF_LINALG_H
#define TSVF_LINALG_H

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace tsvf {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Unit-norm tolerance enforced when a state is constructed.
inline constexpr double kConstructionTolerance = 1e-12;
/// Tolerance for validating projectors, unitaries and caller-supplied norms.
inline constexpr double kValidationTolerance = 1e-10;
/// Eigenvalues closer than this are merged into one degenerate branch.
inline constexpr double kDegeneracyTolerance = 1e-8;

/// A unit-normalized pure state over a finite Hilbert space.
///
/// Construction accepts amplitudes whose squared norm is within
/// kValidationTolerance of 1 and rescales them onto the unit sphere. Anything
/// further away is rejected; use normalize() to accept arbitrary nonzero input.
class StateVector {
   public:
    explicit StateVector(Vector amplitudes);
    StateVector(std::initializer_list<Complex> amplitudes);

    static StateVector normalize(const Vector &v);
    static StateVector basis(size_t dim, size_t index);

    size_t dim() const {
        return static_cast<size_t>(amps_.size());
    }
    const Vector &amplitudes() const {
        return amps_;
    }
    Complex operator[](size_t i) const {
        return amps_(static_cast<Eigen::Index>(i));
    }

   private:
    struct Trusted {};
    StateVector(Vector amplitudes, Trusted) : amps_(std::move(amplitudes)) {
    }
    Vector amps_;
};

/// Square matrix with finite entries.
class LinearOperator {
   public:
    explicit LinearOperator(Matrix m);

    static LinearOperator identity(size_t dim);

    size_t dim() const {
        return static_cast<size_t>(m_.rows());
    }
    const Matrix &matrix() const {
        return m_;
    }
    Complex operator()(size_t r, size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
    LinearOperator adjoint() const;
    bool is_hermitian(double tol = kValidationTolerance) const;

    friend LinearOperator operator*(const LinearOperator &a, const LinearOperator &b);
    friend LinearOperator operator+(const LinearOperator &a, const LinearOperator &b);
    friend LinearOperator operator*(Complex s, const LinearOperator &a);

   private:
    Matrix m_;
};

/// Matrix satisfying U†U = I within kValidationTolerance.
class Unitary {
   public:
    explicit Unitary(Matrix m);

    static Unitary identity(size_t dim);

    size_t dim() const {
        return static_cast<size_t>(m_.rows());
    }
    const Matrix &matrix() const {
        return m_;
    }
    Unitary adjoint() const;
    LinearOperator as_operator() const {
        return LinearOperator(m_);
    }

    /// Composition: (a * b) applies b first.
    friend Unitary operator*(const Unitary &a, const Unitary &b);

   private:
    struct Trusted {};
    Unitary(Matrix m, Trusted) : m_(std::move(m)) {
    }
    Matrix m_;
};

struct SpectralBranch {
    double eigenvalue;
    LinearOperator projector;
};

/// An observable in spectral form: distinct real eigenvalues with orthogonal
/// projectors that resolve the identity. Degenerate eigenspaces are single
/// branches with higher-rank projectors.
class SpectralObservable {
   public:
    explicit SpectralObservable(std::vector<SpectralBranch> branches);

    /// Eigendecomposes a Hermitian matrix; eigenvalues within merge_tol of
    /// their neighbour are merged into one branch (ascending order).
    static SpectralObservable from_hermitian(const LinearOperator &h, double merge_tol = kDegeneracyTolerance);
    /// Single branch {1, I}: a measurement that always succeeds and never disturbs.
    static SpectralObservable trivial(size_t dim);

    size_t dim() const {
        return dim_;
    }
    size_t size() const {
        return branches_.size();
    }
    std::span<const SpectralBranch> branches() const {
        return branches_;
    }
    const SpectralBranch &branch(size_t i) const {
        return branches_.at(i);
    }
    std::vector<double> eigenvalues() const;
    std::optional<size_t> find(double eigenvalue, double tol = 1e-9) const;

    /// Σ aⱼ Pⱼ
    LinearOperator as_operator() const;
    /// Heisenberg picture: projectors U† P U, so measuring the result on ψ
    /// equals measuring this observable on Uψ.
    SpectralObservable conjugated_by(const Unitary &u) const;

   private:
    size_t dim_;
    std::vector<SpectralBranch> branches_;
};

Complex inner_product(const StateVector &bra, const StateVector &ket);
Complex inner_product(const Vector &bra, const Vector &ket);

/// op·ket; the result is generally unnormalized.
Vector apply(const LinearOperator &op, const StateVector &ket);
Vector apply(const LinearOperator &op, const Vector &ket);
StateVector evolve(const Unitary &u, const StateVector &ket);

/// Kronecker products; the first factor is the slow index.
StateVector tensor(const StateVector &a, const StateVector &b);
LinearOperator tensor(const LinearOperator &a, const LinearOperator &b);
Unitary tensor(const Unitary &a, const Unitary &b);

/// I ⊗ ... ⊗ op ⊗ ... ⊗ I with op acting on factor `position` of a system
/// whose factor dimensions are `dims`.
LinearOperator embed(const LinearOperator &op, size_t position, std::span<const size_t> dims);
SpectralObservable embed(const SpectralObservable &obs, size_t position, std::span<const size_t> dims);

/// cos(θ/2)|↑z⟩ + e^{iφ} sin(θ/2)|↓z⟩
StateVector spin_state(double theta, double phi = 0.0);

namespace pauli {
LinearOperator x();
LinearOperator y();
LinearOperator z();
}  // namespace pauli

/// σ·n for the unit vector at polar angle θ and azimuth φ; branches ordered +1, −1.
SpectralObservable spin_observable(double theta, double phi = 0.0);
/// axis ∈ {'x','y','z'}; branches ordered +1, −1.
SpectralObservable pauli_observable(char axis);
/// Computational-basis measurement; eigenvalue k for |k⟩.
SpectralObservable which_path(size_t dim);
/// Basis measurement after u: branch k has eigenvalue k+1 and projector u†|k⟩⟨k|u.
SpectralObservable detector_basis(const Unitary &u);
/// Two-qubit Bell basis Φ+, Φ−, Ψ+, Ψ− with eigenvalues 0, 1, 2, 3.
SpectralObservable bell_basis();

/// (1/√2)[[1, i], [i, 1]]
Unitary beamsplitter();
/// [[cos η, i sin η], [i sin η, cos η]]; η = π/4 is the balanced splitter.
Unitary beamsplitter(double eta);

}  // namespace tsvf

#endif
