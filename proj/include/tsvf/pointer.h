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

#ifndef TSVF_POINTER_H
#define TSVF_POINTER_H

#include <cstdint>
#include <span>
#include <vector>

#include "tsvf/linalg.h"
#include "tsvf/oracle.h"
#include "tsvf/rng.h"

namespace tsvf {

// Discretized von Neumann measurement. The interaction exp(-iλ p A) moves the
// pointer wavefunction by λ·aⱼ on eigenbranch j; the translation is done in the
// discrete Fourier basis, so sub-grid shifts are exact up to grid bandwidth.

inline constexpr size_t kMinPointerPoints = 256;
inline constexpr double kPointerNormTolerance = 1e-8;

struct PointerDefaults {
    static constexpr size_t points = 4096;
    static constexpr double span = 64.0;
    static constexpr double sigma = 1.0;
    static constexpr double strong_strength = 10.0;
};

/// Pointer wavefunction sampled on q_k = center − span/2 + k·dq, dq = span/n.
/// Normalized so that Σ|amp|²·dq = 1.
class PointerState {
   public:
    PointerState(Vector amplitudes, double center, double sigma, double span);

    size_t size() const {
        return static_cast<size_t>(amps_.size());
    }
    double center() const {
        return center_;
    }
    double sigma() const {
        return sigma_;
    }
    double span() const {
        return span_;
    }
    double dq() const {
        return span_ / static_cast<double>(size());
    }
    double position(size_t k) const {
        return center_ - span_ / 2 + static_cast<double>(k) * dq();
    }
    const Vector &amplitudes() const {
        return amps_;
    }

    double norm() const;
    double mean_position() const;
    double variance() const;
    /// ⟨p⟩ with p = −i d/dq, evaluated on the discrete Fourier grid.
    double mean_momentum() const;

    /// ψ(q) → ψ(q − shift), by Fourier phase ramp.
    PointerState translated(double shift) const;

   private:
    Vector amps_;
    double center_;
    double sigma_;
    double span_;
};

/// Discretized Gaussian ready state with position spread sigma (|ψ|² has variance σ²).
/// Throws InputError when sigma ≤ 0, span < 16σ, n < 256 or dq > σ/8.
PointerState make_gaussian_pointer(double center, double sigma, size_t n = PointerDefaults::points,
                                   double span = PointerDefaults::span);

struct CouplingSpec {
    /// Time-integrated coupling: pointer shift per unit eigenvalue.
    double strength;
    SpectralObservable observable;
};

/// System ⊗ pointer amplitudes: row s is the system basis index, column k the grid point.
class JointState {
   public:
    JointState(Matrix amplitudes, PointerState initial_pointer);

    size_t system_dim() const {
        return static_cast<size_t>(amps_.rows());
    }
    const Matrix &amplitudes() const {
        return amps_;
    }
    /// The ready state the joint state was coupled from; carries the grid.
    const PointerState &initial_pointer() const {
        return pointer_;
    }
    double norm() const;

    /// ⟨φ|_system applied to the joint state: the (unnormalized) pointer
    /// wavefunction conditioned on finding the system in φ.
    Vector project_system(const StateVector &phi) const;

   private:
    Matrix amps_;
    PointerState pointer_;
};

/// Σⱼ Pⱼ|system⟩ ⊗ pointer translated by λ·aⱼ. Throws InputError when some
/// |λ·aⱼ| exceeds a quarter of the grid span.
JointState couple(const StateVector &system, const PointerState &pointer, const CouplingSpec &coupling);

struct ReadoutSample {
    size_t bin;
    double position;
    StateVector system;
};

/// Pointer-position readout of a joint state.
class Readout {
   public:
    explicit Readout(const JointState &joint);

    /// Probability of each grid bin, Σ_s |amp(s,k)|²·dq.
    std::span<const double> probabilities() const {
        return probabilities_;
    }
    double position(size_t bin) const {
        return joint_.initial_pointer().position(bin);
    }
    /// System state left behind when the pointer is found in `bin`.
    StateVector collapsed_system(size_t bin) const;
    ReadoutSample sample(RandomStream &rng) const;

   private:
    JointState joint_;
    std::vector<double> probabilities_;
};

/// Mean pointer position after coupling and post-selecting the system on
/// `post`, minus the ready-state center. Throws ZeroOverlap when
/// |⟨post|pre⟩| ≤ 1e-14 or the post-selected pointer norm is below 1e-14.
double post_selected_mean_shift(const StateVector &pre, const StateVector &post, const CouplingSpec &coupling,
                                const PointerState &pointer);

/// Mean pointer momentum after post-selection, minus the ready state's.
/// Its sign follows Im of the weak value.
double post_selected_momentum_shift(const StateVector &pre, const StateVector &post, const CouplingSpec &coupling,
                                    const PointerState &pointer);

struct WeakSweepRow {
    double strength;
    double shift_over_strength;
    double momentum_shift;
    Complex weak_value;
    double error;  // |shift/λ − Re A_w|
};

std::vector<WeakSweepRow> weak_sweep(const StateVector &pre, const StateVector &post,
                                     const SpectralObservable &observable, std::span<const double> strengths,
                                     const PointerState &pointer);

struct StrongReadoutReport {
    uint64_t samples;
    /// Readout lobe frequencies among samples whose system passed post-selection.
    StageFrequencies lobes;
};

/// Strong-coupling Monte Carlo: sample a pointer bin, collapse the system,
/// sample the post-selection |post⟩⟨post| vs complement, and tally the
/// eigenvalue whose lobe center λ·aⱼ is closest to the readout. Draws use
/// RandomStream(seed, k) for each block k of kChunkTrials samples.
StrongReadoutReport strong_readout_experiment(const StateVector &pre, const StateVector &post,
                                              const CouplingSpec &coupling, const PointerState &pointer,
                                              uint64_t samples, uint64_t seed);

}  // namespace tsvf

#endif
