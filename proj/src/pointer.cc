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

#include "tsvf/pointer.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <unsupported/Eigen/FFT>

#include "tsvf/errors.h"
#include "tsvf/two_state.h"

namespace tsvf {

namespace {

constexpr double kPostSelectionFloor = 1e-14;

// Angular wavenumber of DFT bin m on a grid of n points spaced dq.
double wavenumber(size_t m, size_t n, double dq) {
    auto signed_m = static_cast<double>(m) - (m >= n / 2 ? static_cast<double>(n) : 0.0);
    return 2 * std::numbers::pi * signed_m / (static_cast<double>(n) * dq);
}

std::vector<Complex> to_std(const Vector &v) {
    return {v.data(), v.data() + v.size()};
}

Vector to_eigen(const std::vector<Complex> &v) {
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double mean_of(const Vector &amps, const PointerState &grid) {
    double num = 0, den = 0;
    for (Eigen::Index k = 0; k < amps.size(); ++k) {
        double w = std::norm(amps(k));
        num += grid.position(static_cast<size_t>(k)) * w;
        den += w;
    }
    return num / den;
}

Vector post_selected_pointer(const StateVector &pre, const StateVector &post, const CouplingSpec &coupling,
                             const PointerState &pointer) {
    if (pre.dim() != post.dim()) {
        throw DimensionMismatch("post-selected pointer", pre.dim(), post.dim());
    }
    if (std::abs(inner_product(post, pre)) <= kPostSelectionFloor) {
        throw ZeroOverlap("post-selected pointer: pre- and post-selected states are orthogonal");
    }
    Vector chi = couple(pre, pointer, coupling).project_system(post);
    if (chi.squaredNorm() * pointer.dq() < kPostSelectionFloor) {
        throw ZeroOverlap("post-selected pointer norm is below 1e-14");
    }
    return chi;
}

}  // namespace

PointerState::PointerState(Vector amplitudes, double center, double sigma, double span)
    : amps_(std::move(amplitudes)), center_(center), sigma_(sigma), span_(span) {
    if (static_cast<size_t>(amps_.size()) < kMinPointerPoints) {
        throw InputError("pointer grid needs at least " + std::to_string(kMinPointerPoints) + " points");
    }
    if (!(sigma_ > 0) || !std::isfinite(center_)) {
        throw InputError("pointer width must be positive and center finite");
    }
    if (span_ < 16 * sigma_) {
        throw InputError("pointer grid must extend at least 8 sigma on each side of the center");
    }
    if (!amps_.allFinite()) {
        throw InputError("pointer amplitudes are not finite");
    }
    if (std::abs(norm() - 1.0) > kPointerNormTolerance) {
        throw InputError("pointer state is not normalized (sum |amp|^2 dq = " + std::to_string(norm()) + ")");
    }
}

double PointerState::norm() const {
    return amps_.squaredNorm() * dq();
}

double PointerState::mean_position() const {
    return mean_of(amps_, *this);
}

double PointerState::variance() const {
    double mean = mean_position();
    double num = 0, den = 0;
    for (size_t k = 0; k < size(); ++k) {
        double w = std::norm(amps_(static_cast<Eigen::Index>(k)));
        num += (position(k) - mean) * (position(k) - mean) * w;
        den += w;
    }
    return num / den;
}

double PointerState::mean_momentum() const {
    Eigen::FFT<double> fft;
    std::vector<Complex> spectrum;
    fft.fwd(spectrum, to_std(amps_));
    double num = 0, den = 0;
    for (size_t m = 0; m < spectrum.size(); ++m) {
        double w = std::norm(spectrum[m]);
        num += wavenumber(m, size(), dq()) * w;
        den += w;
    }
    return num / den;
}

PointerState PointerState::translated(double shift) const {
    if (shift == 0.0) {
        return *this;
    }
    Eigen::FFT<double> fft;
    std::vector<Complex> spectrum;
    fft.fwd(spectrum, to_std(amps_));
    for (size_t m = 0; m < spectrum.size(); ++m) {
        spectrum[m] *= std::polar(1.0, -wavenumber(m, size(), dq()) * shift);
    }
    std::vector<Complex> back;
    fft.inv(back, spectrum);
    return PointerState(to_eigen(back), center_, sigma_, span_);
}

PointerState make_gaussian_pointer(double center, double sigma, size_t n, double span) {
    if (!(sigma > 0)) {
        throw InputError("pointer sigma must be positive");
    }
    if (n < kMinPointerPoints) {
        throw InputError("pointer grid needs at least " + std::to_string(kMinPointerPoints) + " points");
    }
    if (span < 16 * sigma) {
        throw InputError("pointer span must be at least 16 sigma");
    }
    double dq = span / static_cast<double>(n);
    if (dq > sigma / 8) {
        throw InputError("pointer grid too coarse: dq = " + std::to_string(dq) + " exceeds sigma/8");
    }
    Vector amps(static_cast<Eigen::Index>(n));
    for (size_t k = 0; k < n; ++k) {
        double x = -span / 2 + static_cast<double>(k) * dq;
        amps(static_cast<Eigen::Index>(k)) = std::exp(-x * x / (4 * sigma * sigma));
    }
    amps /= std::sqrt(amps.squaredNorm() * dq);
    return PointerState(std::move(amps), center, sigma, span);
}

JointState::JointState(Matrix amplitudes, PointerState initial_pointer)
    : amps_(std::move(amplitudes)), pointer_(std::move(initial_pointer)) {
    if (static_cast<size_t>(amps_.cols()) != pointer_.size()) {
        throw DimensionMismatch("joint state grid", static_cast<size_t>(amps_.cols()), pointer_.size());
    }
}

double JointState::norm() const {
    return amps_.squaredNorm() * pointer_.dq();
}

Vector JointState::project_system(const StateVector &phi) const {
    if (phi.dim() != system_dim()) {
        throw DimensionMismatch("project_system", phi.dim(), system_dim());
    }
    return amps_.transpose() * phi.amplitudes().conjugate();
}

JointState couple(const StateVector &system, const PointerState &pointer, const CouplingSpec &coupling) {
    const auto &obs = coupling.observable;
    if (system.dim() != obs.dim()) {
        throw DimensionMismatch("couple", system.dim(), obs.dim());
    }
    if (!std::isfinite(coupling.strength) || coupling.strength < 0) {
        throw InputError("coupling strength must be finite and non-negative");
    }
    Matrix joint = Matrix::Zero(static_cast<Eigen::Index>(system.dim()), static_cast<Eigen::Index>(pointer.size()));
    for (const auto &b : obs.branches()) {
        double shift = coupling.strength * b.eigenvalue;
        if (std::abs(shift) > pointer.span() / 4) {
            throw InputError("pointer shift " + std::to_string(shift) + " exceeds the grid margin (span/4 = " +
                             std::to_string(pointer.span() / 4) + ")");
        }
        Vector part = apply(b.projector, system);
        if (part.squaredNorm() == 0) {
            continue;
        }
        joint += part * pointer.translated(shift).amplitudes().transpose();
    }
    return JointState(std::move(joint), pointer);
}

Readout::Readout(const JointState &joint) : joint_(joint) {
    const double dq = joint.initial_pointer().dq();
    auto col_norms = joint.amplitudes().colwise().squaredNorm();
    probabilities_.resize(static_cast<size_t>(col_norms.size()));
    for (Eigen::Index k = 0; k < col_norms.size(); ++k) {
        probabilities_[static_cast<size_t>(k)] = col_norms(k) * dq;
    }
}

StateVector Readout::collapsed_system(size_t bin) const {
    return StateVector::normalize(joint_.amplitudes().col(static_cast<Eigen::Index>(bin)));
}

ReadoutSample Readout::sample(RandomStream &rng) const {
    size_t bin = sample_index(probabilities_, rng.uniform());
    return {bin, position(bin), collapsed_system(bin)};
}

double post_selected_mean_shift(const StateVector &pre, const StateVector &post, const CouplingSpec &coupling,
                                const PointerState &pointer) {
    Vector chi = post_selected_pointer(pre, post, coupling, pointer);
    return mean_of(chi, pointer) - pointer.center();
}

double post_selected_momentum_shift(const StateVector &pre, const StateVector &post, const CouplingSpec &coupling,
                                    const PointerState &pointer) {
    Vector chi = post_selected_pointer(pre, post, coupling, pointer);
    chi /= std::sqrt(chi.squaredNorm() * pointer.dq());
    PointerState conditioned(std::move(chi), pointer.center(), pointer.sigma(), pointer.span());
    return conditioned.mean_momentum() - pointer.mean_momentum();
}

std::vector<WeakSweepRow> weak_sweep(const StateVector &pre, const StateVector &post,
                                     const SpectralObservable &observable, std::span<const double> strengths,
                                     const PointerState &pointer) {
    const Complex aw = weak_value(TwoStateVector(pre, post), observable.as_operator());
    std::vector<WeakSweepRow> rows;
    for (double lambda : strengths) {
        if (!(lambda > 0)) {
            throw InputError("weak sweep strengths must be positive");
        }
        CouplingSpec c{lambda, observable};
        double ratio = post_selected_mean_shift(pre, post, c, pointer) / lambda;
        double p_shift = post_selected_momentum_shift(pre, post, c, pointer);
        rows.push_back({lambda, ratio, p_shift, aw, std::abs(ratio - aw.real())});
    }
    return rows;
}

StrongReadoutReport strong_readout_experiment(const StateVector &pre, const StateVector &post,
                                              const CouplingSpec &coupling, const PointerState &pointer,
                                              uint64_t samples, uint64_t seed) {
    if (samples < 1) {
        throw InputError("strong readout needs at least one sample");
    }
    if (pre.dim() != post.dim()) {
        throw DimensionMismatch("strong_readout_experiment", pre.dim(), post.dim());
    }
    const auto &obs = coupling.observable;
    const Readout readout(couple(pre, pointer, coupling));
    const Vector &phi = post.amplitudes();

    std::vector<uint64_t> counts(obs.size(), 0);
    for (uint64_t start = 0, chunk = 0; start < samples; start += kChunkTrials, ++chunk) {
        RandomStream rng(seed, chunk);
        uint64_t end = std::min(samples, start + kChunkTrials);
        for (uint64_t s = start; s < end; ++s) {
            auto r = readout.sample(rng);
            double p_accept = std::norm(phi.dot(r.system.amplitudes()));
            std::array<double, 2> w{p_accept, std::max(0.0, 1.0 - p_accept)};
            if (sample_index(w, rng.uniform()) != 0) {
                continue;
            }
            size_t lobe = 0;
            double best = std::numeric_limits<double>::infinity();
            for (size_t j = 0; j < obs.size(); ++j) {
                double d = std::abs(r.position - pointer.center() - coupling.strength * obs.branch(j).eigenvalue);
                if (d < best) {
                    best = d;
                    lobe = j;
                }
            }
            counts[lobe]++;
        }
    }

    StrongReadoutReport report{samples, {}};
    report.lobes.label = "pointer";
    for (auto c : counts) {
        report.lobes.n += c;
    }
    if (report.lobes.n == 0) {
        throw AllRejected("strong readout: no sample passed post-selection");
    }
    for (size_t j = 0; j < obs.size(); ++j) {
        double p = static_cast<double>(counts[j]) / static_cast<double>(report.lobes.n);
        report.lobes.entries.push_back({obs.branch(j).eigenvalue, counts[j], p, standard_error(p, report.lobes.n)});
    }
    return report;
}

}  // namespace tsvf
