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

#ifndef TSVF_ORACLE_H
#define TSVF_ORACLE_H

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsvf/linalg.h"
#include "tsvf/two_state.h"

namespace tsvf {

// Brute-force sequential-measurement simulator. It never evaluates the ABL
// rule; it only samples Born weights, collapses, and discards trials whose
// final measurement misses the post-selected outcome.

struct UnitaryStage {
    Unitary unitary;
};

struct MeasureStage {
    SpectralObservable observable;
    std::string label;
};

using Stage = std::variant<UnitaryStage, MeasureStage>;

struct PostSelection {
    SpectralObservable observable;
    double eigenvalue;
};

/// Trials are processed in chunks of this size; chunk k draws from RandomStream(seed, k).
/// |ψ⟩⟨ψ| with eigenvalue 1 against its complement with eigenvalue 0; selects eigenvalue 1.
PostSelection post_select_on(const StateVector &psi);

inline constexpr uint64_t kChunkTrials = 4096;
inline constexpr uint64_t kDefaultMinAccepted = 100;
/// Born weights below this are treated as exactly zero.
inline constexpr double kZeroBranchWeight = 1e-15;

struct SimulationOptions {
    uint64_t trials = 100000;
    uint64_t seed = 0;
    /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned workers = 0;
};

struct StageTally {
    std::string label;
    std::vector<double> eigenvalues;
    std::vector<uint64_t> all;
    std::vector<uint64_t> accepted;

    bool operator==(const StageTally &) const = default;
};

struct JointCount {
    uint64_t all = 0;
    uint64_t accepted = 0;

    bool operator==(const JointCount &) const = default;
};

struct Frequency {
    double eigenvalue;
    uint64_t count;
    double frequency;
    /// sqrt(p(1-p)/n)
    double se;
};

struct StageFrequencies {
    std::string label;
    uint64_t n = 0;
    std::vector<Frequency> entries;

    double frequency_of(double eigenvalue, double tol = 1e-9) const;
};

/// Integer tallies from one simulate() call. `stages` holds measure stages only,
/// in timeline order; `joint` is keyed by the outcome branch index of each.
struct EnsembleStats {
    uint64_t trials = 0;
    uint64_t accepted = 0;
    std::vector<StageTally> stages;
    std::vector<double> post_eigenvalues;
    std::vector<uint64_t> post_counts;
    std::map<std::vector<uint32_t>, JointCount> joint;

    double acceptance_fraction() const {
        return trials == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(trials);
    }
    /// Frequencies of one measure stage among post-selected trials.
    StageFrequencies conditional(size_t stage) const;
    /// Frequencies of one measure stage over all trials.
    StageFrequencies unconditional(size_t stage) const;
    /// Post-selected frequencies of `stage` restricted to trials where
    /// `given_stage` produced branch `given_branch`.
    StageFrequencies conditional_given(size_t stage, size_t given_stage, size_t given_branch) const;

    bool operator==(const EnsembleStats &) const = default;
};

EnsembleStats simulate(const StateVector &pre, std::span<const Stage> stages, const PostSelection &post,
                       const SimulationOptions &options);

/// sqrt(p(1-p)/n), 0 when n == 0.
double standard_error(double p, uint64_t n);

struct ComparisonRow {
    double eigenvalue;
    double predicted;
    double frequency;
    double se;
    double z_score;
    bool pass;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    uint64_t n;
    bool passes;
};

/// Per outcome: pass iff |frequency − predicted| ≤ z·SE. When the observed SE
/// is zero the SE implied by the prediction is used instead; if that is zero
/// too the outcome must match exactly (within 1e-12).
ComparisonReport compare_to_abl(const StageFrequencies &observed, const OutcomeDistribution &predicted, double z,
                                uint64_t min_accepted = kDefaultMinAccepted);
ComparisonReport compare_to_abl(const EnsembleStats &stats, size_t stage, const OutcomeDistribution &predicted,
                                double z, uint64_t min_accepted = kDefaultMinAccepted);

/// Pre = post = |↑z⟩ with an optional intermediate σξ(θ) measurement.
struct InterpretationBReport {
    double theta;
    /// cos²(θ/2): the pre-selection-only prediction.
    double born_prediction;
    uint64_t unmeasured_trials;
    uint64_t unmeasured_accepted;
    /// ABL rule evaluated directly on the two-state vector.
    double abl_prediction;
    double frequency;
    double se;
    uint64_t accepted;
    /// |frequency − abl_prediction| / se
    double z_vs_abl;
    /// |frequency − born_prediction| / se
    double z_vs_born;
    bool agrees_with_abl;
};

InterpretationBReport interpretation_b_experiment(double theta, uint64_t trials, uint64_t seed, double z = 4.0);

struct SymmetryRow {
    double eigenvalue;
    double frequency_b_first;
    double se_b_first;
    double frequency_b_second;
    double se_b_second;
    double z_score;
    bool pass;
};

struct SymmetryReport {
    std::vector<SymmetryRow> rows;
    uint64_t accepted_b_first;
    uint64_t accepted_b_second;
    bool passes;
};

/// Pre- and post-selects on psi and measures B before A in one ensemble and
/// after A in the other; the post-selected distribution of B must agree.
SymmetryReport symmetry_experiment(const StateVector &psi, const SpectralObservable &a, const SpectralObservable &b,
                                   uint64_t trials, uint64_t seed, double z = 4.0);

}  // namespace tsvf

#endif
