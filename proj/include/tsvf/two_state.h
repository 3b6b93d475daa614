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

#ifndef TSVF_TWO_STATE_H
#define TSVF_TWO_STATE_H

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsvf/linalg.h"

namespace tsvf {

/// Pre-selected state |Ψ₁⟩ and post-selected state ⟨Ψ₂| at the intermediate
/// time. Both must already be transported to that time.
class TwoStateVector {
   public:
    TwoStateVector(StateVector pre, StateVector post);

    const StateVector &pre() const {
        return pre_;
    }
    const StateVector &post() const {
        return post_;
    }
    /// ⟨post|pre⟩
    Complex overlap() const {
        return overlap_;
    }
    /// ⟨Ψ₁||Ψ₂⟩
    TwoStateVector swapped() const {
        return TwoStateVector(post_, pre_);
    }

   private:
    StateVector pre_;
    StateVector post_;
    Complex overlap_;
};

struct Outcome {
    double eigenvalue;
    double probability;
};

/// Outcome probabilities in branch order of the observable that produced them.
struct OutcomeDistribution {
    std::vector<Outcome> entries;

    /// Probability of the branch whose eigenvalue matches within tol; 0 if absent.
    double probability_of(double eigenvalue, double tol = 1e-9) const;
    double total() const;
};

/// ⟨ψ|Pᵢ|ψ⟩ for each branch.
OutcomeDistribution born_probabilities(const StateVector &psi, const SpectralObservable &a);

/// |⟨Ψ₂|Pᵢ|Ψ₁⟩|² / Σⱼ|⟨Ψ₂|Pⱼ|Ψ₁⟩|². Throws ZeroDenominator when the
/// denominator is at most 1e-14.
OutcomeDistribution abl_probabilities(const TwoStateVector &tsv, const SpectralObservable &a);

/// ⟨Ψ₂|A|Ψ₁⟩ / ⟨Ψ₂|Ψ₁⟩. Throws ZeroOverlap when |⟨Ψ₂|Ψ₁⟩| ≤ 1e-14.
Complex weak_value(const TwoStateVector &tsv, const LinearOperator &a);

struct LabeledObservable {
    std::string label;
    SpectralObservable observable;
};

struct RealityEntry {
    std::string label;
    double eigenvalue;
    double probability;
    bool is_element_of_reality;
};

struct RealityReport {
    std::vector<RealityEntry> entries;
    /// Observables whose ABL denominator vanished: (label, message).
    std::vector<std::pair<std::string, std::string>> errors;

    std::vector<RealityEntry> elements() const;
};

inline constexpr double kRealityTolerance = 1e-10;

/// Evaluates the ABL rule for each observable and flags eigenvalues that an
/// intermediate ideal measurement would find with probability ≥ 1 − tol.
/// Zero-denominator observables are recorded in `errors` rather than thrown.
RealityReport elements_of_reality(const TwoStateVector &tsv, std::span<const LabeledObservable> observables,
                                  double tol = kRealityTolerance);

struct ProductRuleAudit {
    Complex a_weak;
    Complex b_weak;
    Complex ab_weak;
    /// (AB)_w − A_w·B_w
    Complex discrepancy;
    bool fails;
};

ProductRuleAudit product_rule_audit(const TwoStateVector &tsv, const LinearOperator &a, const LinearOperator &b);

struct FinalBranchReport {
    double eigenvalue;
    /// Probability of this final outcome given that the intermediate measurement was performed.
    double probability;
    /// Conditional distribution of the intermediate observable; empty when probability is zero.
    OutcomeDistribution conditional;
    bool skipped;
};

struct TotalProbabilityReport {
    std::vector<FinalBranchReport> finals;
    OutcomeDistribution recombined;
    OutcomeDistribution born;
    double max_deviation;
    bool passes;
};

inline constexpr double kTotalProbabilityTolerance = 1e-10;

/// Recombines ABL conditionals over every outcome of a final measurement F,
/// Σ_f Prob(f)·Prob(aᵢ|f), using Prob(f) computed with the intermediate
/// measurement of A performed, and compares against the Born rule for A on pre.
///
/// Rank-one final branches condition on the branch eigenvector through the ABL
/// rule directly; degenerate branches use numerators ⟨pre|Pᵢ F_f Pᵢ|pre⟩.
TotalProbabilityReport total_probability_check(const StateVector &pre, const SpectralObservable &a,
                                               const SpectralObservable &f,
                                               double tol = kTotalProbabilityTolerance);

}  // namespace tsvf

#endif
