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

#include "tsvf/two_state.h"

#include <algorithm>
#include <cmath>

#include "tsvf/errors.h"

namespace tsvf {

namespace {

constexpr double kUndefinedThreshold = 1e-14;
constexpr double kProductRuleTolerance = 1e-10;

// Floating-point noise can leave tiny negatives or values just above 1.
double clip_probability(double p) {
    return std::clamp(p, 0.0, 1.0);
}

void require_dim(const char *where, size_t a, size_t b) {
    if (a != b) {
        throw DimensionMismatch(where, a, b);
    }
}

size_t projector_rank(const LinearOperator &p) {
    return static_cast<size_t>(std::lround(p.matrix().trace().real()));
}

// Unit vector spanning a rank-one projector: its largest column, normalized.
StateVector rank_one_vector(const LinearOperator &p) {
    Eigen::Index best = 0;
    p.matrix().colwise().squaredNorm().maxCoeff(&best);
    return StateVector::normalize(p.matrix().col(best));
}

}  // namespace

TwoStateVector::TwoStateVector(StateVector pre, StateVector post)
    : pre_(std::move(pre)), post_(std::move(post)), overlap_(0) {
    require_dim("two-state vector", pre_.dim(), post_.dim());
    overlap_ = inner_product(post_, pre_);
}

double OutcomeDistribution::probability_of(double eigenvalue, double tol) const {
    for (const auto &e : entries) {
        if (std::abs(e.eigenvalue - eigenvalue) <= tol) {
            return e.probability;
        }
    }
    return 0.0;
}

double OutcomeDistribution::total() const {
    double s = 0;
    for (const auto &e : entries) {
        s += e.probability;
    }
    return s;
}

OutcomeDistribution born_probabilities(const StateVector &psi, const SpectralObservable &a) {
    require_dim("born_probabilities", psi.dim(), a.dim());
    OutcomeDistribution out;
    for (const auto &b : a.branches()) {
        double p = inner_product(psi.amplitudes(), apply(b.projector, psi)).real();
        out.entries.push_back({b.eigenvalue, clip_probability(p)});
    }
    return out;
}

OutcomeDistribution abl_probabilities(const TwoStateVector &tsv, const SpectralObservable &a) {
    require_dim("abl_probabilities", tsv.pre().dim(), a.dim());
    std::vector<double> numerators;
    numerators.reserve(a.size());
    double denominator = 0;
    for (const auto &b : a.branches()) {
        double n = std::norm(inner_product(tsv.post().amplitudes(), apply(b.projector, tsv.pre())));
        numerators.push_back(n);
        denominator += n;
    }
    if (denominator <= kUndefinedThreshold) {
        throw ZeroDenominator("ABL denominator vanishes: post-selection is unreachable through every branch");
    }
    OutcomeDistribution out;
    for (size_t j = 0; j < a.size(); ++j) {
        out.entries.push_back({a.branch(j).eigenvalue, clip_probability(numerators[j] / denominator)});
    }
    return out;
}

Complex weak_value(const TwoStateVector &tsv, const LinearOperator &a) {
    require_dim("weak_value", tsv.pre().dim(), a.dim());
    if (std::abs(tsv.overlap()) <= kUndefinedThreshold) {
        throw ZeroOverlap("weak value undefined: pre- and post-selected states are orthogonal");
    }
    return inner_product(tsv.post().amplitudes(), apply(a, tsv.pre())) / tsv.overlap();
}

std::vector<RealityEntry> RealityReport::elements() const {
    std::vector<RealityEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [](const RealityEntry &e) { return e.is_element_of_reality; });
    return out;
}

RealityReport elements_of_reality(const TwoStateVector &tsv, std::span<const LabeledObservable> observables,
                                  double tol) {
    if (!(tol > 0 && tol < 0.5)) {
        throw InputError("elements_of_reality: tolerance must lie in (0, 0.5)");
    }
    RealityReport report;
    for (const auto &lo : observables) {
        try {
            auto dist = abl_probabilities(tsv, lo.observable);
            for (const auto &e : dist.entries) {
                report.entries.push_back({lo.label, e.eigenvalue, e.probability, e.probability >= 1.0 - tol});
            }
        } catch (const ZeroDenominator &err) {
            report.errors.emplace_back(lo.label, err.what());
        }
    }
    return report;
}

ProductRuleAudit product_rule_audit(const TwoStateVector &tsv, const LinearOperator &a, const LinearOperator &b) {
    ProductRuleAudit audit{};
    audit.a_weak = weak_value(tsv, a);
    audit.b_weak = weak_value(tsv, b);
    audit.ab_weak = weak_value(tsv, a * b);
    audit.discrepancy = audit.ab_weak - audit.a_weak * audit.b_weak;
    audit.fails = std::abs(audit.discrepancy) > kProductRuleTolerance;
    return audit;
}

TotalProbabilityReport total_probability_check(const StateVector &pre, const SpectralObservable &a,
                                               const SpectralObservable &f, double tol) {
    require_dim("total_probability_check", pre.dim(), a.dim());
    require_dim("total_probability_check", pre.dim(), f.dim());

    // Collapsed (unnormalized) intermediate branches Pᵢ|pre⟩.
    std::vector<Vector> collapsed;
    for (const auto &bi : a.branches()) {
        collapsed.push_back(apply(bi.projector, pre));
    }

    TotalProbabilityReport report{};
    std::vector<double> recombined(a.size(), 0.0);
    for (const auto &bf : f.branches()) {
        FinalBranchReport fr{bf.eigenvalue, 0.0, {}, false};
        // Prob(f) with the intermediate measurement performed: Σᵢ ⟨pre|Pᵢ F_f Pᵢ|pre⟩.
        std::vector<double> joint;
        for (const auto &c : collapsed) {
            double w = inner_product(c, apply(bf.projector, c)).real();
            joint.push_back(std::max(w, 0.0));
            fr.probability += joint.back();
        }
        if (fr.probability <= kUndefinedThreshold) {
            fr.skipped = true;
            report.finals.push_back(std::move(fr));
            continue;
        }
        if (projector_rank(bf.projector) == 1) {
            fr.conditional = abl_probabilities(TwoStateVector(pre, rank_one_vector(bf.projector)), a);
        } else {
            for (size_t i = 0; i < a.size(); ++i) {
                fr.conditional.entries.push_back({a.branch(i).eigenvalue, clip_probability(joint[i] / fr.probability)});
            }
        }
        for (size_t i = 0; i < a.size(); ++i) {
            recombined[i] += fr.probability * fr.conditional.entries[i].probability;
        }
        report.finals.push_back(std::move(fr));
    }

    report.born = born_probabilities(pre, a);
    report.max_deviation = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        report.recombined.entries.push_back({a.branch(i).eigenvalue, recombined[i]});
        report.max_deviation =
            std::max(report.max_deviation, std::abs(recombined[i] - report.born.entries[i].probability));
    }
    report.passes = report.max_deviation <= tol;
    return report;
}

}  // namespace tsvf
