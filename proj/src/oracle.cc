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

#include "tsvf/oracle.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "tsvf/errors.h"
#include "tsvf/rng.h"

namespace tsvf {

namespace {

struct CompiledStep {
    bool is_unitary;
    Matrix unitary;
    std::vector<Matrix> projectors;
    size_t measure_index;
};

struct ChunkTally {
    uint64_t accepted = 0;
    std::vector<std::vector<uint64_t>> stage_all;
    std::vector<std::vector<uint64_t>> stage_accepted;
    std::vector<uint64_t> post_counts;
    std::map<std::vector<uint32_t>, JointCount> joint;
};

// Samples one branch of `projectors` on psi with Born weights and collapses psi onto it.
size_t measure_and_collapse(const std::vector<Matrix> &projectors, Vector &psi, RandomStream &rng,
                            std::vector<double> &weights, std::vector<Vector> &branches) {
    weights.resize(projectors.size());
    branches.resize(projectors.size());
    for (size_t j = 0; j < projectors.size(); ++j) {
        branches[j].noalias() = projectors[j] * psi;
        double w = branches[j].squaredNorm();
        weights[j] = w < kZeroBranchWeight ? 0.0 : w;
    }
    size_t k = sample_index(weights, rng.uniform());
    psi = branches[k] / std::sqrt(weights[k]);
    return k;
}

ChunkTally run_chunk(const Vector &pre, const std::vector<CompiledStep> &steps, const std::vector<Matrix> &post,
                     size_t post_index, size_t n_measure, uint64_t seed, uint64_t chunk, uint64_t count) {
    ChunkTally tally;
    tally.stage_all.resize(n_measure);
    tally.stage_accepted.resize(n_measure);
    for (const auto &s : steps) {
        if (!s.is_unitary) {
            tally.stage_all[s.measure_index].assign(s.projectors.size(), 0);
            tally.stage_accepted[s.measure_index].assign(s.projectors.size(), 0);
        }
    }
    tally.post_counts.assign(post.size(), 0);

    RandomStream rng(seed, chunk);
    std::vector<double> weights;
    std::vector<Vector> branches;
    std::vector<uint32_t> outcomes(n_measure);
    Vector psi;
    for (uint64_t t = 0; t < count; ++t) {
        psi = pre;
        for (const auto &s : steps) {
            if (s.is_unitary) {
                psi = s.unitary * psi;
            } else {
                outcomes[s.measure_index] =
                    static_cast<uint32_t>(measure_and_collapse(s.projectors, psi, rng, weights, branches));
            }
        }
        size_t f = measure_and_collapse(post, psi, rng, weights, branches);
        tally.post_counts[f]++;
        bool accepted = f == post_index;
        auto &jc = tally.joint[outcomes];
        jc.all++;
        for (size_t m = 0; m < n_measure; ++m) {
            tally.stage_all[m][outcomes[m]]++;
        }
        if (accepted) {
            tally.accepted++;
            jc.accepted++;
            for (size_t m = 0; m < n_measure; ++m) {
                tally.stage_accepted[m][outcomes[m]]++;
            }
        }
    }
    return tally;
}

std::vector<Matrix> projector_matrices(const SpectralObservable &obs) {
    std::vector<Matrix> out;
    for (const auto &b : obs.branches()) {
        out.push_back(b.projector.matrix());
    }
    return out;
}

StageFrequencies frequencies(const std::string &label, const std::vector<double> &eigenvalues,
                             const std::vector<uint64_t> &counts) {
    StageFrequencies out;
    out.label = label;
    for (auto c : counts) {
        out.n += c;
    }
    for (size_t j = 0; j < counts.size(); ++j) {
        double p = out.n == 0 ? 0.0 : static_cast<double>(counts[j]) / static_cast<double>(out.n);
        out.entries.push_back({eigenvalues[j], counts[j], p, standard_error(p, out.n)});
    }
    return out;
}

}  // namespace

double standard_error(double p, uint64_t n) {
    if (n == 0) {
        return 0.0;
    }
    return std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(n));
}

double StageFrequencies::frequency_of(double eigenvalue, double tol) const {
    for (const auto &e : entries) {
        if (std::abs(e.eigenvalue - eigenvalue) <= tol) {
            return e.frequency;
        }
    }
    return 0.0;
}

StageFrequencies EnsembleStats::conditional(size_t stage) const {
    const auto &s = stages.at(stage);
    return frequencies(s.label, s.eigenvalues, s.accepted);
}

StageFrequencies EnsembleStats::unconditional(size_t stage) const {
    const auto &s = stages.at(stage);
    return frequencies(s.label, s.eigenvalues, s.all);
}

StageFrequencies EnsembleStats::conditional_given(size_t stage, size_t given_stage, size_t given_branch) const {
    const auto &s = stages.at(stage);
    stages.at(given_stage);
    std::vector<uint64_t> counts(s.eigenvalues.size(), 0);
    for (const auto &[key, jc] : joint) {
        if (key[given_stage] == given_branch) {
            counts[key[stage]] += jc.accepted;
        }
    }
    return frequencies(s.label, s.eigenvalues, counts);
}

EnsembleStats simulate(const StateVector &pre, std::span<const Stage> stages, const PostSelection &post,
                       const SimulationOptions &options) {
    if (options.trials < 1) {
        throw InputError("simulate: trials must be at least 1");
    }
    const size_t dim = pre.dim();
    if (post.observable.dim() != dim) {
        throw DimensionMismatch("simulate post-selection", dim, post.observable.dim());
    }
    auto post_index = post.observable.find(post.eigenvalue);
    if (!post_index) {
        throw InputError("simulate: post-selected eigenvalue " + std::to_string(post.eigenvalue) +
                         " is not an eigenvalue of the final observable");
    }

    EnsembleStats stats;
    std::vector<CompiledStep> steps;
    for (const auto &stage : stages) {
        if (const auto *u = std::get_if<UnitaryStage>(&stage)) {
            if (u->unitary.dim() != dim) {
                throw DimensionMismatch("simulate unitary stage", dim, u->unitary.dim());
            }
            steps.push_back({true, u->unitary.matrix(), {}, 0});
        } else {
            const auto &m = std::get<MeasureStage>(stage);
            if (m.observable.dim() != dim) {
                throw DimensionMismatch("simulate measure stage '" + m.label + "'", dim, m.observable.dim());
            }
            steps.push_back({false, {}, projector_matrices(m.observable), stats.stages.size()});
            stats.stages.push_back({m.label, m.observable.eigenvalues(), {}, {}});
        }
    }
    const size_t n_measure = stats.stages.size();
    const auto post_projectors = projector_matrices(post.observable);

    const uint64_t n_chunks = (options.trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<ChunkTally> partial(n_chunks);
    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (uint64_t k = next++; k < n_chunks; k = next++) {
            uint64_t count = std::min(kChunkTrials, options.trials - k * kChunkTrials);
            partial[k] = run_chunk(pre.amplitudes(), steps, post_projectors, *post_index, n_measure, options.seed, k,
                                   count);
        }
    };
    unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, n_chunks));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    stats.trials = options.trials;
    stats.post_eigenvalues = post.observable.eigenvalues();
    stats.post_counts.assign(post.observable.size(), 0);
    for (size_t m = 0; m < n_measure; ++m) {
        stats.stages[m].all.assign(stats.stages[m].eigenvalues.size(), 0);
        stats.stages[m].accepted.assign(stats.stages[m].eigenvalues.size(), 0);
    }
    for (const auto &c : partial) {
        stats.accepted += c.accepted;
        for (size_t f = 0; f < c.post_counts.size(); ++f) {
            stats.post_counts[f] += c.post_counts[f];
        }
        for (size_t m = 0; m < n_measure; ++m) {
            for (size_t j = 0; j < c.stage_all[m].size(); ++j) {
                stats.stages[m].all[j] += c.stage_all[m][j];
                stats.stages[m].accepted[j] += c.stage_accepted[m][j];
            }
        }
        for (const auto &[key, jc] : c.joint) {
            auto &dst = stats.joint[key];
            dst.all += jc.all;
            dst.accepted += jc.accepted;
        }
    }
    if (stats.accepted == 0) {
        throw AllRejected("simulate: no trial out of " + std::to_string(stats.trials) +
                          " matched the post-selected outcome");
    }
    return stats;
}

ComparisonReport compare_to_abl(const StageFrequencies &observed, const OutcomeDistribution &predicted, double z,
                                uint64_t min_accepted) {
    if (!(z > 0)) {
        throw InputError("compare_to_abl: z must be positive");
    }
    if (observed.n < min_accepted) {
        throw InsufficientAcceptedTrials("compare_to_abl: " + std::to_string(observed.n) +
                                         " accepted trials, need at least " + std::to_string(min_accepted));
    }
    ComparisonReport report{{}, observed.n, true};
    for (const auto &pred : predicted.entries) {
        double freq = observed.frequency_of(pred.eigenvalue);
        double diff = std::abs(freq - pred.probability);
        double se = standard_error(freq, observed.n);
        if (se == 0) {
            se = standard_error(pred.probability, observed.n);
        }
        ComparisonRow row{pred.eigenvalue, pred.probability, freq, se, 0.0, false};
        if (se == 0) {
            row.pass = diff <= 1e-12;
            row.z_score = row.pass ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            row.z_score = diff / se;
            row.pass = diff <= z * se;
        }
        report.passes = report.passes && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

ComparisonReport compare_to_abl(const EnsembleStats &stats, size_t stage, const OutcomeDistribution &predicted,
                                double z, uint64_t min_accepted) {
    return compare_to_abl(stats.conditional(stage), predicted, z, min_accepted);
}

InterpretationBReport interpretation_b_experiment(double theta, uint64_t trials, uint64_t seed, double z) {
    const StateVector up_z = StateVector::basis(2, 0);
    const PostSelection post{pauli_observable('z'), +1.0};
    const auto xi = spin_observable(theta, 0.0);

    InterpretationBReport r{};
    r.theta = theta;
    r.born_prediction = std::pow(std::cos(theta / 2), 2);

    auto unmeasured = simulate(up_z, {}, post, {trials, seed, 0});
    r.unmeasured_trials = unmeasured.trials;
    r.unmeasured_accepted = unmeasured.accepted;

    r.abl_prediction = abl_probabilities(TwoStateVector(up_z, up_z), xi).probability_of(+1.0);
    const std::vector<Stage> stages{MeasureStage{xi, "xi"}};
    // Distinct stream from the unmeasured ensemble.
    auto measured = simulate(up_z, stages, post, {trials, seed + 1, 0});
    auto freq = measured.conditional(0);
    r.accepted = freq.n;
    r.frequency = freq.frequency_of(+1.0);
    r.se = freq.entries[0].se;
    auto score = [&](double target) {
        double diff = std::abs(r.frequency - target);
        if (r.se == 0) {
            return diff <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return diff / r.se;
    };
    r.z_vs_abl = score(r.abl_prediction);
    r.z_vs_born = score(r.born_prediction);
    r.agrees_with_abl = r.z_vs_abl <= z;
    return r;
}

PostSelection post_select_on(const StateVector &psi) {
    Matrix p = psi.amplitudes() * psi.amplitudes().adjoint();
    auto n = static_cast<Eigen::Index>(psi.dim());
    std::vector<SpectralBranch> branches{{1.0, LinearOperator(p)}};
    if (psi.dim() > 1) {
        branches.push_back({0.0, LinearOperator(Matrix::Identity(n, n) - p)});
    }
    return {SpectralObservable(std::move(branches)), 1.0};
}

SymmetryReport symmetry_experiment(const StateVector &psi, const SpectralObservable &a, const SpectralObservable &b,
                                   uint64_t trials, uint64_t seed, double z) {
    const PostSelection post = post_select_on(psi);

    const std::vector<Stage> b_first{MeasureStage{b, "B"}, MeasureStage{a, "A"}};
    const std::vector<Stage> b_second{MeasureStage{a, "A"}, MeasureStage{b, "B"}};
    auto first = simulate(psi, b_first, post, {trials, seed, 0}).conditional(0);
    auto second = simulate(psi, b_second, post, {trials, seed + 1, 0}).conditional(1);

    SymmetryReport report{{}, first.n, second.n, true};
    for (size_t j = 0; j < first.entries.size(); ++j) {
        const auto &f1 = first.entries[j];
        const auto &f2 = second.entries[j];
        double diff = std::abs(f1.frequency - f2.frequency);
        double se = std::hypot(f1.se, f2.se);
        SymmetryRow row{f1.eigenvalue, f1.frequency, f1.se, f2.frequency, f2.se, 0.0, false};
        if (se == 0) {
            row.pass = diff <= 1e-12;
            row.z_score = row.pass ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            row.z_score = diff / se;
            row.pass = diff <= z * se;
        }
        report.passes = report.passes && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace tsvf
