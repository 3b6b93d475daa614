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

#ifndef TSVF_SCENARIO_H
#define TSVF_SCENARIO_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tsvf/linalg.h"
#include "tsvf/oracle.h"
#include "tsvf/two_state.h"

namespace tsvf {

// ---------------------------------------------------------------------------
// Observable specifications
// ---------------------------------------------------------------------------

struct PauliSpec {
    char axis;
};

struct SpinSpec {
    double theta;
    double phi;
};

struct ExplicitBranchSpec {
    double eigenvalue;
    Matrix projector;
};

struct ExplicitSpec {
    std::vector<ExplicitBranchSpec> branches;
};

struct WhichPathSpec {
    size_t dim;
};

struct BellBasisSpec {};

struct DetectorBasisSpec {
    Matrix unitary;
};

struct ObservableSpec;

/// Observable acting on one factor of a composite system.
struct EmbedSpec {
    std::vector<ObservableSpec> inner;  // exactly one element
    size_t position;
    std::vector<size_t> dims;
};

struct ObservableSpec {
    std::variant<PauliSpec, SpinSpec, ExplicitSpec, WhichPathSpec, BellBasisSpec, DetectorBasisSpec, EmbedSpec> form;

    SpectralObservable resolve() const;
};

bool operator==(const ObservableSpec &a, const ObservableSpec &b);

// ---------------------------------------------------------------------------
// Scenario specification
// ---------------------------------------------------------------------------

struct UnitaryItem {
    Matrix matrix;
};

struct MeasureItem {
    ObservableSpec observable;
    std::string label;
};

/// Weak (pointer-coupled) measurement. Only allowed in timelines without
/// strong measure stages, so the two-state vector at its time is unique.
struct WeakMeasureItem {
    ObservableSpec observable;
    double strength;
    std::string label;
};

using TimelineItem = std::variant<UnitaryItem, MeasureItem, WeakMeasureItem>;

struct PostSpec {
    ObservableSpec observable;
    double select;
};

struct CounterfactualSpec {
    std::string label;
    ObservableSpec observable;
};

/// Pre-selection, timeline and post-selection of one experiment.
///
/// `counterfactuals` lists alternative observables evaluated at the time of the
/// timeline's measure stage (or at the end of the timeline if it has none);
/// they feed the elements-of-reality and product-rule reports.
struct ScenarioSpec {
    std::string name;
    size_t dim = 0;
    std::vector<Complex> pre;
    std::vector<TimelineItem> timeline;
    PostSpec post;
    std::vector<CounterfactualSpec> counterfactuals;
    std::map<std::string, double> params;
    uint64_t trials = 100000;
    uint64_t seed = 1;
};

bool operator==(const ScenarioSpec &a, const ScenarioSpec &b);

/// Validates and expands a scenario document. Throws SchemaError naming the
/// offending field path.
ScenarioSpec load_scenario(const nlohmann::json &doc);
ScenarioSpec load_scenario_file(const std::string &path);
nlohmann::json to_json(const ScenarioSpec &spec);

/// Spec with every matrix and observable resolved.
struct ResolvedScenario {
    StateVector pre;
    /// Unitary and strong measure stages, in timeline order.
    std::vector<Stage> stages;
    /// Timeline index of each entry of `stages`.
    std::vector<size_t> stage_timeline_index;
    PostSelection post;
    std::vector<LabeledObservable> counterfactuals;
};

ResolvedScenario resolve(const ScenarioSpec &spec);

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

struct BuiltinParam {
    std::string name;
    double default_value;
    double min;
    double max;
    std::string description;
};

struct BuiltinInfo {
    std::string name;
    std::string description;
    std::vector<BuiltinParam> params;
};

const std::vector<BuiltinInfo> &builtin_catalog();

/// Parameterized catalog scenario; unspecified params take their defaults.
/// Throws InputError for an unknown name, unknown parameter, or out-of-range value.
ScenarioSpec builtin(const std::string &name, const std::map<std::string, double> &params = {});

// ---------------------------------------------------------------------------
// Running scenarios
// ---------------------------------------------------------------------------

/// Exact conditional statistics from enumerating every intermediate-outcome path.
struct PathEnumeration {
    /// Probability that the post-selection succeeds with every intermediate measurement performed.
    double acceptance = 0;
    /// Per measure stage: outcome distribution among post-selected runs.
    std::vector<OutcomeDistribution> conditional;
    /// Per measure stage: outcome distribution over all runs.
    std::vector<OutcomeDistribution> unconditional;
    size_t paths = 0;
};

inline constexpr size_t kMaxEnumeratedPaths = 1000000;

/// Throws ZeroDenominator when measure stages exist but no path reaches the
/// post-selection, InputError when the path count exceeds kMaxEnumeratedPaths.
PathEnumeration enumerate_paths(const StateVector &pre, std::span<const Stage> stages, const PostSelection &post);

enum class RunMode { analytic, oracle, both };

RunMode parse_run_mode(const std::string &s);
std::string to_string(RunMode mode);

struct RunOptions {
    double z = 4.0;
    uint64_t min_accepted = kDefaultMinAccepted;
    unsigned workers = 0;
    /// Pointer-model tolerance on |shift/λ − Re A_w| is this times (λ/σ)²·(1+|A_w|)³.
    double weak_tolerance_scale = 1.0;
};

struct StageReport {
    std::string label;
    size_t timeline_index;
    std::optional<OutcomeDistribution> analytic;
    std::optional<StageFrequencies> oracle;
    std::optional<ComparisonReport> comparison;
};

struct AcceptanceReport {
    std::optional<double> analytic;
    uint64_t trials = 0;
    uint64_t accepted = 0;
    std::optional<double> frequency;
    std::optional<double> se;
    std::optional<double> z_score;
    std::optional<bool> pass;
};

struct WeakStageReport {
    std::string label;
    size_t timeline_index;
    double strength;
    Complex weak_value;
    double shift_over_strength;
    double momentum_shift;
    double tolerance;
    bool pass;
};

struct ScenarioReport {
    std::string name;
    RunMode mode;
    AcceptanceReport acceptance;
    std::vector<StageReport> stages;
    std::vector<WeakStageReport> weak;
    std::optional<TotalProbabilityReport> total_probability;
    std::optional<RealityReport> reality;
    std::optional<ProductRuleAudit> product_rule;
    std::vector<std::string> notes;

    bool passes() const;
};

/// Analytic mode transports the states to each measure stage and evaluates
/// the ABL rule (one stage, rank-one post-selection) or exhaustive path
/// enumeration; oracle mode runs simulate(); both attaches compare_to_abl verdicts.
/// Errors are rethrown with the scenario name prefixed.
ScenarioReport run_scenario(const ScenarioSpec &spec, RunMode mode, const RunOptions &options = {});

nlohmann::json report_to_json(const ScenarioReport &report);
/// Header plus one row per stage outcome:
/// scenario,stage,eigenvalue,analytic,frequency,se,z,pass
std::string report_to_csv(const ScenarioReport &report);
std::string report_to_table(const ScenarioReport &report);

}  // namespace tsvf

#endif
