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

#ifndef TSVF_REPRODUCTION_H
#define TSVF_REPRODUCTION_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tsvf {

// The reproduction suite: every quantitative claim of the formalism, checked
// against closed forms, exhaustive enumeration or the Monte-Carlo oracle.

enum class Verdict { pass, warn, fail };

std::string to_string(Verdict v);

struct CheckRow {
    std::string claim;
    std::string computed;
    std::string expected;
    Verdict verdict;
};

struct CheckSection {
    std::string id;
    std::string title;
    std::vector<CheckRow> rows;

    /// fail if any row fails, warn if any row warns, else pass.
    Verdict verdict() const;
};

/// Trial count the statistical thresholds were designed for. Below it,
/// statistical rows that miss their threshold report warn instead of fail.
inline constexpr uint64_t kNominalTrials = 100000;

struct ReproductionConfig {
    uint64_t trials = kNominalTrials;
    uint64_t seed = 7;
    double z = 4.0;
    unsigned workers = 0;
};

CheckSection check_sharp_shanks_identity(const ReproductionConfig &cfg);
CheckSection check_total_probability(const ReproductionConfig &cfg);
CheckSection check_interpretation_b(const ReproductionConfig &cfg);
CheckSection check_swap_symmetry(const ReproductionConfig &cfg);
CheckSection check_probability_one_weak_value(const ReproductionConfig &cfg);
CheckSection check_product_rule(const ReproductionConfig &cfg);
CheckSection check_oracle_agreement(const ReproductionConfig &cfg);
CheckSection check_erasure(const ReproductionConfig &cfg);
CheckSection check_pointer_model(const ReproductionConfig &cfg);

struct NamedCheck {
    std::string id;
    std::function<CheckSection(const ReproductionConfig &)> run;
};

/// All checks in report order.
const std::vector<NamedCheck> &reproduction_checks();

struct ReproductionReport {
    ReproductionConfig config;
    std::vector<CheckSection> sections;

    bool passes() const;
};

ReproductionReport run_reproduction_checks(const ReproductionConfig &cfg);

/// format ∈ {"table", "json", "csv"}.
std::string format_report(const ReproductionReport &report, const std::string &format);

}  // namespace tsvf

#endif
