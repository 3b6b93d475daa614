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

#include "cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "tsvf/errors.h"
#include "tsvf/oracle.h"
#include "tsvf/reproduction.h"
#include "tsvf/pointer.h"
#include "tsvf/scenario.h"
#include "tsvf/two_state.h"

namespace tsvf::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string signed_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.12g", v);
    return buf;
}

double parse_number(const std::string &text, const std::string &what) {
    try {
        size_t used = 0;
        double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw InputError("cannot parse " + what + " '" + text + "' as a number");
}

// "spin:THETA[:PHI]" -> (theta, phi)
std::optional<std::pair<double, double>> parse_spin(const std::string &text) {
    if (text.rfind("spin:", 0) != 0) {
        return std::nullopt;
    }
    std::string rest = text.substr(5);
    auto colon = rest.find(':');
    double theta = parse_number(rest.substr(0, colon), "angle");
    double phi = colon == std::string::npos ? 0.0 : parse_number(rest.substr(colon + 1), "angle");
    return std::make_pair(theta, phi);
}

struct Globals {
    uint64_t trials = 100000;
    std::optional<uint64_t> seed;
    double z = 4.0;
    std::string format = "table";
    std::string out_path;
    unsigned workers = 0;
};

std::string distribution_output(const std::string &rule, const OutcomeDistribution &d, const std::string &format) {
    if (format == "json") {
        json rows = json::array();
        for (const auto &e : d.entries) {
            rows.push_back({{"eigenvalue", e.eigenvalue}, {"probability", e.probability}});
        }
        return json{{"rule", rule}, {"distribution", rows}}.dump(2) + "\n";
    }
    std::ostringstream out;
    if (format == "csv") {
        out << "eigenvalue,probability\n";
        for (const auto &e : d.entries) {
            out << num(e.eigenvalue) << ',' << num(e.probability) << '\n';
        }
        return out.str();
    }
    for (const auto &e : d.entries) {
        out << signed_num(e.eigenvalue) << ": " << num(e.probability) << '\n';
    }
    return out.str();
}

std::string weak_output(Complex w, const std::string &format) {
    if (format == "json") {
        return json{{"re", w.real()}, {"im", w.imag()}}.dump(2) + "\n";
    }
    if (format == "csv") {
        return "re,im\n" + num(w.real()) + ',' + num(w.imag()) + '\n';
    }
    return "weak value: " + num(w.real()) + (w.imag() < 0 ? " - " : " + ") + num(std::abs(w.imag())) + "i\n";
}

struct SimulationRow {
    std::string label;
    ComparisonRow row;
};

std::string simulation_output(const EnsembleStats &stats, const std::vector<SimulationRow> &rows,
                              double acceptance, const std::string &format) {
    if (format == "json") {
        json doc;
        doc["trials"] = stats.trials;
        doc["accepted"] = stats.accepted;
        doc["acceptance_predicted"] = acceptance;
        doc["rows"] = json::array();
        for (const auto &r : rows) {
            doc["rows"].push_back({{"stage", r.label},
                                   {"eigenvalue", r.row.eigenvalue},
                                   {"predicted", r.row.predicted},
                                   {"frequency", r.row.frequency},
                                   {"se", r.row.se},
                                   {"z", r.row.z_score},
                                   {"pass", r.row.pass}});
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    if (format == "csv") {
        out << "stage,eigenvalue,predicted,frequency,se,z,pass\n";
        for (const auto &r : rows) {
            out << r.label << ',' << num(r.row.eigenvalue) << ',' << num(r.row.predicted) << ','
                << num(r.row.frequency) << ',' << num(r.row.se) << ',' << num(r.row.z_score) << ','
                << (r.row.pass ? "true" : "false") << '\n';
        }
        return out.str();
    }
    out << "trials " << stats.trials << ", accepted " << stats.accepted << " (predicted acceptance "
        << num(acceptance) << ")\n";
    for (const auto &r : rows) {
        out << r.label << ' ' << signed_num(r.row.eigenvalue) << ": predicted " << num(r.row.predicted)
            << ", observed " << num(r.row.frequency) << " +- " << num(r.row.se) << ", z " << num(r.row.z_score)
            << (r.row.pass ? "  PASS" : "  FAIL") << '\n';
    }
    return out.str();
}

std::string sweep_output(const std::vector<WeakSweepRow> &rows, const std::string &format) {
    if (format == "json") {
        json doc = json::array();
        for (const auto &r : rows) {
            doc.push_back({{"strength", r.strength},
                           {"shift_over_strength", r.shift_over_strength},
                           {"momentum_shift", r.momentum_shift},
                           {"weak_re", r.weak_value.real()},
                           {"weak_im", r.weak_value.imag()},
                           {"error", r.error}});
        }
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    const char *sep = format == "csv" ? "," : "  ";
    out << "strength" << sep << "shift_over_strength" << sep << "momentum_shift" << sep << "weak_re" << sep
        << "weak_im" << sep << "error\n";
    for (const auto &r : rows) {
        out << num(r.strength) << sep << num(r.shift_over_strength) << sep << num(r.momentum_shift) << sep
            << num(r.weak_value.real()) << sep << num(r.weak_value.imag()) << sep << num(r.error) << '\n';
    }
    return out.str();
}

std::string catalog_listing() {
    std::ostringstream out;
    out << "available builtins:\n";
    for (const auto &b : builtin_catalog()) {
        out << "  " << b.name << "  " << b.description << '\n';
        for (const auto &p : b.params) {
            out << "      " << p.name << " = " << num(p.default_value) << "  [" << num(p.min) << ", " << num(p.max)
                << "]  " << p.description << '\n';
        }
    }
    return out.str();
}

bool known_builtin(const std::string &name) {
    for (const auto &b : builtin_catalog()) {
        if (b.name == name) {
            return true;
        }
    }
    return false;
}

}  // namespace

StateVector parse_state(const std::string &text) {
    const double h = std::numbers::sqrt2 / 2;
    static const std::map<std::string, std::vector<Complex>> named{
        {"up-z", {1.0, 0.0}},  {"down-z", {0.0, 1.0}},
        {"up-x", {h, h}},      {"down-x", {h, -h}},
        {"up-y", {h, Complex(0, h)}}, {"down-y", {h, Complex(0, -h)}},
    };
    auto it = named.find(text);
    if (it != named.end()) {
        return StateVector(Eigen::Map<const Vector>(it->second.data(), 2));
    }
    if (auto spin = parse_spin(text)) {
        return spin_state(spin->first, spin->second);
    }
    throw InputError("unknown state '" + text + "' (expected up-z, down-z, up-x, down-x, up-y, down-y or spin:THETA[:PHI])");
}

SpectralObservable parse_observable(const std::string &text) {
    if (text == "pauli-x" || text == "pauli-y" || text == "pauli-z") {
        return pauli_observable(text.back());
    }
    if (auto spin = parse_spin(text)) {
        return spin_observable(spin->first, spin->second);
    }
    throw InputError("unknown observable '" + text + "' (expected pauli-x, pauli-y, pauli-z or spin:THETA[:PHI])");
}

LinearOperator parse_operator(const std::string &text) {
    std::optional<LinearOperator> product;
    size_t start = 0;
    while (true) {
        auto star = text.find('*', start);
        auto factor = parse_observable(text.substr(start, star - start)).as_operator();
        product = product ? *product * factor : factor;
        if (star == std::string::npos) {
            break;
        }
        start = star + 1;
    }
    return *product;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"two-state vector formalism toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--trials", g.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--z", g.z, "z threshold for statistical comparisons")->check(CLI::PositiveNumber);
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--out", g.out_path, "write output to this file");
    app.add_option("--workers", g.workers, "worker threads (0 = hardware concurrency)");

    std::string pre_text, post_text, obs_text;
    std::vector<std::string> obs_list;

    auto *abl = app.add_subcommand("abl", "ABL probabilities for a pre/post-selected qubit");
    abl->fallthrough();
    abl->add_option("--pre", pre_text, "pre-selected state")->required();
    abl->add_option("--post", post_text, "post-selected state")->required();
    abl->add_option("--obs", obs_text, "intermediate observable")->required();

    auto *born = app.add_subcommand("born", "Born probabilities for a pre-selected qubit");
    born->fallthrough();
    born->add_option("--pre", pre_text, "pre-selected state")->required();
    born->add_option("--obs", obs_text, "observable")->required();

    auto *weak = app.add_subcommand("weak", "weak value <post|A|pre>/<post|pre>");
    weak->fallthrough();
    weak->add_option("--pre", pre_text, "pre-selected state")->required();
    weak->add_option("--post", post_text, "post-selected state")->required();
    weak->add_option("--op", obs_text, "operator, products joined by '*'")->required();

    auto *sim = app.add_subcommand("simulate", "Monte-Carlo oracle for sequential measurements with post-selection");
    sim->fallthrough();
    sim->add_option("--pre", pre_text, "pre-selected state")->required();
    sim->add_option("--post", post_text, "post-selected state")->required();
    sim->add_option("--obs", obs_list, "intermediate observables in time order")->required();

    std::string builtin_name, file_path, mode_text = "both";
    std::vector<std::string> param_overrides;
    std::map<std::string, double> shorthand;
    std::optional<double> theta, phi, theta_ab, theta_bc;
    bool list = false, emit_spec = false;
    double weak_scale = 1.0;
    uint64_t min_accepted = kDefaultMinAccepted;
    auto *scen = app.add_subcommand("scenario", "run a builtin or JSON scenario");
    scen->fallthrough();
    auto *builtin_opt = scen->add_option("--builtin", builtin_name, "builtin scenario name");
    auto *file_opt = scen->add_option("--file", file_path, "scenario JSON file");
    builtin_opt->excludes(file_opt);
    scen->add_option("--mode", mode_text, "analytic, oracle or both")
        ->check(CLI::IsMember({"analytic", "oracle", "both"}));
    scen->add_option("--theta", theta, "builtin parameter theta");
    scen->add_option("--phi", phi, "builtin parameter phi");
    scen->add_option("--theta-ab", theta_ab, "builtin parameter theta_ab");
    scen->add_option("--theta-bc", theta_bc, "builtin parameter theta_bc");
    scen->add_option("--param", param_overrides, "builtin parameter override NAME=VALUE");
    scen->add_option("--weak-tolerance-scale", weak_scale, "scale of the weak-stage tolerance")
        ->check(CLI::PositiveNumber);
    scen->add_option("--min-accepted", min_accepted, "accepted-trial floor for oracle comparisons");
    scen->add_flag("--list", list, "list builtin scenarios");
    scen->add_flag("--emit-spec", emit_spec, "print the scenario JSON instead of running it");

    auto *checks = app.add_subcommand("paper-checks", "full reproduction report");
    checks->fallthrough();

    std::vector<double> strengths{0.1, 0.05, 0.025};
    double sigma = PointerDefaults::sigma, span = PointerDefaults::span;
    size_t points = PointerDefaults::points;
    obs_text = "";
    auto *sweep = app.add_subcommand("pointer-sweep", "weak-regime pointer shift against coupling strength");
    sweep->fallthrough();
    sweep->add_option("--pre", pre_text, "pre-selected state")->required();
    sweep->add_option("--post", post_text, "post-selected state")->required();
    sweep->add_option("--obs", obs_text, "coupled observable (default pauli-z)");
    sweep->add_option("--strength", strengths, "coupling strengths");
    sweep->add_option("--sigma", sigma, "pointer width")->check(CLI::PositiveNumber);
    sweep->add_option("--points", points, "pointer grid points");
    sweep->add_option("--span", span, "pointer grid span")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return kOk;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kInputError;
    }

    auto emit = [&](const std::string &text) {
        if (g.out_path.empty()) {
            out << text;
            return;
        }
        std::ofstream file(g.out_path, std::ios::binary);
        if (!file) {
            throw InputError("cannot open '" + g.out_path + "' for writing");
        }
        file << text;
    };

    try {
        if (abl->parsed()) {
            TwoStateVector tsv(parse_state(pre_text), parse_state(post_text));
            emit(distribution_output("abl", abl_probabilities(tsv, parse_observable(obs_text)), g.format));
            return kOk;
        }
        if (born->parsed()) {
            emit(distribution_output("born", born_probabilities(parse_state(pre_text), parse_observable(obs_text)),
                                     g.format));
            return kOk;
        }
        if (weak->parsed()) {
            TwoStateVector tsv(parse_state(pre_text), parse_state(post_text));
            emit(weak_output(weak_value(tsv, parse_operator(obs_text)), g.format));
            return kOk;
        }
        if (sim->parsed()) {
            auto pre = parse_state(pre_text);
            auto post = post_select_on(parse_state(post_text));
            std::vector<Stage> stages;
            for (const auto &o : obs_list) {
                stages.push_back(MeasureStage{parse_observable(o), o});
            }
            auto paths = enumerate_paths(pre, stages, post);
            auto stats = simulate(pre, stages, post, {g.trials, g.seed.value_or(1), g.workers});
            std::vector<SimulationRow> rows;
            bool pass = true;
            for (size_t i = 0; i < stages.size(); ++i) {
                auto cmp = compare_to_abl(stats, i, paths.conditional[i], g.z);
                pass = pass && cmp.passes;
                for (const auto &r : cmp.rows) {
                    rows.push_back({obs_list[i], r});
                }
            }
            emit(simulation_output(stats, rows, paths.acceptance, g.format));
            return pass ? kOk : kFailedChecks;
        }
        if (scen->parsed()) {
            if (list) {
                emit(catalog_listing());
                return kOk;
            }
            if (builtin_name.empty() == file_path.empty()) {
                throw InputError("scenario needs exactly one of --builtin or --file");
            }
            std::map<std::string, double> params;
            if (theta) params["theta"] = *theta;
            if (phi) params["phi"] = *phi;
            if (theta_ab) params["theta_ab"] = *theta_ab;
            if (theta_bc) params["theta_bc"] = *theta_bc;
            for (const auto &kv : param_overrides) {
                auto eq = kv.find('=');
                if (eq == std::string::npos || eq == 0) {
                    throw InputError("--param expects NAME=VALUE, got '" + kv + "'");
                }
                params[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1), "parameter");
            }
            ScenarioSpec spec;
            if (!builtin_name.empty()) {
                if (!known_builtin(builtin_name)) {
                    err << "error: unknown builtin '" << builtin_name << "'\n" << catalog_listing();
                    return kInputError;
                }
                spec = builtin(builtin_name, params);
            } else {
                if (!params.empty()) {
                    throw InputError("parameter overrides apply to builtin scenarios only");
                }
                spec = load_scenario_file(file_path);
            }
            if (app.count("--trials") > 0) {
                spec.trials = g.trials;
            }
            if (g.seed) {
                spec.seed = *g.seed;
            }
            if (emit_spec) {
                emit(to_json(spec).dump(2) + "\n");
                return kOk;
            }
            RunOptions options{g.z, min_accepted, g.workers, weak_scale};
            auto report = run_scenario(spec, parse_run_mode(mode_text), options);
            if (g.format == "json") {
                emit(report_to_json(report).dump(2) + "\n");
            } else if (g.format == "csv") {
                emit(report_to_csv(report));
            } else {
                emit(report_to_table(report));
            }
            return report.passes() ? kOk : kFailedChecks;
        }
        if (checks->parsed()) {
            ReproductionConfig cfg{g.trials, g.seed.value_or(7), g.z, g.workers};
            auto report = run_reproduction_checks(cfg);
            emit(format_report(report, g.format));
            return report.passes() ? kOk : kFailedChecks;
        }
        if (sweep->parsed()) {
            auto pointer = make_gaussian_pointer(0.0, sigma, points, span);
            auto obs = parse_observable(obs_text.empty() ? "pauli-z" : obs_text);
            emit(sweep_output(weak_sweep(parse_state(pre_text), parse_state(post_text), obs, strengths, pointer),
                              g.format));
            return kOk;
        }
    } catch (const InputError &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const UndefinedQuantity &e) {
        err << "error: " << e.what() << '\n';
        return kUndefined;
    } catch (const RejectionError &e) {
        err << "error: " << e.what() << '\n';
        return kRejected;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace tsvf::cli
