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

#include "tsvf/scenario.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "tsvf/errors.h"
#include "tsvf/pointer.h"

namespace tsvf {

using nlohmann::json;

namespace {

bool same_matrix(const Matrix &a, const Matrix &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

const json &field(const json &j, const char *key, const std::string &path) {
    if (!j.is_object()) {
        throw SchemaError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw SchemaError(path, std::string("missing field '") + key + "'");
    }
    return *it;
}

double number(const json &j, const std::string &path) {
    if (!j.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw SchemaError(path, "number is not finite");
    }
    return v;
}

uint64_t count(const json &j, const std::string &path) {
    if (!j.is_number_integer() || j.get<int64_t>() < 0) {
        throw SchemaError(path, "expected a non-negative integer");
    }
    return j.get<uint64_t>();
}

std::string string_field(const json &j, const std::string &path) {
    if (!j.is_string()) {
        throw SchemaError(path, "expected a string");
    }
    return j.get<std::string>();
}

Complex complex_value(const json &j, const std::string &path) {
    if (j.is_number()) {
        return {number(j, path), 0.0};
    }
    if (j.is_array() && j.size() == 2) {
        return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
    }
    throw SchemaError(path, "expected a number or a [re, im] pair");
}

json complex_json(Complex c) {
    return json::array({c.real(), c.imag()});
}

Matrix matrix_value(const json &j, const std::string &path) {
    if (!j.is_array() || j.empty()) {
        throw SchemaError(path, "expected a non-empty array of rows");
    }
    auto n = static_cast<Eigen::Index>(j.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        std::string row_path = path + "[" + std::to_string(r) + "]";
        const auto &row = j[static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw SchemaError(row_path, "expected a row of length " + std::to_string(n));
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = complex_value(row[static_cast<size_t>(c)], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

json matrix_json(const Matrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ObservableSpec observable_value(const json &j, const std::string &path) {
    if (!j.is_object() || j.size() != 1) {
        throw SchemaError(path, "observable must be an object with exactly one of "
                                "pauli, spin, explicit, which_path, bell_basis, detector_basis, embed");
    }
    const auto &[key, body] = *j.items().begin();
    std::string p = path + "." + key;
    if (key == "pauli") {
        auto axis = string_field(body, p);
        if (axis != "x" && axis != "y" && axis != "z") {
            throw SchemaError(p, "axis must be \"x\", \"y\" or \"z\"");
        }
        return {PauliSpec{axis[0]}};
    }
    if (key == "spin") {
        double phi = body.contains("phi") ? number(body["phi"], p + ".phi") : 0.0;
        return {SpinSpec{number(field(body, "theta", p), p + ".theta"), phi}};
    }
    if (key == "explicit") {
        if (!body.is_array() || body.empty()) {
            throw SchemaError(p, "expected a non-empty array of branches");
        }
        ExplicitSpec spec;
        for (size_t k = 0; k < body.size(); ++k) {
            std::string bp = p + "[" + std::to_string(k) + "]";
            spec.branches.push_back({number(field(body[k], "eigenvalue", bp), bp + ".eigenvalue"),
                                     matrix_value(field(body[k], "projector", bp), bp + ".projector")});
        }
        return {spec};
    }
    if (key == "which_path") {
        auto dim = count(field(body, "dim", p), p + ".dim");
        if (dim < 1) {
            throw SchemaError(p + ".dim", "must be positive");
        }
        return {WhichPathSpec{dim}};
    }
    if (key == "bell_basis") {
        return {BellBasisSpec{}};
    }
    if (key == "detector_basis") {
        return {DetectorBasisSpec{matrix_value(field(body, "unitary", p), p + ".unitary")}};
    }
    if (key == "embed") {
        EmbedSpec spec;
        spec.inner.push_back(observable_value(field(body, "observable", p), p + ".observable"));
        spec.position = count(field(body, "position", p), p + ".position");
        const auto &dims = field(body, "dims", p);
        if (!dims.is_array() || dims.empty()) {
            throw SchemaError(p + ".dims", "expected a non-empty array of factor dimensions");
        }
        for (size_t k = 0; k < dims.size(); ++k) {
            spec.dims.push_back(count(dims[k], p + ".dims[" + std::to_string(k) + "]"));
        }
        return {spec};
    }
    throw SchemaError(path, "unknown observable kind '" + key + "'");
}

json observable_json(const ObservableSpec &spec) {
    return std::visit(
        [](const auto &f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PauliSpec>) {
                return {{"pauli", std::string(1, f.axis)}};
            } else if constexpr (std::is_same_v<T, SpinSpec>) {
                return {{"spin", {{"theta", f.theta}, {"phi", f.phi}}}};
            } else if constexpr (std::is_same_v<T, ExplicitSpec>) {
                json branches = json::array();
                for (const auto &b : f.branches) {
                    branches.push_back({{"eigenvalue", b.eigenvalue}, {"projector", matrix_json(b.projector)}});
                }
                return {{"explicit", branches}};
            } else if constexpr (std::is_same_v<T, WhichPathSpec>) {
                return {{"which_path", {{"dim", f.dim}}}};
            } else if constexpr (std::is_same_v<T, BellBasisSpec>) {
                return {{"bell_basis", json::object()}};
            } else if constexpr (std::is_same_v<T, DetectorBasisSpec>) {
                return {{"detector_basis", {{"unitary", matrix_json(f.unitary)}}}};
            } else {
                return {{"embed", {{"observable", observable_json(f.inner.at(0))},
                                   {"position", f.position},
                                   {"dims", f.dims}}}};
            }
        },
        spec.form);
}

SpectralObservable resolve_at(const ObservableSpec &spec, const std::string &path) {
    try {
        return spec.resolve();
    } catch (const InputError &e) {
        throw SchemaError(path, std::string("invalid observable: ") + e.what());
    }
}

// Rethrows the active library error with the scenario name prefixed, keeping its type.
[[noreturn]] void rethrow_with_context(const std::string &name) {
    const std::string prefix = "scenario '" + name + "': ";
    try {
        throw;
    } catch (const SchemaError &e) {
        throw SchemaError(e.path, prefix + e.what());
    } catch (const ZeroDenominator &e) {
        throw ZeroDenominator(prefix + e.what());
    } catch (const ZeroOverlap &e) {
        throw ZeroOverlap(prefix + e.what());
    } catch (const AllRejected &e) {
        throw AllRejected(prefix + e.what());
    } catch (const InsufficientAcceptedTrials &e) {
        throw InsufficientAcceptedTrials(prefix + e.what());
    } catch (const InputError &e) {
        throw InputError(prefix + e.what());
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// ObservableSpec / ScenarioSpec
// ---------------------------------------------------------------------------

SpectralObservable ObservableSpec::resolve() const {
    return std::visit(
        [](const auto &f) -> SpectralObservable {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PauliSpec>) {
                return pauli_observable(f.axis);
            } else if constexpr (std::is_same_v<T, SpinSpec>) {
                return spin_observable(f.theta, f.phi);
            } else if constexpr (std::is_same_v<T, ExplicitSpec>) {
                std::vector<SpectralBranch> branches;
                for (const auto &b : f.branches) {
                    branches.push_back({b.eigenvalue, LinearOperator(b.projector)});
                }
                return SpectralObservable(std::move(branches));
            } else if constexpr (std::is_same_v<T, WhichPathSpec>) {
                return which_path(f.dim);
            } else if constexpr (std::is_same_v<T, BellBasisSpec>) {
                return bell_basis();
            } else if constexpr (std::is_same_v<T, DetectorBasisSpec>) {
                return detector_basis(Unitary(f.unitary));
            } else {
                return embed(f.inner.at(0).resolve(), f.position, f.dims);
            }
        },
        form);
}

bool operator==(const ObservableSpec &a, const ObservableSpec &b) {
    if (a.form.index() != b.form.index()) {
        return false;
    }
    return std::visit(
        [&](const auto &fa) -> bool {
            using T = std::decay_t<decltype(fa)>;
            const auto &fb = std::get<T>(b.form);
            if constexpr (std::is_same_v<T, PauliSpec>) {
                return fa.axis == fb.axis;
            } else if constexpr (std::is_same_v<T, SpinSpec>) {
                return fa.theta == fb.theta && fa.phi == fb.phi;
            } else if constexpr (std::is_same_v<T, ExplicitSpec>) {
                if (fa.branches.size() != fb.branches.size()) {
                    return false;
                }
                for (size_t k = 0; k < fa.branches.size(); ++k) {
                    if (fa.branches[k].eigenvalue != fb.branches[k].eigenvalue ||
                        !same_matrix(fa.branches[k].projector, fb.branches[k].projector)) {
                        return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, WhichPathSpec>) {
                return fa.dim == fb.dim;
            } else if constexpr (std::is_same_v<T, BellBasisSpec>) {
                return true;
            } else if constexpr (std::is_same_v<T, DetectorBasisSpec>) {
                return same_matrix(fa.unitary, fb.unitary);
            } else {
                return fa.position == fb.position && fa.dims == fb.dims && fa.inner == fb.inner;
            }
        },
        a.form);
}

bool operator==(const ScenarioSpec &a, const ScenarioSpec &b) {
    if (a.name != b.name || a.dim != b.dim || a.pre != b.pre || a.params != b.params || a.trials != b.trials ||
        a.seed != b.seed || !(a.post.observable == b.post.observable) || a.post.select != b.post.select ||
        a.timeline.size() != b.timeline.size() || a.counterfactuals.size() != b.counterfactuals.size()) {
        return false;
    }
    for (size_t k = 0; k < a.counterfactuals.size(); ++k) {
        if (a.counterfactuals[k].label != b.counterfactuals[k].label ||
            !(a.counterfactuals[k].observable == b.counterfactuals[k].observable)) {
            return false;
        }
    }
    for (size_t k = 0; k < a.timeline.size(); ++k) {
        if (a.timeline[k].index() != b.timeline[k].index()) {
            return false;
        }
        bool same = std::visit(
            [&](const auto &ia) -> bool {
                using T = std::decay_t<decltype(ia)>;
                const auto &ib = std::get<T>(b.timeline[k]);
                if constexpr (std::is_same_v<T, UnitaryItem>) {
                    return same_matrix(ia.matrix, ib.matrix);
                } else if constexpr (std::is_same_v<T, MeasureItem>) {
                    return ia.label == ib.label && ia.observable == ib.observable;
                } else {
                    return ia.label == ib.label && ia.strength == ib.strength && ia.observable == ib.observable;
                }
            },
            a.timeline[k]);
        if (!same) {
            return false;
        }
    }
    return true;
}

ScenarioSpec load_scenario(const json &doc) {
    ScenarioSpec spec;
    const std::string root = "$";
    if (!doc.is_object()) {
        throw SchemaError(root, "scenario document must be a JSON object");
    }
    spec.name = doc.contains("name") ? string_field(doc["name"], "$.name") : "unnamed";
    spec.dim = count(field(doc, "dim", root), "$.dim");
    if (spec.dim < 1) {
        throw SchemaError("$.dim", "must be positive");
    }

    const auto &pre = field(doc, "pre", root);
    if (!pre.is_array() || pre.size() != spec.dim) {
        throw SchemaError("$.pre", "expected " + std::to_string(spec.dim) + " amplitudes");
    }
    for (size_t k = 0; k < pre.size(); ++k) {
        spec.pre.push_back(complex_value(pre[k], "$.pre[" + std::to_string(k) + "]"));
    }

    auto check_dim = [&](size_t d, const std::string &path) {
        if (d != spec.dim) {
            throw SchemaError(path, "dimension " + std::to_string(d) + " does not match scenario dim " +
                                        std::to_string(spec.dim));
        }
    };

    if (doc.contains("timeline")) {
        const auto &tl = doc["timeline"];
        if (!tl.is_array()) {
            throw SchemaError("$.timeline", "expected an array");
        }
        for (size_t k = 0; k < tl.size(); ++k) {
            std::string p = "$.timeline[" + std::to_string(k) + "]";
            const auto &item = tl[k];
            if (!item.is_object() || item.size() != 1) {
                throw SchemaError(p, "timeline entry must have exactly one of unitary, measure, weak_measure");
            }
            if (item.contains("unitary")) {
                Matrix u = matrix_value(item["unitary"], p + ".unitary");
                check_dim(static_cast<size_t>(u.rows()), p + ".unitary");
                try {
                    Unitary checked(u);
                } catch (const InputError &e) {
                    throw SchemaError(p + ".unitary", e.what());
                }
                spec.timeline.push_back(UnitaryItem{std::move(u)});
            } else if (item.contains("measure")) {
                std::string mp = p + ".measure";
                const auto &m = item["measure"];
                auto obs = observable_value(field(m, "observable", mp), mp + ".observable");
                check_dim(resolve_at(obs, mp + ".observable").dim(), mp + ".observable");
                std::string label = m.contains("label") ? string_field(m["label"], mp + ".label")
                                                        : "stage" + std::to_string(k);
                spec.timeline.push_back(MeasureItem{std::move(obs), std::move(label)});
            } else if (item.contains("weak_measure")) {
                std::string wp = p + ".weak_measure";
                const auto &w = item["weak_measure"];
                auto obs = observable_value(field(w, "observable", wp), wp + ".observable");
                check_dim(resolve_at(obs, wp + ".observable").dim(), wp + ".observable");
                double strength = number(field(w, "strength", wp), wp + ".strength");
                if (!(strength > 0)) {
                    throw SchemaError(wp + ".strength", "must be positive");
                }
                std::string label = w.contains("label") ? string_field(w["label"], wp + ".label")
                                                        : "weak" + std::to_string(k);
                spec.timeline.push_back(WeakMeasureItem{std::move(obs), strength, std::move(label)});
            } else {
                throw SchemaError(p, "unknown timeline entry '" + item.items().begin().key() + "'");
            }
        }
    }

    const auto &post = field(doc, "post", root);
    spec.post.observable = observable_value(field(post, "observable", "$.post"), "$.post.observable");
    auto post_obs = resolve_at(spec.post.observable, "$.post.observable");
    check_dim(post_obs.dim(), "$.post.observable");
    spec.post.select = number(field(post, "select", "$.post"), "$.post.select");
    if (!post_obs.find(spec.post.select)) {
        throw SchemaError("$.post.select", "value " + format_number(spec.post.select) +
                                               " is not an eigenvalue of the post-selection observable");
    }

    if (doc.contains("counterfactuals")) {
        const auto &cf = doc["counterfactuals"];
        if (!cf.is_array()) {
            throw SchemaError("$.counterfactuals", "expected an array");
        }
        for (size_t k = 0; k < cf.size(); ++k) {
            std::string p = "$.counterfactuals[" + std::to_string(k) + "]";
            auto obs = observable_value(field(cf[k], "observable", p), p + ".observable");
            check_dim(resolve_at(obs, p + ".observable").dim(), p + ".observable");
            std::string label = cf[k].contains("label") ? string_field(cf[k]["label"], p + ".label")
                                                        : "counterfactual" + std::to_string(k);
            spec.counterfactuals.push_back({std::move(label), std::move(obs)});
        }
    }

    if (doc.contains("params")) {
        const auto &params = doc["params"];
        if (!params.is_object()) {
            throw SchemaError("$.params", "expected an object of named numbers");
        }
        for (const auto &[k, v] : params.items()) {
            spec.params[k] = number(v, "$.params." + k);
        }
    }
    if (doc.contains("trials")) {
        spec.trials = count(doc["trials"], "$.trials");
        if (spec.trials < 1) {
            throw SchemaError("$.trials", "must be at least 1");
        }
    }
    if (doc.contains("seed")) {
        spec.seed = count(doc["seed"], "$.seed");
    }

    try {
        StateVector(Eigen::Map<const Vector>(spec.pre.data(), static_cast<Eigen::Index>(spec.pre.size())));
    } catch (const InputError &e) {
        throw SchemaError("$.pre", e.what());
    }
    return spec;
}

ScenarioSpec load_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open scenario file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    return load_scenario(doc);
}

json to_json(const ScenarioSpec &spec) {
    json doc;
    doc["name"] = spec.name;
    doc["dim"] = spec.dim;
    json pre = json::array();
    for (auto c : spec.pre) {
        pre.push_back(complex_json(c));
    }
    doc["pre"] = pre;
    json tl = json::array();
    for (const auto &item : spec.timeline) {
        std::visit(
            [&](const auto &it) {
                using T = std::decay_t<decltype(it)>;
                if constexpr (std::is_same_v<T, UnitaryItem>) {
                    tl.push_back({{"unitary", matrix_json(it.matrix)}});
                } else if constexpr (std::is_same_v<T, MeasureItem>) {
                    tl.push_back({{"measure", {{"observable", observable_json(it.observable)}, {"label", it.label}}}});
                } else {
                    tl.push_back({{"weak_measure",
                                   {{"observable", observable_json(it.observable)},
                                    {"strength", it.strength},
                                    {"label", it.label}}}});
                }
            },
            item);
    }
    doc["timeline"] = tl;
    doc["post"] = {{"observable", observable_json(spec.post.observable)}, {"select", spec.post.select}};
    if (!spec.counterfactuals.empty()) {
        json cf = json::array();
        for (const auto &c : spec.counterfactuals) {
            cf.push_back({{"label", c.label}, {"observable", observable_json(c.observable)}});
        }
        doc["counterfactuals"] = cf;
    }
    doc["params"] = json::object();
    for (const auto &[k, v] : spec.params) {
        doc["params"][k] = v;
    }
    doc["trials"] = spec.trials;
    doc["seed"] = spec.seed;
    return doc;
}

ResolvedScenario resolve(const ScenarioSpec &spec) {
    StateVector pre(Eigen::Map<const Vector>(spec.pre.data(), static_cast<Eigen::Index>(spec.pre.size())));
    auto post_obs = spec.post.observable.resolve();
    ResolvedScenario r{std::move(pre), {}, {}, PostSelection{post_obs, spec.post.select}, {}};
    for (size_t k = 0; k < spec.timeline.size(); ++k) {
        if (const auto *u = std::get_if<UnitaryItem>(&spec.timeline[k])) {
            r.stages.push_back(UnitaryStage{Unitary(u->matrix)});
            r.stage_timeline_index.push_back(k);
        } else if (const auto *m = std::get_if<MeasureItem>(&spec.timeline[k])) {
            r.stages.push_back(MeasureStage{m->observable.resolve(), m->label});
            r.stage_timeline_index.push_back(k);
        }
    }
    for (const auto &c : spec.counterfactuals) {
        r.counterfactuals.push_back({c.label, c.observable.resolve()});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

namespace {

constexpr double kPi = std::numbers::pi;

ObservableSpec embedded_pauli(char axis, size_t position) {
    EmbedSpec e;
    e.inner.push_back({PauliSpec{axis}});
    e.position = position;
    e.dims = {2, 2};
    return {e};
}

Matrix swap_ports() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

std::vector<Complex> amplitudes_of(const StateVector &s) {
    return {s.amplitudes().data(), s.amplitudes().data() + s.amplitudes().size()};
}

ScenarioSpec spin_zz_xi(const std::map<std::string, double> &p) {
    ScenarioSpec s;
    s.name = "spin-zz-xi";
    s.dim = 2;
    s.pre = {1.0, 0.0};
    s.timeline.push_back(MeasureItem{{SpinSpec{p.at("theta"), 0.0}}, "xi"});
    s.post = {{PauliSpec{'z'}}, +1.0};
    return s;
}

ScenarioSpec sharp_shanks(const std::map<std::string, double> &p) {
    ScenarioSpec s;
    s.name = "sharp-shanks";
    s.dim = 2;
    s.pre = {1.0, 0.0};
    double ab = p.at("theta_ab"), bc = p.at("theta_bc");
    s.timeline.push_back(MeasureItem{{SpinSpec{ab, 0.0}}, "b"});
    s.post = {{SpinSpec{ab + bc, 0.0}}, p.at("select")};
    return s;
}

ScenarioSpec mach_zehnder(const std::map<std::string, double> &p) {
    ScenarioSpec s;
    s.name = "mach-zehnder";
    s.dim = 2;
    // State inside the interferometer after the first splitter acts on |u⟩.
    s.pre = {1.0 / std::numbers::sqrt2, Complex(0, 1.0 / std::numbers::sqrt2)};
    if (p.at("which_path") != 0) {
        s.timeline.push_back(MeasureItem{{WhichPathSpec{2}}, "path"});
    }
    s.timeline.push_back(UnitaryItem{beamsplitter().matrix()});
    // D1 watches output port d, D2 port u.
    s.post = {{DetectorBasisSpec{swap_ports()}}, p.at("select")};
    return s;
}

ScenarioSpec tandem_mz(const std::map<std::string, double> &p) {
    ScenarioSpec s;
    s.name = "tandem-mz";
    s.dim = 2;
    s.pre = {1.0, 0.0};
    auto probe = static_cast<int>(p.at("probe"));
    s.timeline.push_back(UnitaryItem{beamsplitter(p.at("eta1")).matrix()});
    if (probe & 1) {
        s.timeline.push_back(MeasureItem{{WhichPathSpec{2}}, "path1"});
    }
    s.timeline.push_back(UnitaryItem{beamsplitter(p.at("eta2")).matrix()});
    s.timeline.push_back(UnitaryItem{beamsplitter(p.at("eta3")).matrix()});
    if (probe & 2) {
        s.timeline.push_back(MeasureItem{{WhichPathSpec{2}}, "path2"});
    }
    s.timeline.push_back(UnitaryItem{beamsplitter(p.at("eta4")).matrix()});
    s.post = {{DetectorBasisSpec{swap_ports()}}, p.at("select")};
    return s;
}

ScenarioSpec erasure(const std::map<std::string, double> &p) {
    ScenarioSpec s;
    s.name = "erasure";
    s.dim = 4;
    s.pre = amplitudes_of(tensor(spin_state(p.at("theta"), p.at("phi")), StateVector::basis(2, 0)));
    s.timeline.push_back(MeasureItem{{BellBasisSpec{}}, "bell"});
    s.timeline.push_back(MeasureItem{embedded_pauli('y', 0), "sigma_y"});
    s.post = {embedded_pauli('x', 0), +1.0};
    return s;
}

ScenarioSpec reality_pair(const std::map<std::string, double> &) {
    ScenarioSpec s;
    s.name = "reality-pair";
    s.dim = 2;
    s.pre = {1.0, 0.0};
    s.timeline.push_back(MeasureItem{{PauliSpec{'z'}}, "sigma_z"});
    s.post = {{PauliSpec{'x'}}, +1.0};
    s.counterfactuals = {{"sigma_z", {PauliSpec{'z'}}}, {"sigma_x", {PauliSpec{'x'}}}};
    return s;
}

using Builder = ScenarioSpec (*)(const std::map<std::string, double> &);

const std::map<std::string, Builder> &builders() {
    static const std::map<std::string, Builder> table{
        {"spin-zz-xi", spin_zz_xi}, {"sharp-shanks", sharp_shanks}, {"mach-zehnder", mach_zehnder},
        {"tandem-mz", tandem_mz},   {"erasure", erasure},           {"reality-pair", reality_pair},
    };
    return table;
}

}  // namespace

const std::vector<BuiltinInfo> &builtin_catalog() {
    static const std::vector<BuiltinInfo> catalog{
        {"spin-zz-xi",
         "pre = post = |up z>, intermediate spin measurement along an axis at angle theta from z",
         {{"theta", kPi / 3, 0, 2 * kPi, "angle between the measured axis and z"}}},
        {"sharp-shanks",
         "three consecutive spin measurements along coplanar axes a (= z), b, c",
         {{"theta_ab", kPi / 3, -2 * kPi, 2 * kPi, "angle from a to b"},
          {"theta_bc", kPi / 2, -2 * kPi, 2 * kPi, "angle from b to c"},
          {"select", 1, -1, 1, "post-selected spin along c (+1 or -1)"}}},
        {"mach-zehnder",
         "balanced interferometer, splitter (1/sqrt2)[[1,i],[i,1]]; optional which-path detector inside; "
         "D1 watches output port d (bright without the detector)",
         {{"which_path", 1, 0, 1, "1 to place the which-path detector, 0 to omit it"},
          {"select", 1, 1, 2, "post-selected detector (1 or 2)"}}},
        {"tandem-mz",
         "two cascaded interferometers on one path qubit; splitter angles eta1..eta4 (pi/4 is balanced); "
         "probe bit 1 puts a which-path detector in the first, bit 2 in the second",
         {{"eta1", kPi / 4, -2 * kPi, 2 * kPi, "first splitter of interferometer 1"},
          {"eta2", kPi / 4, -2 * kPi, 2 * kPi, "second splitter of interferometer 1"},
          {"eta3", kPi / 4, -2 * kPi, 2 * kPi, "first splitter of interferometer 2"},
          {"eta4", kPi / 4, -2 * kPi, 2 * kPi, "second splitter of interferometer 2"},
          {"probe", 1, 0, 3, "which-path detector placement bitmask"},
          {"select", 1, 1, 2, "post-selected detector (1 or 2)"}}},
        {"erasure",
         "particle (x) ancilla: Bell measurement, then sigma_y on the particle, post-selected on sigma_x = +1",
         {{"theta", 0.7, -2 * kPi, 2 * kPi, "polar angle of the initial particle spin"},
          {"phi", 1.1, -2 * kPi, 2 * kPi, "azimuth of the initial particle spin"}}},
        {"reality-pair", "pre |up z>, post |up x>; counterfactual sigma_z and sigma_x", {}},
    };
    return catalog;
}

ScenarioSpec builtin(const std::string &name, const std::map<std::string, double> &params) {
    const auto &catalog = builtin_catalog();
    auto info = std::find_if(catalog.begin(), catalog.end(), [&](const BuiltinInfo &b) { return b.name == name; });
    if (info == catalog.end()) {
        std::string names;
        for (const auto &b : catalog) {
            names += (names.empty() ? "" : ", ") + b.name;
        }
        throw InputError("unknown builtin scenario '" + name + "' (available: " + names + ")");
    }
    std::map<std::string, double> resolved;
    for (const auto &p : info->params) {
        resolved[p.name] = p.default_value;
    }
    for (const auto &[k, v] : params) {
        auto it = std::find_if(info->params.begin(), info->params.end(),
                               [&](const BuiltinParam &p) { return p.name == k; });
        if (it == info->params.end()) {
            throw InputError("builtin '" + name + "' has no parameter '" + k + "'");
        }
        if (!std::isfinite(v) || v < it->min || v > it->max) {
            throw InputError("builtin '" + name + "': parameter '" + k + "' = " + format_number(v) +
                             " outside [" + format_number(it->min) + ", " + format_number(it->max) + "]");
        }
        resolved[k] = v;
    }
    auto select = resolved.find("select");
    if (select != resolved.end()) {
        bool spin = name == "sharp-shanks";
        double v = select->second;
        if (spin ? (v != 1 && v != -1) : (v != 1 && v != 2)) {
            throw InputError("builtin '" + name + "': parameter 'select' must be " + (spin ? "+1 or -1" : "1 or 2"));
        }
    }
    for (const char *integral : {"which_path", "probe"}) {
        auto it = resolved.find(integral);
        if (it != resolved.end() && it->second != std::floor(it->second)) {
            throw InputError("builtin '" + name + "': parameter '" + integral + "' must be an integer");
        }
    }
    ScenarioSpec spec = builders().at(name)(resolved);
    spec.params = resolved;
    return spec;
}

// ---------------------------------------------------------------------------
// Analytic path enumeration
// ---------------------------------------------------------------------------

PathEnumeration enumerate_paths(const StateVector &pre, std::span<const Stage> stages, const PostSelection &post) {
    auto post_index = post.observable.find(post.eigenvalue);
    if (!post_index) {
        throw InputError("post-selected eigenvalue is not an eigenvalue of the final observable");
    }
    const Matrix &post_projector = post.observable.branch(*post_index).projector.matrix();

    std::vector<const SpectralObservable *> measures;
    size_t bound = 1;
    for (const auto &s : stages) {
        if (const auto *m = std::get_if<MeasureStage>(&s)) {
            if (m->observable.dim() != pre.dim()) {
                throw DimensionMismatch("enumerate_paths", pre.dim(), m->observable.dim());
            }
            measures.push_back(&m->observable);
            bound *= m->observable.size();
            if (bound > kMaxEnumeratedPaths) {
                throw InputError("path enumeration exceeds " + std::to_string(kMaxEnumeratedPaths) + " paths");
            }
        } else if (std::get<UnitaryStage>(s).unitary.dim() != pre.dim()) {
            throw DimensionMismatch("enumerate_paths", pre.dim(), std::get<UnitaryStage>(s).unitary.dim());
        }
    }
    if (post.observable.dim() != pre.dim()) {
        throw DimensionMismatch("enumerate_paths", pre.dim(), post.observable.dim());
    }

    PathEnumeration out;
    std::vector<std::vector<double>> joint_post(measures.size()), joint_all(measures.size());
    for (size_t m = 0; m < measures.size(); ++m) {
        joint_post[m].assign(measures[m]->size(), 0.0);
        joint_all[m].assign(measures[m]->size(), 0.0);
    }
    std::vector<size_t> path(measures.size());

    // Depth-first over stages, carrying the unnormalized path amplitude.
    auto walk = [&](auto &&self, size_t step, size_t measure_count, const Vector &amp) -> void {
        if (step == stages.size()) {
            double total = amp.squaredNorm();
            double accepted = (post_projector * amp).squaredNorm();
            out.acceptance += accepted;
            out.paths++;
            for (size_t m = 0; m < measures.size(); ++m) {
                joint_post[m][path[m]] += accepted;
                joint_all[m][path[m]] += total;
            }
            return;
        }
        if (const auto *u = std::get_if<UnitaryStage>(&stages[step])) {
            self(self, step + 1, measure_count, Vector(u->unitary.matrix() * amp));
            return;
        }
        const auto &obs = *measures[measure_count];
        for (size_t j = 0; j < obs.size(); ++j) {
            Vector branch = obs.branch(j).projector.matrix() * amp;
            if (branch.squaredNorm() == 0) {
                continue;
            }
            path[measure_count] = j;
            self(self, step + 1, measure_count + 1, branch);
        }
    };
    walk(walk, 0, 0, pre.amplitudes());

    if (!measures.empty() && out.acceptance <= 1e-14) {
        throw ZeroDenominator("post-selection is unreachable through every measurement path");
    }
    for (size_t m = 0; m < measures.size(); ++m) {
        OutcomeDistribution cond, all;
        for (size_t j = 0; j < measures[m]->size(); ++j) {
            double a = measures[m]->branch(j).eigenvalue;
            cond.entries.push_back({a, std::clamp(joint_post[m][j] / out.acceptance, 0.0, 1.0)});
            all.entries.push_back({a, std::clamp(joint_all[m][j], 0.0, 1.0)});
        }
        out.conditional.push_back(std::move(cond));
        out.unconditional.push_back(std::move(all));
    }
    return out;
}

RunMode parse_run_mode(const std::string &s) {
    if (s == "analytic") {
        return RunMode::analytic;
    }
    if (s == "oracle") {
        return RunMode::oracle;
    }
    if (s == "both") {
        return RunMode::both;
    }
    throw InputError("unknown mode '" + s + "' (expected analytic, oracle or both)");
}

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::analytic:
            return "analytic";
        case RunMode::oracle:
            return "oracle";
        case RunMode::both:
            return "both";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// run_scenario
// ---------------------------------------------------------------------------

bool ScenarioReport::passes() const {
    for (const auto &s : stages) {
        if (s.comparison && !s.comparison->passes) {
            return false;
        }
    }
    for (const auto &w : weak) {
        if (!w.pass) {
            return false;
        }
    }
    if (acceptance.pass && !*acceptance.pass) {
        return false;
    }
    if (total_probability && !total_probability->passes) {
        return false;
    }
    return true;
}

namespace {

// Product of the unitaries in stages[begin, end), applied in order.
Matrix transport(std::span<const Stage> stages, size_t begin, size_t end, size_t dim) {
    auto n = static_cast<Eigen::Index>(dim);
    Matrix u = Matrix::Identity(n, n);
    for (size_t k = begin; k < end; ++k) {
        if (const auto *us = std::get_if<UnitaryStage>(&stages[k])) {
            u = us->unitary.matrix() * u;
        }
    }
    return u;
}

// Unit vector of a rank-one post-selection branch, if it is rank one.
std::optional<StateVector> rank_one_post(const PostSelection &post) {
    const auto &p = post.observable.branch(*post.observable.find(post.eigenvalue)).projector.matrix();
    if (std::lround(p.trace().real()) != 1) {
        return std::nullopt;
    }
    Eigen::Index best = 0;
    p.colwise().squaredNorm().maxCoeff(&best);
    return StateVector::normalize(p.col(best));
}

ScenarioReport run_scenario_impl(const ScenarioSpec &spec, RunMode mode, const RunOptions &options) {
    ResolvedScenario rs = resolve(spec);
    ScenarioReport report;
    report.name = spec.name;
    report.mode = mode;

    std::vector<size_t> measure_steps;  // index into rs.stages
    for (size_t k = 0; k < rs.stages.size(); ++k) {
        if (const auto *m = std::get_if<MeasureStage>(&rs.stages[k])) {
            measure_steps.push_back(k);
            report.stages.push_back({m->label, rs.stage_timeline_index[k], {}, {}, {}});
        }
    }
    const size_t dim = rs.pre.dim();
    const auto post_state = rank_one_post(rs.post);

    // Two-state vector at the end of stages[0, split): pre forward, post backward.
    auto two_state_at = [&](size_t split) -> std::optional<TwoStateVector> {
        if (!post_state) {
            return std::nullopt;
        }
        Matrix before = transport(rs.stages, 0, split, dim);
        Matrix after = transport(rs.stages, split, rs.stages.size(), dim);
        return TwoStateVector(StateVector::normalize(before * rs.pre.amplitudes()),
                              StateVector::normalize(after.adjoint() * post_state->amplitudes()));
    };

    if (mode != RunMode::oracle) {
        auto paths = enumerate_paths(rs.pre, rs.stages, rs.post);
        report.acceptance.analytic = paths.acceptance;
        if (measure_steps.size() == 1 && post_state) {
            size_t k = measure_steps[0];
            auto tsv = two_state_at(k);
            report.stages[0].analytic =
                abl_probabilities(*tsv, std::get<MeasureStage>(rs.stages[k]).observable);
            report.notes.push_back("single measure stage: ABL rule on the transported two-state vector");
        } else {
            for (size_t m = 0; m < measure_steps.size(); ++m) {
                report.stages[m].analytic = paths.conditional[m];
            }
            if (!measure_steps.empty()) {
                report.notes.push_back("conditional probabilities from exhaustive enumeration of " +
                                       std::to_string(paths.paths) + " measurement paths");
            }
        }
        if (measure_steps.size() == 1) {
            size_t k = measure_steps[0];
            Matrix before = transport(rs.stages, 0, k, dim);
            Unitary after(transport(rs.stages, k + 1, rs.stages.size(), dim));
            report.total_probability =
                total_probability_check(StateVector::normalize(before * rs.pre.amplitudes()),
                                        std::get<MeasureStage>(rs.stages[k]).observable,
                                        rs.post.observable.conjugated_by(after));
        }
    }

    // Weak stages and counterfactuals need a unique two-state vector.
    bool has_weak = std::any_of(spec.timeline.begin(), spec.timeline.end(),
                                [](const TimelineItem &t) { return std::holds_alternative<WeakMeasureItem>(t); });
    if (has_weak) {
        if (!measure_steps.empty()) {
            throw InputError("weak_measure stages cannot be combined with strong measure stages");
        }
        if (!post_state) {
            throw InputError("weak_measure stages need a rank-one post-selection branch");
        }
        const auto pointer = make_gaussian_pointer(0.0, PointerDefaults::sigma);
        for (size_t t = 0; t < spec.timeline.size(); ++t) {
            const auto *w = std::get_if<WeakMeasureItem>(&spec.timeline[t]);
            if (!w) {
                continue;
            }
            // Number of unitary stages before this timeline position.
            size_t split = static_cast<size_t>(
                std::count_if(rs.stage_timeline_index.begin(), rs.stage_timeline_index.end(),
                              [&](size_t idx) { return idx < t; }));
            auto tsv = two_state_at(split);
            auto obs = w->observable.resolve();
            CouplingSpec c{w->strength, obs};
            WeakStageReport wr{w->label, t, w->strength, weak_value(*tsv, obs.as_operator()), 0, 0, 0, false};
            wr.shift_over_strength = post_selected_mean_shift(tsv->pre(), tsv->post(), c, pointer) / w->strength;
            wr.momentum_shift = post_selected_momentum_shift(tsv->pre(), tsv->post(), c, pointer);
            double ratio = w->strength / pointer.sigma();
            wr.tolerance = std::max(1e-9, options.weak_tolerance_scale * ratio * ratio *
                                              std::pow(1 + std::abs(wr.weak_value), 3));
            wr.pass = std::abs(wr.shift_over_strength - wr.weak_value.real()) <= wr.tolerance;
            report.weak.push_back(wr);
        }
        report.notes.push_back("weak stages are treated as non-disturbing in oracle mode");
    }

    if (!rs.counterfactuals.empty()) {
        if (measure_steps.size() > 1) {
            throw InputError("counterfactuals need at most one strong measure stage");
        }
        if (!post_state) {
            throw InputError("counterfactuals need a rank-one post-selection branch");
        }
        size_t split = measure_steps.empty() ? rs.stages.size() : measure_steps[0];
        auto tsv = two_state_at(split);
        report.reality = elements_of_reality(*tsv, rs.counterfactuals);
        if (rs.counterfactuals.size() >= 2) {
            report.product_rule = product_rule_audit(*tsv, rs.counterfactuals[0].observable.as_operator(),
                                                     rs.counterfactuals[1].observable.as_operator());
        }
    }

    if (mode != RunMode::analytic) {
        auto stats = simulate(rs.pre, rs.stages, rs.post, {spec.trials, spec.seed, options.workers});
        report.acceptance.trials = stats.trials;
        report.acceptance.accepted = stats.accepted;
        report.acceptance.frequency = stats.acceptance_fraction();
        for (size_t m = 0; m < measure_steps.size(); ++m) {
            report.stages[m].oracle = stats.conditional(m);
            if (mode == RunMode::both) {
                report.stages[m].comparison =
                    compare_to_abl(stats, m, *report.stages[m].analytic, options.z, options.min_accepted);
            }
        }
        if (mode == RunMode::both) {
            double p = *report.acceptance.analytic;
            double f = *report.acceptance.frequency;
            double se = standard_error(p, stats.trials);
            report.acceptance.se = se;
            double diff = std::abs(f - p);
            if (se == 0) {
                report.acceptance.pass = diff <= 1e-12;
                report.acceptance.z_score = *report.acceptance.pass ? 0.0 : std::numeric_limits<double>::infinity();
            } else {
                report.acceptance.z_score = diff / se;
                report.acceptance.pass = diff <= options.z * se;
            }
        } else {
            report.acceptance.se = standard_error(*report.acceptance.frequency, stats.trials);
        }
    }
    return report;
}

}  // namespace

ScenarioReport run_scenario(const ScenarioSpec &spec, RunMode mode, const RunOptions &options) {
    try {
        return run_scenario_impl(spec, mode, options);
    } catch (const Error &) {
        rethrow_with_context(spec.name);
    }
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

namespace {

json distribution_json(const OutcomeDistribution &d) {
    json out = json::array();
    for (const auto &e : d.entries) {
        out.push_back({{"eigenvalue", e.eigenvalue}, {"probability", e.probability}});
    }
    return out;
}

json finite_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

json report_to_json(const ScenarioReport &r) {
    json doc;
    doc["scenario"] = r.name;
    doc["mode"] = to_string(r.mode);
    doc["pass"] = r.passes();
    json acc;
    if (r.acceptance.analytic) acc["analytic"] = *r.acceptance.analytic;
    if (r.acceptance.frequency) {
        acc["trials"] = r.acceptance.trials;
        acc["accepted"] = r.acceptance.accepted;
        acc["frequency"] = *r.acceptance.frequency;
        acc["se"] = *r.acceptance.se;
    }
    if (r.acceptance.z_score) acc["z"] = finite_or_null(*r.acceptance.z_score);
    if (r.acceptance.pass) acc["pass"] = *r.acceptance.pass;
    doc["acceptance"] = acc;

    json stages = json::array();
    for (const auto &s : r.stages) {
        json st{{"label", s.label}, {"timeline_index", s.timeline_index}};
        if (s.analytic) st["analytic"] = distribution_json(*s.analytic);
        if (s.oracle) {
            json fr = json::array();
            for (const auto &e : s.oracle->entries) {
                fr.push_back({{"eigenvalue", e.eigenvalue}, {"count", e.count}, {"frequency", e.frequency}, {"se", e.se}});
            }
            st["oracle"] = {{"accepted", s.oracle->n}, {"frequencies", fr}};
        }
        if (s.comparison) {
            json rows = json::array();
            for (const auto &row : s.comparison->rows) {
                rows.push_back({{"eigenvalue", row.eigenvalue}, {"z", finite_or_null(row.z_score)}, {"pass", row.pass}});
            }
            st["comparison"] = {{"pass", s.comparison->passes}, {"rows", rows}};
        }
        stages.push_back(std::move(st));
    }
    doc["stages"] = stages;

    if (!r.weak.empty()) {
        json weak = json::array();
        for (const auto &w : r.weak) {
            weak.push_back({{"label", w.label},
                            {"strength", w.strength},
                            {"weak_value", {w.weak_value.real(), w.weak_value.imag()}},
                            {"shift_over_strength", w.shift_over_strength},
                            {"momentum_shift", w.momentum_shift},
                            {"tolerance", w.tolerance},
                            {"pass", w.pass}});
        }
        doc["weak"] = weak;
    }
    if (r.total_probability) {
        const auto &tp = *r.total_probability;
        json finals = json::array();
        for (const auto &f : tp.finals) {
            json fj{{"eigenvalue", f.eigenvalue}, {"probability", f.probability}, {"skipped", f.skipped}};
            if (!f.skipped) fj["conditional"] = distribution_json(f.conditional);
            finals.push_back(std::move(fj));
        }
        doc["total_probability"] = {{"finals", finals},
                                    {"recombined", distribution_json(tp.recombined)},
                                    {"born", distribution_json(tp.born)},
                                    {"max_deviation", tp.max_deviation},
                                    {"pass", tp.passes}};
    }
    if (r.reality) {
        json entries = json::array();
        for (const auto &e : r.reality->entries) {
            entries.push_back({{"label", e.label},
                               {"eigenvalue", e.eigenvalue},
                               {"probability", e.probability},
                               {"element_of_reality", e.is_element_of_reality}});
        }
        json errors = json::array();
        for (const auto &[label, msg] : r.reality->errors) {
            errors.push_back({{"label", label}, {"error", msg}});
        }
        doc["elements_of_reality"] = {{"entries", entries}, {"errors", errors}};
    }
    if (r.product_rule) {
        auto c = [](Complex v) { return json::array({v.real(), v.imag()}); };
        const auto &p = *r.product_rule;
        doc["product_rule"] = {{"a_weak", c(p.a_weak)},
                               {"b_weak", c(p.b_weak)},
                               {"ab_weak", c(p.ab_weak)},
                               {"discrepancy", c(p.discrepancy)},
                               {"fails", p.fails}};
    }
    doc["notes"] = r.notes;
    return doc;
}

std::string report_to_csv(const ScenarioReport &r) {
    std::ostringstream out;
    out << "scenario,stage,eigenvalue,analytic,frequency,se,z,pass\n";
    for (const auto &s : r.stages) {
        size_t n = s.analytic ? s.analytic->entries.size() : s.oracle ? s.oracle->entries.size() : 0;
        for (size_t j = 0; j < n; ++j) {
            double eigenvalue = s.analytic ? s.analytic->entries[j].eigenvalue : s.oracle->entries[j].eigenvalue;
            out << r.name << ',' << s.label << ',' << format_number(eigenvalue) << ',';
            if (s.analytic) out << format_number(s.analytic->entries[j].probability);
            out << ',';
            if (s.oracle) out << format_number(s.oracle->entries[j].frequency);
            out << ',';
            if (s.oracle) out << format_number(s.oracle->entries[j].se);
            out << ',';
            if (s.comparison) out << format_number(s.comparison->rows[j].z_score);
            out << ',';
            if (s.comparison) out << (s.comparison->rows[j].pass ? "true" : "false");
            out << '\n';
        }
    }
    return out.str();
}

std::string report_to_table(const ScenarioReport &r) {
    std::ostringstream out;
    out << "scenario " << r.name << " (" << to_string(r.mode) << ")\n";
    if (r.acceptance.analytic) {
        out << "  post-selection probability (analytic): " << format_number(*r.acceptance.analytic) << '\n';
    }
    if (r.acceptance.frequency) {
        out << "  post-selection acceptance (oracle):    " << format_number(*r.acceptance.frequency) << " +- "
            << format_number(*r.acceptance.se) << "  [" << r.acceptance.accepted << "/" << r.acceptance.trials
            << "]";
        if (r.acceptance.pass) {
            out << "  z=" << format_number(*r.acceptance.z_score) << (*r.acceptance.pass ? " pass" : " FAIL");
        }
        out << '\n';
    }
    for (const auto &s : r.stages) {
        out << "  stage '" << s.label << "' (timeline " << s.timeline_index << ")\n";
        size_t n = s.analytic ? s.analytic->entries.size() : s.oracle->entries.size();
        for (size_t j = 0; j < n; ++j) {
            double eigenvalue = s.analytic ? s.analytic->entries[j].eigenvalue : s.oracle->entries[j].eigenvalue;
            out << "    " << format_number(eigenvalue) << ":";
            if (s.analytic) out << "  analytic " << format_number(s.analytic->entries[j].probability);
            if (s.oracle) {
                out << "  oracle " << format_number(s.oracle->entries[j].frequency) << " +- "
                    << format_number(s.oracle->entries[j].se);
            }
            if (s.comparison) {
                out << "  z=" << format_number(s.comparison->rows[j].z_score)
                    << (s.comparison->rows[j].pass ? " pass" : " FAIL");
            }
            out << '\n';
        }
    }
    for (const auto &w : r.weak) {
        out << "  weak '" << w.label << "': A_w = " << format_number(w.weak_value.real()) << " + "
            << format_number(w.weak_value.imag()) << "i, pointer shift/strength = "
            << format_number(w.shift_over_strength) << (w.pass ? " pass" : " FAIL") << '\n';
    }
    if (r.total_probability) {
        const auto &tp = *r.total_probability;
        out << "  total probability over final outcomes:\n";
        for (const auto &f : tp.finals) {
            out << "    final " << format_number(f.eigenvalue) << ": Prob = " << format_number(f.probability);
            if (f.skipped) {
                out << " (skipped)";
            } else {
                for (const auto &e : f.conditional.entries) {
                    out << "  P(" << format_number(e.eigenvalue) << "|f) = " << format_number(e.probability);
                }
            }
            out << '\n';
        }
        for (size_t i = 0; i < tp.recombined.entries.size(); ++i) {
            out << "    recombined " << format_number(tp.recombined.entries[i].eigenvalue) << ": "
                << format_number(tp.recombined.entries[i].probability) << "  born "
                << format_number(tp.born.entries[i].probability) << '\n';
        }
        out << "    max deviation " << format_number(tp.max_deviation) << (tp.passes ? " pass" : " FAIL") << '\n';
    }
    if (r.reality) {
        out << "  elements of reality:\n";
        for (const auto &e : r.reality->entries) {
            out << "    " << e.label << " = " << format_number(e.eigenvalue) << ": ABL "
                << format_number(e.probability) << (e.is_element_of_reality ? "  <- element of reality" : "") << '\n';
        }
        for (const auto &[label, msg] : r.reality->errors) {
            out << "    " << label << ": " << msg << '\n';
        }
    }
    if (r.product_rule) {
        const auto &p = *r.product_rule;
        out << "  product rule: A_w = " << format_number(p.a_weak.real()) << ", B_w = " << format_number(p.b_weak.real())
            << ", (AB)_w = " << format_number(p.ab_weak.real()) << " + " << format_number(p.ab_weak.imag()) << "i"
            << (p.fails ? "  -> product rule fails" : "  -> product rule holds") << '\n';
    }
    for (const auto &n : r.notes) {
        out << "  note: " << n << '\n';
    }
    out << "  verdict: " << (r.passes() ? "pass" : "FAIL") << '\n';
    return out.str();
}

}  // namespace tsvf
