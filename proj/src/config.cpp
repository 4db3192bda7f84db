// Copyright 2026 The clab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "clab/errors.hpp"
#include "clab/experiment.hpp"

namespace clab::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxK = 1000000;
constexpr std::uint64_t kMaxDraws = 1000000000ULL;
constexpr std::size_t kMaxSweep = 1000;
constexpr std::size_t kMaxGrid = 4096;
constexpr std::size_t kMaxAdiabaticBits = 14;

std::string child(const std::string &path, const std::string &key) { return path + "." + key; }
std::string item(const std::string &path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require(bool ok, const std::string &path, const std::string &message) {
    if (!ok) {
        throw ConfigError(path, message);
    }
}

void check_object(const json &j, const std::string &path, const std::set<std::string> &allowed) {
    require(j.is_object(), path, "expected an object");
    for (const auto &[key, value] : j.items()) {
        (void)value;
        require(allowed.count(key) > 0, child(path, key), "unknown key");
    }
}

double as_real(const json &v, const std::string &path) {
    require(v.is_number(), path, "expected a number");
    const double x = v.get<double>();
    require(std::isfinite(x), path, "must be finite");
    return x;
}

std::uint64_t as_count(const json &v, const std::string &path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        require(v.get<std::int64_t>() >= 0, path, "must be >= 0");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    // 1e6 style literals
    require(v.is_number_float(), path, "expected a non-negative integer");
    const double x = v.get<double>();
    require(std::isfinite(x) && x >= 0.0 && x <= 9007199254740992.0 && std::floor(x) == x, path,
            "expected a non-negative integer");
    return static_cast<std::uint64_t>(x);
}

double real_or(const json &j, const std::string &key, const std::string &path, double fallback) {
    return j.contains(key) ? as_real(j.at(key), child(path, key)) : fallback;
}

std::uint64_t count_or(const json &j, const std::string &key, const std::string &path, std::uint64_t fallback) {
    return j.contains(key) ? as_count(j.at(key), child(path, key)) : fallback;
}

std::string string_or(const json &j, const std::string &key, const std::string &path, std::string fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    require(j.at(key).is_string(), child(path, key), "expected a string");
    return j.at(key).get<std::string>();
}

bool bool_or(const json &j, const std::string &key, const std::string &path, bool fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    require(j.at(key).is_boolean(), child(path, key), "expected true or false");
    return j.at(key).get<bool>();
}

std::vector<double> reals_or(const json &j, const std::string &key, const std::string &path,
                             std::vector<double> fallback, std::size_t max_len) {
    if (!j.contains(key)) {
        return fallback;
    }
    const std::string p = child(path, key);
    const json &arr = j.at(key);
    require(arr.is_array(), p, "expected an array of numbers");
    require(arr.size() <= max_len, p, "at most " + std::to_string(max_len) + " entries");
    std::vector<double> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(as_real(arr[i], item(p, i)));
    }
    return out;
}

void require_range(double x, double lo, double hi, const std::string &path) {
    require(x >= lo && x <= hi, path,
            "must lie in [" + json(lo).dump() + ", " + json(hi).dump() + "], got " + json(x).dump());
}

void require_positive(double x, const std::string &path) { require(x > 0.0, path, "must be > 0"); }
void require_nonnegative(double x, const std::string &path) { require(x >= 0.0, path, "must be >= 0"); }

stochastic_model::SamplingMode mode_or(const json &j, const std::string &path,
                                       stochastic_model::SamplingMode fallback) {
    if (!j.contains("mode")) {
        return fallback;
    }
    const std::string name = string_or(j, "mode", path, "");
    try {
        return stochastic_model::sampling_mode_from_string(name);
    } catch (const std::invalid_argument &) {
        throw ConfigError(child(path, "mode"), "expected uniform_argument or independent_uniform, got '" + name + "'");
    }
}

DecohereParams parse_decohere(const json &j) {
    DecohereParams p;
    const std::string r = "$";
    p.K = count_or(j, "K", r, p.K);
    require_range(static_cast<double>(p.K), 1, kMaxK, "$.K");
    p.energy_scale = real_or(j, "energy_scale", r, p.energy_scale);
    require_positive(p.energy_scale, "$.energy_scale");
    p.tau = real_or(j, "tau", r, p.tau);
    require_nonnegative(p.tau, "$.tau");
    p.n_trials = count_or(j, "n_trials", r, p.n_trials);
    require(p.n_trials >= 1 && p.n_trials <= kMaxDraws, "$.n_trials", "must lie in [1, 1e9]");
    require(static_cast<double>(p.n_trials) * static_cast<double>(p.K) <= 1e10, "$.n_trials",
            "n_trials * K must not exceed 1e10");
    p.tau_sweep = reals_or(j, "tau_sweep", r, p.tau_sweep, kMaxSweep);
    for (std::size_t i = 0; i < p.tau_sweep.size(); ++i) {
        require_nonnegative(p.tau_sweep[i], item("$.tau_sweep", i));
    }
    return p;
}

StochasticParams parse_stochastic(const json &j) {
    StochasticParams p;
    const std::string r = "$";
    p.A_tilde = real_or(j, "A_tilde", r, p.A_tilde);
    require_nonnegative(p.A_tilde, "$.A_tilde");
    p.B_tilde = real_or(j, "B_tilde", r, p.B_tilde);
    require_nonnegative(p.B_tilde, "$.B_tilde");
    require(std::isfinite(p.A_tilde + p.B_tilde), "$.B_tilde", "A_tilde + B_tilde overflows");
    p.tau = real_or(j, "tau", r, p.tau);
    require_nonnegative(p.tau, "$.tau");
    p.n_samples = count_or(j, "n_samples", r, p.n_samples);
    require(p.n_samples >= 2 && p.n_samples <= kMaxDraws, "$.n_samples", "must lie in [2, 1e9]");
    p.mode = mode_or(j, r, p.mode);
    p.tau_sweep = reals_or(j, "tau_sweep", r, p.tau_sweep, kMaxSweep);
    for (std::size_t i = 0; i < p.tau_sweep.size(); ++i) {
        require_nonnegative(p.tau_sweep[i], item("$.tau_sweep", i));
    }
    return p;
}

CompareParams parse_compare(const json &j) {
    CompareParams p;
    const std::string r = "$";
    p.K = count_or(j, "K", r, p.K);
    require_range(static_cast<double>(p.K), 1, kMaxK, "$.K");
    p.energy_scale = real_or(j, "energy_scale", r, p.energy_scale);
    require_positive(p.energy_scale, "$.energy_scale");
    p.tau = real_or(j, "tau", r, p.tau);
    require_nonnegative(p.tau, "$.tau");
    p.n_trials = count_or(j, "n_trials", r, p.n_trials);
    require(p.n_trials >= 1 && p.n_trials <= kMaxDraws, "$.n_trials", "must lie in [1, 1e9]");
    require(static_cast<double>(p.n_trials) * static_cast<double>(p.K) <= 1e10, "$.n_trials",
            "n_trials * K must not exceed 1e10");
    p.n_samples = count_or(j, "n_samples", r, p.n_samples);
    require(p.n_samples >= 2 && p.n_samples <= kMaxDraws, "$.n_samples", "must lie in [2, 1e9]");
    p.mode = mode_or(j, r, p.mode);
    p.spreads = reals_or(j, "spreads", r, p.spreads, kMaxSweep);
    for (std::size_t i = 0; i < p.spreads.size(); ++i) {
        require_nonnegative(p.spreads[i], item("$.spreads", i));
    }
    return p;
}

reduction::ExactCoverInstance load_instance_at(const std::filesystem::path &file) {
    try {
        return reduction::load_instance(file);
    } catch (const ConfigError &e) {
        throw ConfigError("$.instance_path", std::string(e.what()));
    } catch (const std::exception &e) {
        throw ConfigError("$.instance_path", file.string() + ": " + e.what());
    }
}

AdiabaticParams parse_adiabatic(const json &j, const std::filesystem::path &base_dir) {
    AdiabaticParams p;
    require(!(j.contains("instance_path") && j.contains("instance")), "$.instance",
            "give either instance or instance_path, not both");
    if (j.contains("instance_path")) {
        p.instance_path = string_or(j, "instance_path", "$", "");
        std::filesystem::path file(*p.instance_path);
        if (file.is_relative()) {
            file = base_dir / file;
        }
        p.instance = load_instance_at(file);
    } else if (j.contains("instance")) {
        try {
            p.instance = reduction::instance_from_json(j.at("instance"));
        } catch (const ConfigError &e) {
            // "$.clauses[0]" -> "$.instance.clauses[0]"
            std::string sub = e.path();
            if (sub.rfind("$", 0) == 0) {
                sub = sub.substr(1);
            }
            throw ConfigError("$.instance" + sub, e.what());
        } catch (const std::invalid_argument &e) {
            throw ConfigError("$.instance", e.what());
        }
    }
    require(p.instance.n() <= kMaxAdiabaticBits, "$.instance",
            "adiabatic runs support n <= " + std::to_string(kMaxAdiabaticBits));

    if (j.contains("schedule")) {
        const json &s = j.at("schedule");
        const std::string r = "$.schedule";
        check_object(s, r, {"T_min", "T_max", "target", "steps_factor", "min_steps", "full_sweep"});
        auto &o = p.schedule;
        o.T_min = real_or(s, "T_min", r, o.T_min);
        require_positive(o.T_min, child(r, "T_min"));
        o.T_max = real_or(s, "T_max", r, o.T_max);
        require(o.T_max >= o.T_min, child(r, "T_max"), "must be >= T_min");
        require(o.T_max / o.T_min <= 1e6, child(r, "T_max"), "T_max / T_min must not exceed 1e6");
        o.target = real_or(s, "target", r, o.target);
        require(o.target > 0.0 && o.target <= 1.0, child(r, "target"), "must lie in (0, 1]");
        o.steps_factor = real_or(s, "steps_factor", r, o.steps_factor);
        require_range(o.steps_factor, 1e-3, 1e4, child(r, "steps_factor"));
        o.min_steps = count_or(s, "min_steps", r, o.min_steps);
        require(o.min_steps >= 1 && o.min_steps <= 10000000, child(r, "min_steps"), "must lie in [1, 1e7]");
        o.full_sweep = bool_or(s, "full_sweep", r, o.full_sweep);
    }
    return p;
}

SpectralParams parse_spectral(const json &j) {
    SpectralParams p;
    const std::string r = "$";
    p.grid_points = count_or(j, "grid_points", r, p.grid_points);
    require(p.grid_points >= 3 && p.grid_points <= kMaxGrid, "$.grid_points", "must lie in [3, 4096]");
    p.box_length = real_or(j, "box_length", r, p.box_length);
    require_positive(p.box_length, "$.box_length");
    p.mass = real_or(j, "mass", r, p.mass);
    require_positive(p.mass, "$.mass");
    p.E_B = real_or(j, "E_B", r, p.E_B);
    p.verify_tol = real_or(j, "verify_tol", r, p.verify_tol);
    require_positive(p.verify_tol, "$.verify_tol");
    if (j.contains("method")) {
        const std::string name = string_or(j, "method", r, "");
        try {
            p.method = reduction::ground_method_from_string(name);
        } catch (const std::invalid_argument &) {
            throw ConfigError("$.method", "expected dense or inverse_iteration, got '" + name + "'");
        }
    }
    if (j.contains("grid_sweep")) {
        const json &arr = j.at("grid_sweep");
        require(arr.is_array() && arr.size() <= kMaxSweep, "$.grid_sweep", "expected an array of grid sizes");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::uint64_t n = as_count(arr[i], item("$.grid_sweep", i));
            require(n >= 3 && n <= kMaxGrid, item("$.grid_sweep", i), "must lie in [3, 4096]");
            p.grid_sweep.push_back(static_cast<std::size_t>(n));
        }
    }
    if (j.contains("potential")) {
        const json &v = j.at("potential");
        const std::string q = "$.potential";
        check_object(v, q, {"kind", "omega", "offset", "values"});
        auto &pot = p.potential;
        pot.kind = string_or(v, "kind", q, pot.kind);
        require(pot.kind == "harmonic" || pot.kind == "zero" || pot.kind == "values", child(q, "kind"),
                "expected harmonic, zero or values");
        pot.omega = real_or(v, "omega", q, pot.omega);
        require_positive(pot.omega, child(q, "omega"));
        pot.offset = real_or(v, "offset", q, pot.offset);
        pot.values = reals_or(v, "values", q, {}, kMaxGrid);
        if (pot.kind == "values") {
            require(pot.values.size() == p.grid_points, child(q, "values"),
                    "needs one value per grid point (" + std::to_string(p.grid_points) + ")");
            require(p.grid_sweep.empty(), "$.grid_sweep", "not available with tabulated potential values");
        } else {
            require(pot.values.empty(), child(q, "values"), "only used with kind = values");
        }
    }
    return p;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::decohere:
        return "decohere";
    case ExperimentKind::stochastic:
        return "stochastic";
    case ExperimentKind::compare:
        return "compare";
    case ExperimentKind::adiabatic:
        return "adiabatic";
    case ExperimentKind::spectral:
        return "spectral";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string &name) {
    for (auto k : {ExperimentKind::decohere, ExperimentKind::stochastic, ExperimentKind::compare,
                   ExperimentKind::adiabatic, ExperimentKind::spectral}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw ConfigError("$.experiment", "unknown experiment '" + name + "'");
}

ExperimentConfig parse_config(ExperimentKind kind, const json &j, const std::filesystem::path &base_dir) {
    std::set<std::string> allowed{"experiment", "seed", "hbar"};
    switch (kind) {
    case ExperimentKind::decohere:
        allowed.insert({"K", "energy_scale", "tau", "n_trials", "tau_sweep"});
        break;
    case ExperimentKind::stochastic:
        allowed.insert({"A_tilde", "B_tilde", "tau", "n_samples", "mode", "tau_sweep"});
        break;
    case ExperimentKind::compare:
        allowed.insert({"K", "energy_scale", "tau", "n_trials", "n_samples", "mode", "spreads"});
        break;
    case ExperimentKind::adiabatic:
        allowed.insert({"instance_path", "instance", "schedule"});
        break;
    case ExperimentKind::spectral:
        allowed.insert({"grid_points", "box_length", "mass", "potential", "E_B", "method", "verify_tol",
                        "grid_sweep"});
        break;
    }
    check_object(j, "$", allowed);

    ExperimentConfig c;
    c.experiment = kind;
    if (j.contains("experiment")) {
        require(j.at("experiment").is_string(), "$.experiment", "expected a string");
        require(experiment_from_string(j.at("experiment").get<std::string>()) == kind, "$.experiment",
                "config is for '" + j.at("experiment").get<std::string>() + "', not '" + to_string(kind) + "'");
    }
    c.seed.value = count_or(j, "seed", "$", c.seed.value);
    c.hbar = real_or(j, "hbar", "$", c.hbar);
    require_positive(c.hbar, "$.hbar");

    switch (kind) {
    case ExperimentKind::decohere:
        c.decohere = parse_decohere(j);
        break;
    case ExperimentKind::stochastic:
        c.stochastic = parse_stochastic(j);
        break;
    case ExperimentKind::compare:
        c.compare = parse_compare(j);
        break;
    case ExperimentKind::adiabatic:
        c.adiabatic = parse_adiabatic(j, base_dir);
        break;
    case ExperimentKind::spectral:
        c.spectral = parse_spectral(j);
        break;
    }
    return c;
}

ExperimentConfig load_config(ExperimentKind kind, const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string(), "cannot open config file");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    return parse_config(kind, j, path.parent_path());
}

json config_to_json(const ExperimentConfig &c) {
    json j;
    j["experiment"] = to_string(c.experiment);
    j["seed"] = c.seed.value;
    j["hbar"] = c.hbar;
    switch (c.experiment) {
    case ExperimentKind::decohere: {
        const auto &p = c.decohere;
        j["K"] = p.K;
        j["energy_scale"] = p.energy_scale;
        j["tau"] = p.tau;
        j["n_trials"] = p.n_trials;
        j["tau_sweep"] = p.tau_sweep;
        break;
    }
    case ExperimentKind::stochastic: {
        const auto &p = c.stochastic;
        j["A_tilde"] = p.A_tilde;
        j["B_tilde"] = p.B_tilde;
        j["tau"] = p.tau;
        j["n_samples"] = p.n_samples;
        j["mode"] = stochastic_model::to_string(p.mode);
        j["tau_sweep"] = p.tau_sweep;
        break;
    }
    case ExperimentKind::compare: {
        const auto &p = c.compare;
        j["K"] = p.K;
        j["energy_scale"] = p.energy_scale;
        j["tau"] = p.tau;
        j["n_trials"] = p.n_trials;
        j["n_samples"] = p.n_samples;
        j["mode"] = stochastic_model::to_string(p.mode);
        j["spreads"] = p.spreads;
        break;
    }
    case ExperimentKind::adiabatic: {
        const auto &p = c.adiabatic;
        // the resolved instance, so the echo alone reproduces the run
        j["instance"] = reduction::instance_to_json(p.instance);
        const auto &o = p.schedule;
        j["schedule"] = {{"T_min", o.T_min},         {"T_max", o.T_max},         {"target", o.target},
                         {"steps_factor", o.steps_factor}, {"min_steps", o.min_steps}, {"full_sweep", o.full_sweep}};
        break;
    }
    case ExperimentKind::spectral: {
        const auto &p = c.spectral;
        j["grid_points"] = p.grid_points;
        j["box_length"] = p.box_length;
        j["mass"] = p.mass;
        json pot{{"kind", p.potential.kind}};
        if (p.potential.kind == "harmonic") {
            pot["omega"] = p.potential.omega;
        }
        if (p.potential.kind != "values") {
            pot["offset"] = p.potential.offset;
        } else {
            pot["values"] = p.potential.values;
        }
        j["potential"] = pot;
        j["E_B"] = p.E_B;
        j["method"] = reduction::to_string(p.method);
        j["verify_tol"] = p.verify_tol;
        j["grid_sweep"] = p.grid_sweep;
        break;
    }
    }
    return j;
}

reduction::SpectralDecisionInstance make_spectral_instance(const SpectralParams &p, std::size_t grid_points) {
    const auto &pot = p.potential;
    if (pot.kind == "harmonic") {
        return reduction::harmonic_instance(grid_points, p.box_length, p.mass, pot.omega, p.E_B, pot.offset);
    }
    reduction::SpectralDecisionInstance inst;
    inst.grid_points = grid_points;
    inst.box_length = p.box_length;
    inst.mass = p.mass;
    inst.E_B = p.E_B;
    if (pot.kind == "zero") {
        inst.potential.assign(grid_points, pot.offset);
    } else {
        if (pot.values.size() != grid_points) {
            throw ConfigError("$.potential.values", "needs one value per grid point");
        }
        inst.potential = pot.values;
    }
    inst.validate();
    return inst;
}

}  // namespace clab::cli
