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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "clab/decoherence.hpp"
#include "clab/errors.hpp"
#include "clab/experiment.hpp"

#ifndef CLAB_VERSION
#define CLAB_VERSION "0.0.0"
#endif

namespace clab::cli {

using nlohmann::json;
using stochastics::MonteCarloEstimate;
using stochastics::RandomSeed;

namespace {

json estimate_json(const MonteCarloEstimate &e) {
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}};
}

// Detector models with K this small also get the O(K^2) propagation cross-check.
constexpr std::size_t kOracleMaxK = 64;
constexpr std::uint64_t kOracleModels = 8;

ResultRecord run_decohere(const ExperimentConfig &cfg, const PhysicalConstants &c) {
    const auto &p = cfg.decohere;
    ResultRecord rec;
    const MonteCarloEstimate est =
        decoherence::decohered_probability(p.K, p.energy_scale, p.tau, c, cfg.seed, p.n_trials, cfg.threads);
    rec.outputs["probability"] = estimate_json(est);
    rec.outputs["dimensionless_spread"] = p.energy_scale * p.tau / c.hbar;

    if (p.K <= kOracleMaxK) {
        double worst = 0.0;
        const std::uint64_t models = std::min(p.n_trials, kOracleModels);
        for (std::uint64_t t = 0; t < models; ++t) {
            const auto d = decoherence::sample_random_detector(p.K, p.energy_scale, stochastics::derive_seed(cfg.seed, t));
            const double a = decoherence::prob_closed_form(d, p.tau, c).probability;
            const double b = decoherence::prob_full_propagation(d, p.tau, c).probability;
            worst = std::max(worst, std::abs(a - b));
        }
        rec.outputs["propagation_check"] = {{"models", models}, {"max_abs_difference", worst}};
        if (worst > 1e-10) {
            rec.warnings.push_back("closed form and full propagation differ by " + json(worst).dump());
        }
    }

    if (!p.tau_sweep.empty()) {
        Chart ch{"probability_vs_tau", "Decohered outcome probability", "tau", "probability", p.tau_sweep, {}};
        Series s{"decoherence average", {}, {}};
        for (double tau : p.tau_sweep) {
            const auto e =
                decoherence::decohered_probability(p.K, p.energy_scale, tau, c, cfg.seed, p.n_trials, cfg.threads);
            s.y.push_back(e.mean);
            s.err.push_back(e.std_error);
        }
        ch.series.push_back(std::move(s));
        rec.charts.push_back(std::move(ch));
    }
    return rec;
}

ResultRecord run_stochastic(const ExperimentConfig &cfg, const PhysicalConstants &c) {
    const auto &p = cfg.stochastic;
    const stochastic_model::StochasticInteraction s{p.A_tilde, p.B_tilde, p.mode};
    ResultRecord rec;
    const auto est = stochastic_model::mc_probability(s, p.tau, c, cfg.seed, p.n_samples, cfg.threads);
    const double analytic = stochastic_model::expected_probability(s, p.tau, c);
    rec.outputs["probability"] = estimate_json(est);
    rec.outputs["analytic_probability"] = analytic;
    rec.outputs["xi_max"] = stochastic_model::xi_max(s, p.tau, c);
    rec.outputs["z_score"] = est.std_error > 0.0 ? (est.mean - analytic) / est.std_error : 0.0;

    if (!p.tau_sweep.empty()) {
        Chart ch{"probability_vs_tau", "Stochastic outcome probability", "tau", "probability", p.tau_sweep, {}};
        Series mc{"monte carlo", {}, {}};
        Series an{"closed form", {}, {}};
        for (double tau : p.tau_sweep) {
            const auto e = stochastic_model::mc_probability(s, tau, c, cfg.seed, p.n_samples, cfg.threads);
            mc.y.push_back(e.mean);
            mc.err.push_back(e.std_error);
            an.y.push_back(stochastic_model::expected_probability(s, tau, c));
        }
        ch.series.push_back(std::move(mc));
        ch.series.push_back(std::move(an));
        rec.charts.push_back(std::move(ch));
    }
    return rec;
}

ResultRecord run_compare(const ExperimentConfig &cfg, const PhysicalConstants &c) {
    const auto &p = cfg.compare;
    const stochastic_model::StochasticInteraction s{p.energy_scale / 2.0, p.energy_scale / 2.0, p.mode};
    const RandomSeed dec_seed = stochastics::derive_seed(cfg.seed, 0);
    const RandomSeed sto_seed = stochastics::derive_seed(cfg.seed, 1);

    auto both = [&](double tau) {
        const auto d = decoherence::decohered_probability(p.K, p.energy_scale, tau, c, dec_seed, p.n_trials,
                                                          cfg.threads);
        const auto m = stochastic_model::mc_probability(s, tau, c, sto_seed, p.n_samples, cfg.threads);
        return std::pair{d, m};
    };

    ResultRecord rec;
    const auto [d, m] = both(p.tau);
    rec.outputs["A_tilde"] = s.A_tilde;
    rec.outputs["B_tilde"] = s.B_tilde;
    rec.outputs["dimensionless_spread"] = p.energy_scale * p.tau / c.hbar;
    rec.outputs["decoherence"] = estimate_json(d);
    rec.outputs["stochastic"] = estimate_json(m);
    rec.outputs["stochastic_closed_form"] = stochastic_model::expected_probability(s, p.tau, c);
    rec.outputs["abs_difference"] = std::abs(d.mean - m.mean);

    if (!p.spreads.empty()) {
        Chart ch{"probability_vs_spread", "Decoherence and stochastic routes", "energy_scale * tau / hbar",
                 "probability", p.spreads, {}};
        Series sd{"decoherence", {}, {}};
        Series sm{"stochastic", {}, {}};
        Series sa{"stochastic closed form", {}, {}};
        for (double spread : p.spreads) {
            const double tau = spread * c.hbar / p.energy_scale;
            const auto [di, mi] = both(tau);
            sd.y.push_back(di.mean);
            sd.err.push_back(di.std_error);
            sm.y.push_back(mi.mean);
            sm.err.push_back(mi.std_error);
            sa.y.push_back(stochastic_model::expected_probability(s, tau, c));
        }
        ch.series.push_back(std::move(sd));
        ch.series.push_back(std::move(sm));
        ch.series.push_back(std::move(sa));
        rec.charts.push_back(std::move(ch));
    }
    return rec;
}

ResultRecord run_adiabatic(const ExperimentConfig &cfg, const PhysicalConstants &c) {
    const auto &p = cfg.adiabatic;
    const auto &inst = p.instance;
    const std::size_t n = inst.n();
    ResultRecord rec;

    const auto solutions = reduction::brute_force_exact_cover(inst);
    json sols = json::array();
    for (auto z : solutions) {
        sols.push_back(reduction::bitstring(z, n));
    }
    rec.outputs["instance_source"] = p.instance_path.value_or("inline");
    rec.outputs["n"] = n;
    rec.outputs["clauses"] = inst.clauses().size();
    rec.outputs["solutions"] = sols;
    rec.outputs["unique_solution"] = solutions.size() == 1;
    if (solutions.empty()) {
        rec.warnings.push_back("instance has no exact cover; success probability is 0 for every T");
    }

    const auto sweep = reduction::adiabatic_sweep(inst, p.schedule, c);
    rec.outputs["target"] = p.schedule.target;
    rec.outputs["reached_target"] = sweep.reached_target;
    rec.outputs["note"] = "target and the T grid are run settings chosen by the user";

    json pts = json::array();
    Chart ch{"success_vs_T", "Adiabatic success probability", "T", "success probability", {}, {}};
    Series s{"success probability", {}, {}};
    for (const auto &pt : sweep.points) {
        pts.push_back({{"T", pt.T},
                       {"steps", pt.steps},
                       {"success_probability", pt.success_probability},
                       {"most_probable", reduction::bitstring(pt.most_probable, n)},
                       {"most_probable_satisfies", pt.most_probable_satisfies},
                       {"norm_drift", pt.norm_drift}});
        ch.x.push_back(pt.T);
        s.y.push_back(pt.success_probability);
    }
    ch.series.push_back(std::move(s));
    rec.outputs["sweep"] = pts;
    rec.charts.push_back(std::move(ch));

    if (sweep.final_outcome) {
        const auto &o = *sweep.final_outcome;
        rec.outputs["final"] = {{"T", sweep.points.back().T},
                                {"success_probability", o.success_probability},
                                {"most_probable", reduction::bitstring(o.most_probable, n)},
                                {"most_probable_weight", o.most_probable_weight},
                                {"most_probable_satisfies", inst.satisfies(o.most_probable)}};
        for (const auto &w : o.warnings) {
            rec.warnings.push_back(w);
        }
    }
    if (!sweep.reached_target) {
        rec.warnings.push_back("success probability stayed below " + json(p.schedule.target).dump() +
                               " up to T = " + json(p.schedule.T_max).dump());
    }
    return rec;
}

// Continuum reference for the lowest level, where one is known.
std::optional<double> reference_energy(const SpectralParams &p, const PhysicalConstants &c) {
    if (p.potential.kind == "harmonic") {
        return c.hbar * p.potential.omega / 2.0 + p.potential.offset;
    }
    if (p.potential.kind == "zero") {
        const double k = std::numbers::pi / p.box_length;
        return c.hbar * c.hbar * k * k / (2.0 * p.mass) + p.potential.offset;
    }
    return std::nullopt;
}

ResultRecord run_spectral(const ExperimentConfig &cfg, const PhysicalConstants &c) {
    const auto &p = cfg.spectral;
    ResultRecord rec;
    const auto inst = make_spectral_instance(p, p.grid_points);
    const auto [h, E_B] = reduction::reduce_energy_decision(inst, c);
    const auto gs = reduction::ground_state(h, p.method);
    const bool decision = reduction::decide_pi_E(inst, c, p.method);

    Eigen::VectorXcd v = gs.vector.cast<Complex>();
    const StateVector psi(std::move(v), BasisLabel::grid);
    const double residual = reduction::eigen_residual(h, psi, gs.energy);

    rec.outputs["grid_points"] = p.grid_points;
    rec.outputs["spacing"] = inst.spacing();
    rec.outputs["norm_bound"] = h.norm_bound();
    rec.outputs["ground_energy"] = gs.energy;
    rec.outputs["method_used"] = reduction::to_string(gs.method);
    rec.outputs["iterations"] = gs.iterations;
    rec.outputs["E_B"] = E_B;
    rec.outputs["decision"] = decision;
    rec.outputs["residual"] = residual;
    rec.outputs["verified"] = reduction::verify_eigenpair(h, psi, gs.energy, p.verify_tol);
    const auto ref = reference_energy(p, c);
    if (ref) {
        rec.outputs["reference_energy"] = *ref;
        rec.outputs["relative_error"] = std::abs(gs.energy - *ref) / std::max(std::abs(*ref), 1e-300);
    }
    for (const auto &note : gs.notices) {
        rec.warnings.push_back(note);
    }
    if (!rec.outputs["verified"].get<bool>()) {
        rec.warnings.push_back("eigenpair residual " + json(residual).dump() + " exceeds verify_tol");
    }

    if (!p.grid_sweep.empty()) {
        Chart ch{"energy_vs_grid", "Lowest grid eigenvalue", "grid points", "energy", {}, {}};
        Series s{"ground energy", {}, {}};
        Series r{"continuum reference", {}, {}};
        for (std::size_t N : p.grid_sweep) {
            const auto hi = reduction::reduce_energy_decision(make_spectral_instance(p, N), c).first;
            ch.x.push_back(static_cast<double>(N));
            s.y.push_back(reduction::ground_energy(hi, p.method));
            if (ref) {
                r.y.push_back(*ref);
            }
        }
        ch.series.push_back(std::move(s));
        if (ref) {
            ch.series.push_back(std::move(r));
        }
        rec.charts.push_back(std::move(ch));
    }
    return rec;
}

json chart_to_json(const Chart &ch) {
    json series = json::array();
    for (const auto &s : ch.series) {
        series.push_back({{"label", s.label}, {"y", s.y}, {"err", s.err}});
    }
    return {{"name", ch.name},       {"title", ch.title}, {"x_label", ch.x_label},
            {"y_label", ch.y_label}, {"x", ch.x},         {"series", series}};
}

Chart chart_from_json(const json &j) {
    Chart ch;
    ch.name = j.at("name").get<std::string>();
    ch.title = j.at("title").get<std::string>();
    ch.x_label = j.at("x_label").get<std::string>();
    ch.y_label = j.at("y_label").get<std::string>();
    ch.x = j.at("x").get<std::vector<double>>();
    for (const auto &s : j.at("series")) {
        ch.series.push_back(
            {s.at("label").get<std::string>(), s.at("y").get<std::vector<double>>(), s.at("err").get<std::vector<double>>()});
    }
    return ch;
}

}  // namespace

json record_to_json(const ResultRecord &r) {
    json charts = json::array();
    for (const auto &ch : r.charts) {
        charts.push_back(chart_to_json(ch));
    }
    return {{"version", r.version},   {"experiment", r.experiment}, {"config", r.config},
            {"outputs", r.outputs},   {"charts", charts},           {"warnings", r.warnings},
            {"wall_clock_seconds", r.wall_clock_seconds}};
}

ResultRecord record_from_json(const json &j) {
    ResultRecord r;
    r.version = j.at("version").get<std::string>();
    r.experiment = j.at("experiment").get<std::string>();
    r.config = j.at("config");
    r.outputs = j.at("outputs");
    for (const auto &ch : j.at("charts")) {
        r.charts.push_back(chart_from_json(ch));
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    return r;
}

std::string payload_json(const ResultRecord &r) {
    json j = record_to_json(r);
    j.erase("wall_clock_seconds");
    return j.dump(2);
}

ResultRecord run(const ExperimentConfig &cfg) {
    const auto start = std::chrono::steady_clock::now();
    const PhysicalConstants c{cfg.hbar};
    c.validate();

    ResultRecord rec;
    switch (cfg.experiment) {
    case ExperimentKind::decohere:
        rec = run_decohere(cfg, c);
        break;
    case ExperimentKind::stochastic:
        rec = run_stochastic(cfg, c);
        break;
    case ExperimentKind::compare:
        rec = run_compare(cfg, c);
        break;
    case ExperimentKind::adiabatic:
        rec = run_adiabatic(cfg, c);
        break;
    case ExperimentKind::spectral:
        rec = run_spectral(cfg, c);
        break;
    }
    if (rec.outputs.is_null()) {
        rec.outputs = json::object();
    }
    rec.version = CLAB_VERSION;
    rec.experiment = to_string(cfg.experiment);
    rec.config = config_to_json(cfg);
    rec.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace clab::cli
