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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "clab/decoherence.hpp"
#include "clab/exact_cover.hpp"
#include "clab/experiment.hpp"
#include "clab/spectral.hpp"
#include "clab/stochastic_model.hpp"
#include "oracles.hpp"

using namespace clab;
namespace dec = clab::decoherence;
namespace sm = clab::stochastic_model;
namespace red = clab::reduction;
using stochastics::RandomSeed;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds, <= 0 for none
    std::function<Outcome()> body;
};

std::string fmt(const char *f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome classical_decoherence() {
    const auto e = dec::decohered_probability(1000, 1e4, 1.0, {}, RandomSeed{20260101}, 100);
    std::ostringstream o;
    o << "mean " << e.mean << " +- " << e.std_error << ", |mean - 0.5| = " << std::abs(e.mean - 0.5)
      << " (limit 0.02)";
    return {std::abs(e.mean - 0.5) <= 0.02, o.str()};
}

Outcome classical_stochastic() {
    const sm::StochasticInteraction s{5e3, 5e3, sm::SamplingMode::uniform_argument};
    const double xi = sm::xi_max(s, 1.0);
    const auto e = sm::mc_probability(s, 1.0, {}, RandomSeed{20260102}, 1000000);
    std::ostringstream o;
    o << "xi_max " << xi << ", mean " << e.mean << " +- " << e.std_error << ", |mean - 0.5| = "
      << std::abs(e.mean - 0.5) << " (limit 0.005)";
    return {xi == 1e4 && std::abs(e.mean - 0.5) <= 0.005, o.str()};
}

Outcome closed_form_oracle() {
    std::mt19937_64 rng(20260103);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t K = 1 + rng() % 64;
        const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 3.0)(rng));
        const double tau = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto d = dec::sample_random_detector(K, scale, RandomSeed{rng()});
        const double a = dec::prob_closed_form(d, tau).probability;
        const double b = dec::prob_full_propagation(d, tau).probability;
        worst = std::max(worst, std::abs(a - b));
    }
    return {worst <= 1e-10, "200 models, max |closed - full| = " + fmt("%.3g", worst) + " (limit 1e-10)"};
}

Outcome expansion_identity() {
    const sm::StochasticInteraction s{123.0, 45.5, sm::SamplingMode::independent_uniform};
    const double hbar = 0.9;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100000; ++i) {
        const double tau = 1e-3 * static_cast<double>(i % 2003);
        const auto e = sm::sample_energies(s, RandomSeed{20260104}, i);
        const double p = sm::overlap_probability(s, e, tau, {hbar});
        worst = std::max(worst, std::abs(p - oracle::direct_overlap(s.A_tilde, s.B_tilde, e.alpha, e.beta, tau, hbar)));
    }
    return {worst <= 1e-12, "1e5 samples, max deviation " + fmt("%.3g", worst) + " (limit 1e-12)"};
}

Outcome sinc_average() {
    bool ok = true;
    std::ostringstream o;
    for (double xi : {0.1, std::numbers::pi, 10.0, 1e3}) {
        const auto e = stochastics::mc_mean(
            [xi](RandomSeed s, std::uint64_t i) { return std::cos(stochastics::sample_uniform({-xi, xi}, s, i)); },
            1000000, RandomSeed{20260105});
        const double exact = sm::avg_cos_analytic(xi);
        const double z = std::abs(e.mean - exact) / e.std_error;
        ok = ok && z <= 4.0;
        o << "xi=" << xi << ": " << z << " stderr; ";
    }
    const double tail = std::abs(sm::avg_cos_analytic(1e4));
    ok = ok && tail <= 1e-4;
    o << "|sinc(1e4)| = " << tail;
    return {ok, o.str()};
}

Outcome adiabatic_exact_cover() {
    const std::filesystem::path dir = std::filesystem::path(CLAB_DATA_DIR) / "instances";
    bool ok = true;
    std::ostringstream o;
    for (const char *name : {"ec_n3.json", "ec_n6.json", "ec_n8.json"}) {
        const auto inst = red::load_instance(dir / name);
        const auto sols = oracle::exact_cover_solutions(inst.n(), inst.clauses());
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = red::adiabatic_sweep(inst, {});
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool good = r.reached_target && r.final_outcome.has_value();
        std::string best = "-";
        double p = 0.0;
        if (r.final_outcome) {
            best = red::bitstring(r.final_outcome->most_probable, inst.n());
            p = r.final_outcome->success_probability;
            good = good && p >= 0.9 && std::find(sols.begin(), sols.end(), best) != sols.end();
        }
        if (inst.n() > 3) {
            good = good && sols.size() == 1;
        }
        if (inst.n() == 8) {
            good = good && secs < 60.0;
        }
        ok = ok && good;
        o << "n=" << inst.n() << " P=" << fmt("%.4f", p) << " at T=" << (r.points.empty() ? 0.0 : r.points.back().T)
          << " best=" << best << " (" << fmt("%.1f", secs) << " s)" << (inst.n() < 8 ? ", " : "");
    }
    return {ok, o.str()};
}

Outcome spectral_decision() {
    const double omega = 1.0;
    const auto [h, eb] = red::reduce_energy_decision(red::harmonic_instance(512, 20.0, 1.0, omega, 0.0));
    const double e0 = red::ground_energy(h);
    const double rel = std::abs(e0 - 0.5 * omega) / (0.5 * omega);
    const bool above = red::decide_pi_E(red::harmonic_instance(512, 20.0, 1.0, omega, omega));
    const bool below = red::decide_pi_E(red::harmonic_instance(512, 20.0, 1.0, omega, omega / 4.0));
    std::ostringstream o;
    o << "E0 = " << e0 << " (rel err " << rel << "), decide(hw) = " << above << ", decide(hw/4) = " << below;
    return {rel <= 0.01 && above && !below, o.str()};
}

Outcome verifier() {
    std::mt19937_64 rng(20260108);
    const double tol = 1e-8;
    int accepted = 0;
    int rejected = 0;
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        const std::size_t N = 16 + rng() % 1009;
        const double L = std::uniform_real_distribution<double>(2.0, 30.0)(rng);
        const double m = std::uniform_real_distribution<double>(0.2, 5.0)(rng);
        std::uniform_real_distribution<double> v(-10.0, 10.0);
        red::SpectralDecisionInstance inst{N, L, m, {}, 0.0};
        for (std::size_t j = 0; j < N; ++j) {
            inst.potential.push_back(v(rng));
        }
        const auto [h, eb] = red::reduce_energy_decision(inst);
        const auto es = h.eigensystem();
        const double hnorm = std::max(std::abs(es.values[0]), std::abs(es.values[es.values.size() - 1]));
        auto probe = [&](const Eigen::VectorXd &vec, double E) {
            const StateVector psi(vec.cast<Complex>(), BasisLabel::grid);
            ++checked;
            accepted += red::verify_eigenpair(h, psi, E, tol);
            rejected += !red::verify_eigenpair(h, psi, E + 10.0 * tol * hnorm, tol);
            rejected += !red::verify_eigenpair(h, psi, E - 10.0 * tol * hnorm, tol);
        };
        for (auto method : {red::GroundMethod::dense, red::GroundMethod::inverse_iteration}) {
            const auto g = red::ground_state(h, method);
            probe(g.vector, g.energy);
        }
        // the full dense spectrum on a handful of columns
        for (Eigen::Index k : {Eigen::Index{1}, es.values.size() / 2, es.values.size() - 1}) {
            probe(es.vectors.col(k).real(), es.values[k]);
        }
    }
    std::ostringstream o;
    o << "50 Hamiltonians, accepted " << accepted << "/" << checked << ", rejected perturbations " << rejected << "/"
      << 2 * checked;
    return {accepted == checked && rejected == 2 * checked, o.str()};
}

Outcome property_suite() {
    std::mt19937_64 rng(20260109);
    double norm_err = 0.0;
    double unit_err = 0.0;
    bool range_ok = true;
    bool det_ok = true;

    for (int n : {2, 8, 32, 128}) {
        const auto h = HermitianOperator::dense(oracle::random_hermitian(rng, n, 3.0));
        const StateVector psi(oracle::random_unit(rng, n), BasisLabel::product);
        for (double dt : {0.01, 1.0, 25.0}) {
            const auto u = expm_propagator(h, dt);
            unit_err = std::max(unit_err, u.unitarity_defect());
            norm_err = std::max(norm_err, std::abs(u.apply(psi).norm() - 1.0));
            norm_err = std::max(norm_err, std::abs(krylov_expm_apply(h, dt, psi.amplitudes()).norm() - 1.0));
        }
        const auto hdiag = HermitianOperator::diagonal(Eigen::VectorXd::Random(n) * 50.0);
        unit_err = std::max(unit_err, expm_propagator(hdiag, 3.0).unitarity_defect());
        auto h_of_t = [&](double t) {
            return HermitianOperator::linear_combination(std::cos(t), h, std::sin(t), hdiag);
        };
        const auto r = integrate_tdse(h_of_t, psi, 2.0, 200);
        norm_err = std::max(norm_err, r.norm_drift);
    }

    for (int t = 0; t < 50; ++t) {
        const auto d = dec::sample_random_detector(1 + rng() % 40, 100.0, RandomSeed{rng()});
        const double tau = 0.1 * t;
        norm_err = std::max(norm_err, std::abs(dec::propagate_exact(d, tau).norm() - 1.0));
        for (double p : {dec::prob_closed_form(d, tau).probability, dec::prob_full_propagation(d, tau).probability}) {
            range_ok = range_ok && p >= 0.0 && p <= 1.0 + 1e-12;
        }
        const sm::StochasticInteraction s{0.5 * t, 0.25 * t, t % 2 ? sm::SamplingMode::independent_uniform
                                                                  : sm::SamplingMode::uniform_argument};
        const auto e = sm::sample_energies(s, RandomSeed{7}, static_cast<std::uint64_t>(t));
        norm_err = std::max(norm_err, std::abs(sm::evolve_stochastic(s, e, tau).to_state().norm() - 1.0));
        const double p = sm::overlap_probability(s, e, tau);
        const double q = sm::expected_probability(s, tau);
        range_ok = range_ok && p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0;
    }

    const red::ExactCoverInstance inst(4, {{1, 2, 3}, {2, 3, 4}});
    for (double T : {0.5, 4.0, 32.0}) {
        const auto o = red::adiabatic_run(inst, {T, red::recommended_steps(inst, T)});
        norm_err = std::max(norm_err, o.norm_drift);
        range_ok = range_ok && o.success_probability >= 0.0 && o.success_probability <= 1.0 + 1e-12;
    }

    const auto a = dec::decohered_probability(64, 30.0, 0.7, {}, RandomSeed{11}, 40, 1);
    const auto b = dec::decohered_probability(64, 30.0, 0.7, {}, RandomSeed{11}, 40, 4);
    det_ok = det_ok && a.mean == b.mean && a.std_error == b.std_error;
    const sm::StochasticInteraction s{2.0, 3.0};
    const auto c = sm::mc_probability(s, 0.4, {}, RandomSeed{12}, 100000, 1);
    const auto d = sm::mc_probability(s, 0.4, {}, RandomSeed{12}, 100000, 3);
    det_ok = det_ok && c.mean == d.mean && c.std_error == d.std_error;
    range_ok = range_ok && a.mean >= 0.0 && a.mean <= 1.0 && c.mean >= 0.0 && c.mean <= 1.0;
    for (auto kind : {cli::ExperimentKind::decohere, cli::ExperimentKind::stochastic, cli::ExperimentKind::spectral}) {
        const auto cfg = cli::parse_config(kind, {{"seed", 99}, {kind == cli::ExperimentKind::spectral ? "grid_points"
                                                                : kind == cli::ExperimentKind::decohere ? "K"
                                                                                                       : "n_samples",
                                                               kind == cli::ExperimentKind::decohere ? 100 : 2000}});
        det_ok = det_ok && cli::payload_json(cli::run(cfg)) == cli::payload_json(cli::run(cfg));
    }

    std::ostringstream o;
    o << "norm " << norm_err << ", unitarity " << unit_err << ", range " << (range_ok ? "ok" : "VIOLATED")
      << ", determinism " << (det_ok ? "ok" : "VIOLATED");
    return {norm_err <= 1e-10 && unit_err <= 1e-10 && range_ok && det_ok, o.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "classical value, decoherence route", 10.0, classical_decoherence},
        {2, "classical value, stochastic route", 5.0, classical_stochastic},
        {3, "closed form vs full propagation", 30.0, closed_form_oracle},
        {4, "trigonometric expansion identity", 0.0, expansion_identity},
        {5, "sinc average", 0.0, sinc_average},
        {6, "adiabatic exact cover", 0.0, adiabatic_exact_cover},
        {7, "spectral decision", 0.0, spectral_decision},
        {8, "eigenpair verifier", 0.0, verifier},
        {9, "property suite", 0.0, property_suite},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        Outcome out;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            out = c.body();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = out.pass;
        std::string timing = fmt("%.2f s", secs);
        if (c.time_limit > 0.0) {
            timing += fmt(" (limit %.0f s)", c.time_limit);
            pass = pass && secs < c.time_limit;
        }
        failed += !pass;
        std::printf("%s [%d] %s: %s; %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), out.detail.c_str(),
                    timing.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
