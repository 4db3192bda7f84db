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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "clab/decoherence.hpp"
#include "clab/exact_cover.hpp"
#include "clab/experiment.hpp"
#include "clab/spectral.hpp"
#include "clab/stochastic_model.hpp"

namespace py = pybind11;
using namespace clab;

namespace {

py::dict estimate(const stochastics::MonteCarloEstimate &e) {
    py::dict d;
    d["mean"] = e.mean;
    d["std_error"] = e.std_error;
    d["n"] = e.n;
    return d;
}

reduction::ExactCoverInstance make_instance(std::size_t n, const std::vector<reduction::Clause> &clauses) {
    return reduction::ExactCoverInstance(n, clauses);
}

}  // namespace

PYBIND11_MODULE(_clab, m) {
    m.doc() = "Bindings for the clab simulation core";
    m.attr("__version__") = CLAB_VERSION;

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "prob_closed_form",
        [](std::vector<Complex> a, std::vector<double> A, std::vector<double> B, double tau, double hbar) {
            const decoherence::DetectorModel d(std::move(a), std::move(A), std::move(B));
            return decoherence::prob_closed_form(d, tau, {hbar}).probability;
        },
        py::arg("a"), py::arg("A"), py::arg("B"), py::arg("tau"), py::arg("hbar") = 1.0);
    m.def(
        "prob_full_propagation",
        [](std::vector<Complex> a, std::vector<double> A, std::vector<double> B, double tau, double hbar) {
            const decoherence::DetectorModel d(std::move(a), std::move(A), std::move(B));
            return decoherence::prob_full_propagation(d, tau, {hbar}).probability;
        },
        py::arg("a"), py::arg("A"), py::arg("B"), py::arg("tau"), py::arg("hbar") = 1.0);
    m.def(
        "decohered_probability",
        [](std::size_t K, double energy_scale, double tau, double hbar, std::uint64_t seed, std::uint64_t trials) {
            return estimate(decoherence::decohered_probability(K, energy_scale, tau, {hbar}, {seed}, trials));
        },
        py::arg("K"), py::arg("energy_scale"), py::arg("tau"), py::arg("hbar") = 1.0, py::arg("seed") = 1,
        py::arg("trials") = 100);

    m.def(
        "mc_probability",
        [](double A_tilde, double B_tilde, double tau, const std::string &mode, double hbar, std::uint64_t seed,
           std::uint64_t n) {
            const stochastic_model::StochasticInteraction s{A_tilde, B_tilde,
                                                            stochastic_model::sampling_mode_from_string(mode)};
            return estimate(stochastic_model::mc_probability(s, tau, {hbar}, {seed}, n));
        },
        py::arg("A_tilde"), py::arg("B_tilde"), py::arg("tau"), py::arg("mode") = "uniform_argument",
        py::arg("hbar") = 1.0, py::arg("seed") = 1, py::arg("n") = 100000);
    m.def(
        "expected_probability",
        [](double A_tilde, double B_tilde, double tau, const std::string &mode, double hbar) {
            const stochastic_model::StochasticInteraction s{A_tilde, B_tilde,
                                                            stochastic_model::sampling_mode_from_string(mode)};
            return stochastic_model::expected_probability(s, tau, {hbar});
        },
        py::arg("A_tilde"), py::arg("B_tilde"), py::arg("tau"), py::arg("mode") = "uniform_argument",
        py::arg("hbar") = 1.0);
    m.def("avg_cos_analytic", &stochastic_model::avg_cos_analytic, py::arg("xi"));

    m.def(
        "brute_force_exact_cover",
        [](std::size_t n, const std::vector<reduction::Clause> &clauses) {
            std::vector<std::string> out;
            for (auto z : reduction::brute_force_exact_cover(make_instance(n, clauses))) {
                out.push_back(reduction::bitstring(z, n));
            }
            return out;
        },
        py::arg("n"), py::arg("clauses"));
    m.def(
        "adiabatic_run",
        [](std::size_t n, const std::vector<reduction::Clause> &clauses, double T, std::size_t steps, double hbar) {
            const auto inst = make_instance(n, clauses);
            const auto o = reduction::adiabatic_run(inst, {T, steps}, {hbar});
            py::dict d;
            d["success_probability"] = o.success_probability;
            d["most_probable"] = reduction::bitstring(o.most_probable, n);
            d["most_probable_weight"] = o.most_probable_weight;
            d["most_probable_satisfies"] = o.most_probable_satisfies;
            d["probabilities"] = Eigen::VectorXd(o.final_state.probabilities());
            d["warnings"] = o.warnings;
            return d;
        },
        py::arg("n"), py::arg("clauses"), py::arg("T"), py::arg("steps"), py::arg("hbar") = 1.0);

    m.def(
        "harmonic_ground_energy",
        [](std::size_t grid_points, double box_length, double mass, double omega, double hbar,
           const std::string &method) {
            const auto inst = reduction::harmonic_instance(grid_points, box_length, mass, omega, 0.0);
            const auto h = reduction::reduce_energy_decision(inst, {hbar}).first;
            return reduction::ground_energy(h, reduction::ground_method_from_string(method));
        },
        py::arg("grid_points"), py::arg("box_length"), py::arg("mass") = 1.0, py::arg("omega") = 1.0,
        py::arg("hbar") = 1.0, py::arg("method") = "dense");
    m.def(
        "decide_pi_E",
        [](std::vector<double> potential, double box_length, double mass, double E_B, double hbar) {
            reduction::SpectralDecisionInstance inst;
            inst.grid_points = potential.size();
            inst.box_length = box_length;
            inst.mass = mass;
            inst.potential = std::move(potential);
            inst.E_B = E_B;
            return reduction::decide_pi_E(inst, {hbar});
        },
        py::arg("potential"), py::arg("box_length"), py::arg("mass"), py::arg("E_B"), py::arg("hbar") = 1.0);

    m.def(
        "run_experiment",
        [](const std::string &experiment, const std::string &config_json) {
            const auto kind = cli::experiment_from_string(experiment);
            const auto cfg = cli::parse_config(kind, nlohmann::json::parse(config_json));
            return cli::record_to_json(cli::run(cfg)).dump();
        },
        py::arg("experiment"), py::arg("config_json") = "{}",
        "Runs one experiment from a JSON config string and returns the JSON result record.");
}
