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

#include "clab/stochastic_model.hpp"

#include <cmath>
#include <numbers>

namespace clab::stochastic_model {

namespace {

void check_tau(double tau) {
    if (!std::isfinite(tau) || tau < 0.0) {
        throw std::invalid_argument("tau must be finite and >= 0");
    }
}

}  // namespace

std::string to_string(SamplingMode mode) {
    return mode == SamplingMode::uniform_argument ? "uniform_argument" : "independent_uniform";
}

SamplingMode sampling_mode_from_string(const std::string &name) {
    if (name == "uniform_argument") {
        return SamplingMode::uniform_argument;
    }
    if (name == "independent_uniform") {
        return SamplingMode::independent_uniform;
    }
    throw std::invalid_argument("unknown sampling mode '" + name +
                                "' (expected uniform_argument or independent_uniform)");
}

void StochasticInteraction::validate() const {
    if (!std::isfinite(A_tilde) || !std::isfinite(B_tilde) || A_tilde < 0.0 || B_tilde < 0.0) {
        throw std::invalid_argument("StochasticInteraction: A_tilde and B_tilde must be finite and >= 0");
    }
}

StateVector StochasticSolution::to_state() const {
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::VectorXcd v(2);
    v << std::polar(s, c0_phase), std::polar(s, c1_phase);
    return StateVector(std::move(v), BasisLabel::qubit);
}

EnergySample sample_energies(const StochasticInteraction &s, stochastics::RandomSeed seed,
                             std::uint64_t index) {
    s.validate();
    stochastics::CounterStream rng(seed, index);
    if (s.mode == SamplingMode::uniform_argument) {
        const double span = s.A_tilde + s.B_tilde;
        return {rng.uniform({-span, span}), 0.0};
    }
    const double alpha = rng.uniform({-s.A_tilde, s.A_tilde});
    const double beta = rng.uniform({-s.B_tilde, s.B_tilde});
    return {alpha, beta};
}

HermitianOperator stochastic_hamiltonian(const StochasticInteraction &s, const EnergySample &sample) {
    s.validate();
    Eigen::VectorXd e(2);
    e << s.A_tilde + sample.alpha, s.B_tilde + sample.beta;
    return HermitianOperator::diagonal(std::move(e));
}

StochasticSolution evolve_stochastic(const StochasticInteraction &s, const EnergySample &sample,
                                     double tau, const PhysicalConstants &c) {
    check_tau(tau);
    c.validate();
    return {-tau * (s.A_tilde + sample.alpha) / c.hbar, -tau * (s.B_tilde + sample.beta) / c.hbar};
}

double overlap_probability(const StochasticInteraction &s, const EnergySample &sample, double tau,
                           const PhysicalConstants &c) {
    check_tau(tau);
    c.validate();
    const double big = (s.A_tilde - s.B_tilde) * tau / c.hbar;
    const double small = (sample.alpha - sample.beta) * tau / c.hbar;
    return 0.5 + 0.5 * std::cos(big) * std::cos(small) - 0.5 * std::sin(big) * std::sin(small);
}

double xi_max(const StochasticInteraction &s, double tau, const PhysicalConstants &c) {
    check_tau(tau);
    c.validate();
    s.validate();
    return (s.A_tilde + s.B_tilde) * tau / c.hbar;
}

double avg_cos_analytic(double xi) {
    if (!std::isfinite(xi) || xi < 0.0) {
        throw std::invalid_argument("avg_cos_analytic: xi must be finite and >= 0");
    }
    if (xi < 1e-4) {
        return 1.0 - xi * xi / 6.0;
    }
    return std::sin(xi) / xi;
}

double expected_probability(const StochasticInteraction &s, double tau, const PhysicalConstants &c) {
    const double big = (s.A_tilde - s.B_tilde) * tau / c.hbar;
    double envelope = 0.0;
    if (s.mode == SamplingMode::uniform_argument) {
        envelope = avg_cos_analytic(xi_max(s, tau, c));
    } else {
        check_tau(tau);
        envelope = avg_cos_analytic(s.A_tilde * tau / c.hbar) * avg_cos_analytic(s.B_tilde * tau / c.hbar);
    }
    return 0.5 + 0.5 * std::cos(big) * envelope;
}

stochastics::MonteCarloEstimate mc_probability(const StochasticInteraction &s, double tau,
                                               const PhysicalConstants &c, stochastics::RandomSeed seed,
                                               std::uint64_t n, unsigned threads) {
    s.validate();
    check_tau(tau);
    c.validate();
    auto trial = [&](stochastics::RandomSeed sd, std::uint64_t i) {
        return overlap_probability(s, sample_energies(s, sd, i), tau, c);
    };
    return stochastics::mc_mean(trial, n, seed, threads);
}

}  // namespace clab::stochastic_model
