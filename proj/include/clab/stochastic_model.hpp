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

#pragma once

/// @file stochastic_model.hpp
/// Measurement with a stochastic interaction Hamiltonian
///   H(w) = (A~ + alpha(w)) |0><0| + (B~ + beta(w)) |1><1|
/// acting trivially on the detector. One draw (alpha, beta) per experiment
/// instance w, constant over the interaction time tau.

#include <cstdint>
#include <string>

#include "clab/qcore.hpp"
#include "clab/stochastics.hpp"

namespace clab::stochastic_model {

/// uniform_argument: alpha - beta drawn directly from U[-(A~+B~), A~+B~].
/// independent_uniform: alpha ~ U[-A~, A~] and beta ~ U[-B~, B~] independently.
enum class SamplingMode { uniform_argument, independent_uniform };

std::string to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string &name);

struct StochasticInteraction {
    double A_tilde = 0.0;
    double B_tilde = 0.0;
    SamplingMode mode = SamplingMode::uniform_argument;

    void validate() const;
};

/// In uniform_argument mode the drawn difference is stored in alpha and beta is 0.
struct EnergySample {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Phases of the two 1/sqrt(2) components of the evolved qubit.
struct StochasticSolution {
    double c0_phase = 0.0;
    double c1_phase = 0.0;

    StateVector to_state() const;
};

EnergySample sample_energies(const StochasticInteraction &s, stochastics::RandomSeed seed,
                             std::uint64_t index);

/// diag(A~ + alpha, B~ + beta) on the qubit basis.
HermitianOperator stochastic_hamiltonian(const StochasticInteraction &s, const EnergySample &sample);

StochasticSolution evolve_stochastic(const StochasticInteraction &s, const EnergySample &sample,
                                     double tau, const PhysicalConstants &c = {});

/// |<psi0|psi_tau(w)>|^2 through the trigonometric expansion
///   1/2 + 1/2 cos(D tau/hbar) cos(d tau/hbar) - 1/2 sin(D tau/hbar) sin(d tau/hbar),
/// with D = A~ - B~ and d = alpha - beta.
double overlap_probability(const StochasticInteraction &s, const EnergySample &sample, double tau,
                           const PhysicalConstants &c = {});

/// (A~ + B~) tau / hbar.
double xi_max(const StochasticInteraction &s, double tau, const PhysicalConstants &c = {});

/// sin(xi)/xi, with 1 - xi^2/6 below 1e-4.
double avg_cos_analytic(double xi);

/// Closed-form expectation of overlap_probability for the interaction's mode.
/// uniform_argument: 1/2 + 1/2 cos(D tau/hbar) sinc(xi_max).
/// independent_uniform: 1/2 + 1/2 cos(D tau/hbar) sinc(A~ tau/hbar) sinc(B~ tau/hbar).
double expected_probability(const StochasticInteraction &s, double tau, const PhysicalConstants &c = {});

stochastics::MonteCarloEstimate mc_probability(const StochasticInteraction &s, double tau,
                                               const PhysicalConstants &c, stochastics::RandomSeed seed,
                                               std::uint64_t n, unsigned threads = 0);

}  // namespace clab::stochastic_model
