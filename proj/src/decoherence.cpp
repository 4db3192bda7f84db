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

#include "clab/decoherence.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace clab::decoherence {

namespace {

void check_tau(double tau) {
    if (!std::isfinite(tau) || tau < 0.0) {
        throw std::invalid_argument("tau must be finite and >= 0");
    }
}

}  // namespace

StateVector QubitState::to_state() const {
    Eigen::VectorXcd v(2);
    v << c0, c1;
    return StateVector(std::move(v), BasisLabel::qubit);
}

DetectorModel::DetectorModel(std::vector<Complex> a, std::vector<double> A, std::vector<double> B)
    : a_(std::move(a)), A_(std::move(A)), B_(std::move(B)) {
    if (a_.empty()) {
        throw std::invalid_argument("DetectorModel: K must be >= 1");
    }
    if (A_.size() != a_.size() || B_.size() != a_.size()) {
        throw std::invalid_argument("DetectorModel: a, A, B must have equal length (" +
                                    std::to_string(a_.size()) + ", " + std::to_string(A_.size()) +
                                    ", " + std::to_string(B_.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) {
        if (!std::isfinite(a_[k].real()) || !std::isfinite(a_[k].imag()) || !std::isfinite(A_[k]) ||
            !std::isfinite(B_[k])) {
            throw std::invalid_argument("DetectorModel: non-finite entry at k=" + std::to_string(k));
        }
        total += std::norm(a_[k]);
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw std::invalid_argument("DetectorModel: sum |a_k|^2 = " + std::to_string(total) +
                                    " is not 1 within 1e-10");
    }
}

StateVector DetectorModel::initial_state() const {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(a_.size()));
    for (std::size_t k = 0; k < a_.size(); ++k) {
        v[static_cast<Eigen::Index>(k)] = a_[k];
    }
    return StateVector(std::move(v), BasisLabel::detector);
}

QubitState initial_superposition() {
    const double s = 1.0 / std::numbers::sqrt2;
    return {Complex(s, 0.0), Complex(s, 0.0)};
}

HermitianOperator build_interaction(const DetectorModel &d) {
    const auto K = static_cast<Eigen::Index>(d.size());
    Eigen::VectorXd e(2 * K);
    for (Eigen::Index k = 0; k < K; ++k) {
        e[k] = d.energies_zero()[static_cast<std::size_t>(k)];
        e[K + k] = d.energies_one()[static_cast<std::size_t>(k)];
    }
    return HermitianOperator::diagonal(std::move(e));
}

StateVector propagate_exact(const DetectorModel &d, double tau, const PhysicalConstants &c) {
    check_tau(tau);
    const StateVector psi_i = tensor_product(initial_superposition().to_state(), d.initial_state());
    return expm_propagator(build_interaction(d), tau, c).apply(psi_i);
}

MeasurementResult prob_closed_form(const DetectorModel &d, double tau, const PhysicalConstants &c) {
    check_tau(tau);
    c.validate();
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double w = std::norm(d.amplitudes()[k]);
        const double cs = std::cos((d.energies_zero()[k] - d.energies_one()[k]) * tau / (2.0 * c.hbar));
        num += w * cs * cs;
        den += w;
    }
    return {num / den, ProbabilityMethod::closed_form};
}

MeasurementResult prob_full_propagation(const DetectorModel &d, double tau, const PhysicalConstants &c) {
    const StateVector psi_f = propagate_exact(d, tau, c);
    const StateVector psi0 = initial_superposition().to_state();
    const std::size_t K = d.size();
    double p = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const StateVector probe = tensor_product(psi0, StateVector::basis_state(K, k, BasisLabel::detector));
        p += std::norm(inner_product(probe, psi_f));
    }
    return {p, ProbabilityMethod::full_propagation};
}

DetectorModel sample_random_detector(std::size_t K, double energy_scale, stochastics::RandomSeed seed) {
    if (K < 1) {
        throw std::invalid_argument("sample_random_detector: K must be >= 1");
    }
    if (!(energy_scale > 0.0) || !std::isfinite(energy_scale)) {
        throw std::invalid_argument("sample_random_detector: energy_scale must be finite and > 0");
    }
    std::vector<Complex> a(K);
    std::vector<double> A(K);
    std::vector<double> B(K);
    const stochastics::UniformInterval range{0.0, energy_scale};
    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        stochastics::CounterStream rng(seed, k);
        a[k] = Complex(rng.normal(), rng.normal());
        A[k] = rng.uniform(range);
        B[k] = rng.uniform(range);
        total += std::norm(a[k]);
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto &x : a) {
        x *= scale;
    }
    return DetectorModel(std::move(a), std::move(A), std::move(B));
}

stochastics::MonteCarloEstimate decohered_probability(std::size_t K, double energy_scale, double tau,
                                                      const PhysicalConstants &c,
                                                      stochastics::RandomSeed seed,
                                                      std::uint64_t trials, unsigned threads) {
    if (trials < 1) {
        throw std::invalid_argument("decohered_probability: trials must be >= 1");
    }
    check_tau(tau);
    c.validate();
    auto trial = [&](stochastics::RandomSeed s, std::uint64_t t) {
        const DetectorModel d = sample_random_detector(K, energy_scale, stochastics::derive_seed(s, t));
        return prob_closed_form(d, tau, c).probability;
    };
    return stochastics::mc_mean_any(trial, trials, seed, threads);
}

}  // namespace clab::decoherence
