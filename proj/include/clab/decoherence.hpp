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

/// @file decoherence.hpp
/// Von Neumann measurement of a spin-1/2 test particle by a detector with K
/// pointer configurations |e_k>. The interaction is diagonal in the product
/// basis: energy A_k on |0>|e_k> and B_k on |1>|e_k>. The probability of
/// finding the particle back in (|0> + |1>)/sqrt(2) is computed in closed
/// form and, independently, by propagating the full product state.

#include <cstddef>
#include <vector>

#include "clab/qcore.hpp"
#include "clab/stochastics.hpp"

namespace clab::decoherence {

struct QubitState {
    Complex c0;
    Complex c1;

    StateVector to_state() const;
};

/// Detector initial state sum_k a_k |e_k> together with the interaction
/// energies. Validated on construction: K >= 1, sum |a_k|^2 = 1 (1e-10),
/// all values finite.
class DetectorModel {
  public:
    DetectorModel(std::vector<Complex> a, std::vector<double> A, std::vector<double> B);

    std::size_t size() const noexcept { return a_.size(); }
    const std::vector<Complex> &amplitudes() const noexcept { return a_; }
    const std::vector<double> &energies_zero() const noexcept { return A_; }
    const std::vector<double> &energies_one() const noexcept { return B_; }

    StateVector initial_state() const;

  private:
    std::vector<Complex> a_;
    std::vector<double> A_;
    std::vector<double> B_;
};

enum class ProbabilityMethod { closed_form, full_propagation, averaged };

struct MeasurementResult {
    double probability = 0.0;
    ProbabilityMethod method = ProbabilityMethod::closed_form;
};

/// (1/sqrt(2), 1/sqrt(2)).
QubitState initial_superposition();

/// Diagonal operator on the 2K-dim product basis; index q*K + k carries
/// A_k for q = 0 and B_k for q = 1.
HermitianOperator build_interaction(const DetectorModel &d);

/// exp(-i tau H_int / hbar) applied to initial_superposition() (x) detector state.
StateVector propagate_exact(const DetectorModel &d, double tau, const PhysicalConstants &c = {});

/// sum_k |a_k|^2 cos^2((A_k - B_k) tau / 2 hbar), normalized by sum_k |a_k|^2.
MeasurementResult prob_closed_form(const DetectorModel &d, double tau, const PhysicalConstants &c = {});

/// sum_k |<psi0 (x) e_k | Psi_f>|^2 with Psi_f from propagate_exact.
MeasurementResult prob_full_propagation(const DetectorModel &d, double tau,
                                        const PhysicalConstants &c = {});

/// a_k: complex standard normal draws, normalized. A_k, B_k: uniform on [0, energy_scale].
DetectorModel sample_random_detector(std::size_t K, double energy_scale, stochastics::RandomSeed seed);

/// Mean of prob_closed_form over `trials` independent random detectors.
/// Trial t uses derive_seed(seed, t).
stochastics::MonteCarloEstimate decohered_probability(std::size_t K, double energy_scale, double tau,
                                                      const PhysicalConstants &c,
                                                      stochastics::RandomSeed seed,
                                                      std::uint64_t trials, unsigned threads = 0);

}  // namespace clab::decoherence
