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

/// @file exact_cover.hpp
/// Exact Cover encoded for adiabatic evolution.
///
/// An instance is a set of clauses over n bits; a clause (i, j, k) is
/// satisfied when exactly one of z_i, z_j, z_k is 1. The cost Hamiltonian is
/// diagonal in the bitstring basis and counts violated clauses. The begin
/// Hamiltonian sum_i d_i (1 - sigma_x^(i)) / 2, with d_i the number of clauses
/// touching bit i, has the uniform superposition as a zero-energy ground
/// state. Evolution follows H(t) = (1 - t/T) H_begin + (t/T) H_cost.
///
/// Bit convention: variable i (1-based) is bit n - i of the basis index, so
/// the printed bitstring reads z_1 z_2 ... z_n left to right.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "clab/qcore.hpp"

namespace clab::reduction {

using Clause = std::array<std::size_t, 3>;

class ExactCoverInstance {
  public:
    /// Validates 1 <= i < j < k <= n and rejects duplicate clauses.
    ExactCoverInstance(std::size_t n, std::vector<Clause> clauses);

    std::size_t n() const noexcept { return n_; }
    const std::vector<Clause> &clauses() const noexcept { return clauses_; }

    /// True when every clause has exactly one bit set in basis index z.
    bool satisfies(std::uint64_t z) const;
    /// Number of clauses violated by z.
    std::size_t violations(std::uint64_t z) const;

    /// Per-bit clause membership counts d_i (index 0 is bit 1).
    std::vector<std::size_t> membership() const;

    friend bool operator==(const ExactCoverInstance &, const ExactCoverInstance &) = default;

  private:
    std::size_t n_;
    std::vector<Clause> clauses_;
};

/// {"n": int, "clauses": [[i, j, k], ...]}, 1-based. Throws ConfigError with a field path.
ExactCoverInstance instance_from_json(const nlohmann::json &j);
nlohmann::json instance_to_json(const ExactCoverInstance &inst);
ExactCoverInstance load_instance(const std::filesystem::path &path);

/// Bit value of variable i (1-based) in basis index z.
int bit_of(std::uint64_t z, std::size_t i, std::size_t n);
std::string bitstring(std::uint64_t z, std::size_t n);
std::uint64_t index_of(const std::string &bits);

/// Every satisfying basis index, ascending. Rejects n > 24.
std::vector<std::uint64_t> brute_force_exact_cover(const ExactCoverInstance &inst);

struct CostHamiltonian {
    std::size_t n = 0;
    std::vector<double> energies;  // violated-clause count per basis index

    HermitianOperator to_operator() const;
    double ground_energy() const;
    /// Basis indices attaining the minimum energy, ascending.
    std::vector<std::uint64_t> ground_states() const;
};

class BeginHamiltonian {
  public:
    BeginHamiltonian(std::size_t n, std::vector<std::size_t> d);

    std::size_t n() const noexcept { return n_; }
    const std::vector<std::size_t> &membership() const noexcept { return d_; }

    /// Matrix-free product.
    Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;
    /// Dense operator; rejects n > 12.
    HermitianOperator to_operator() const;
    /// Largest eigenvalue, sum_i d_i.
    double spectral_norm() const;

  private:
    std::size_t n_;
    std::vector<std::size_t> d_;
};

/// Violated-clause counts; rejects n > 24.
CostHamiltonian build_cost_hamiltonian(const ExactCoverInstance &inst);
/// Rejects n > 14.
BeginHamiltonian build_begin_hamiltonian(const ExactCoverInstance &inst);

/// (1 - t/T) h0 + (t/T) hc for t in [0, T]; the endpoints return copies of
/// h0 and hc.
HermitianOperator interpolate(const HermitianOperator &h0, const HermitianOperator &hc, double t,
                              double T);

struct AdiabaticSchedule {
    double T = 1.0;
    std::size_t steps = 1;

    void validate() const;
};

/// ceil(factor * T * max_energy / hbar), at least 1, where max_energy is
/// max(||H_begin||, ||H_cost||).
std::size_t recommended_steps(const ExactCoverInstance &inst, double T, const PhysicalConstants &c = {},
                              double factor = 10.0);

struct AdiabaticOutcome {
    StateVector final_state;
    double success_probability = 0.0;
    std::uint64_t most_probable = 0;
    double most_probable_weight = 0.0;
    bool most_probable_satisfies = false;
    double norm_drift = 0.0;
    std::vector<std::string> warnings;
};

/// Starts from the uniform superposition and integrates the interpolated
/// Hamiltonian. success_probability is the final weight on satisfying
/// bitstrings. The Krylov method applies H(t) matrix-free and accepts
/// n <= 14; the eigendecomposition method is dense and accepts n <= 12.
AdiabaticOutcome adiabatic_run(const ExactCoverInstance &inst, const AdiabaticSchedule &schedule,
                               const PhysicalConstants &c = {}, const TdseOptions &options = {});

struct SweepOptions {
    double T_min = 1.0;
    double T_max = 256.0;
    double target = 0.9;
    double steps_factor = 10.0;
    std::size_t min_steps = 16;
    /// Keep doubling to T_max even after the target is reached.
    bool full_sweep = false;
};

struct SweepPoint {
    double T = 0.0;
    std::size_t steps = 0;
    double success_probability = 0.0;
    std::uint64_t most_probable = 0;
    bool most_probable_satisfies = false;
    double norm_drift = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    bool reached_target = false;
    std::optional<AdiabaticOutcome> final_outcome;
};

/// T = T_min, 2 T_min, 4 T_min, ... while T <= T_max.
SweepResult adiabatic_sweep(const ExactCoverInstance &inst, const SweepOptions &options,
                            const PhysicalConstants &c = {});

}  // namespace clab::reduction
