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

/// @file spectral.hpp
/// Energy-threshold decision problem for one particle on a 1D grid.
///
/// "Is there a state with energy E <= E_B?" is decided by discretizing
/// -hbar^2/(2m) d^2/dx^2 + V with central differences on a hard box and
/// comparing its lowest eigenvalue to E_B. A candidate answer (psi, E) is
/// checked by verify_eigenpair in time quadratic in the grid size.

#include <cstddef>
#include <string>
#include <vector>

#include "clab/qcore.hpp"

namespace clab::reduction {

/// Grid points x_j = -L/2 + (j + 1) dx, j = 0..N-1, with dx = L / (N + 1);
/// the wavefunction vanishes at x = +-L/2.
struct SpectralDecisionInstance {
    std::size_t grid_points = 0;
    double box_length = 0.0;
    double mass = 1.0;
    std::vector<double> potential;  // one value per grid point
    double E_B = 0.0;

    void validate() const;
    double spacing() const { return box_length / static_cast<double>(grid_points + 1); }
    std::vector<double> positions() const;
};

/// V(x) = 1/2 m omega^2 x^2 + offset sampled on the instance grid.
SpectralDecisionInstance harmonic_instance(std::size_t grid_points, double box_length, double mass,
                                           double omega, double E_B, double offset = 0.0);

/// Symmetric tridiagonal matrix; kept in banded form and expanded on demand.
class GridHamiltonian {
  public:
    GridHamiltonian(Eigen::VectorXd diagonal, double off_diagonal);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(diag_.size()); }
    const Eigen::VectorXd &diagonal() const noexcept { return diag_; }
    double off_diagonal() const noexcept { return off_; }

    Eigen::MatrixXd dense() const;
    HermitianOperator to_operator() const;

    Eigen::VectorXd apply(const Eigen::VectorXd &v) const;
    Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;

    /// Gershgorin interval [lo, hi] containing the spectrum.
    std::pair<double, double> gershgorin() const;
    /// max(|lo|, |hi|) of the Gershgorin interval; bounds the spectral norm.
    double norm_bound() const;

    /// All eigenpairs, ascending, by the symmetric QR solver.
    Eigensystem eigensystem() const;

  private:
    Eigen::VectorXd diag_;
    double off_;
};

/// Builds the discretized Hamiltonian and passes the threshold through.
std::pair<GridHamiltonian, double> reduce_energy_decision(const SpectralDecisionInstance &inst,
                                                          const PhysicalConstants &c = {});

enum class GroundMethod { dense, inverse_iteration };

std::string to_string(GroundMethod method);
GroundMethod ground_method_from_string(const std::string &name);

struct GroundState {
    double energy = 0.0;
    Eigen::VectorXd vector;                // unit norm
    GroundMethod method = GroundMethod::dense;  // method that produced the result
    std::size_t iterations = 0;            // inverse iteration only
    std::vector<std::string> notices;      // e.g. fallback from inverse iteration
};

/// Lowest eigenpair. The inverse-iteration path shifts to the lower
/// Gershgorin bound and falls back to the dense solver with a notice if it
/// does not converge. Rejects dim > 4096.
GroundState ground_state(const GridHamiltonian &h, GroundMethod method = GroundMethod::dense);

double ground_energy(const GridHamiltonian &h, GroundMethod method = GroundMethod::dense);

/// ground_energy <= E_B + 1e-9 * max(1, |E_B|).
bool decide_pi_E(const SpectralDecisionInstance &inst, const PhysicalConstants &c = {},
                 GroundMethod method = GroundMethod::dense);

/// ||H psi - E psi||_2.
double eigen_residual(const GridHamiltonian &h, const StateVector &psi, double E);
double eigen_residual(const HermitianOperator &h, const StateVector &psi, double E);

/// residual <= tol. psi must be normalized (1e-10) and match the dimension.
bool verify_eigenpair(const GridHamiltonian &h, const StateVector &psi, double E, double tol);
bool verify_eigenpair(const HermitianOperator &h, const StateVector &psi, double E, double tol);

}  // namespace clab::reduction
