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

/// @file qcore.hpp
/// Complex linear algebra and unitary dynamics shared by every model:
/// state vectors, Hermitian operators (dense or diagonal), exact and
/// first-order propagators, and a midpoint-exponential TDSE integrator.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clab/errors.hpp"

namespace clab {

using Complex = std::complex<double>;

struct PhysicalConstants {
    double hbar = 1.0;

    void validate() const;
};

enum class BasisLabel { qubit, detector, product, bitstring, grid };

std::string to_string(BasisLabel label);

// -----------------------------------------------------------------------------
// StateVector
// -----------------------------------------------------------------------------

/// Complex amplitude vector over a finite basis. Construction checks that
/// every amplitude is finite and that the dimension fits the basis label
/// (2 for qubit, a power of two for bitstring). Normalization is not
/// enforced at construction; operations that need it check it.
class StateVector {
  public:
    StateVector(Eigen::VectorXcd amps, BasisLabel basis);

    static StateVector basis_state(std::size_t dim, std::size_t index, BasisLabel basis);

    /// Uniform superposition (1/sqrt(dim)) over all basis states.
    static StateVector uniform(std::size_t dim, BasisLabel basis);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    BasisLabel basis() const noexcept { return basis_; }
    const Eigen::VectorXcd &amplitudes() const noexcept { return amps_; }
    Complex operator[](std::size_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }

    double norm() const { return amps_.norm(); }
    bool is_normalized(double tol = 1e-10) const;

    /// Returns a copy scaled to unit norm. Throws NumericalError on a zero vector.
    StateVector normalized() const;

    /// Per-basis-state probabilities |amp_i|^2.
    Eigen::VectorXd probabilities() const { return amps_.cwiseAbs2(); }

  private:
    Eigen::VectorXcd amps_;
    BasisLabel basis_;
};

// -----------------------------------------------------------------------------
// HermitianOperator
// -----------------------------------------------------------------------------

struct Eigensystem {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // columns are eigenvectors
};

/// Finite-dimensional Hermitian operator in either a diagonal (real entries)
/// or a dense representation. Dense inputs are checked for M = M^dagger at
/// construction; dense operators whose entries are all real are additionally
/// kept as a real symmetric matrix for faster products.
class HermitianOperator {
  public:
    static HermitianOperator diagonal(Eigen::VectorXd entries);
    static HermitianOperator dense(Eigen::MatrixXcd matrix, double tol = 1e-12);
    static HermitianOperator dense(const Eigen::MatrixXd &matrix, double tol = 1e-12);
    static HermitianOperator zero(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    bool is_diagonal() const noexcept { return diag_.has_value(); }
    bool is_real() const noexcept { return diag_.has_value() || real_.has_value(); }

    /// Diagonal entries. Only valid for the diagonal representation.
    const Eigen::VectorXd &diagonal_entries() const;

    Eigen::MatrixXcd to_dense() const;

    /// Entry (i, j) regardless of representation.
    Complex entry(std::size_t i, std::size_t j) const;

    Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;
    StateVector apply(const StateVector &psi) const;

    /// <psi|H|psi>; real by Hermiticity.
    double expectation(const StateVector &psi) const;

    /// max |M - M^dagger| over entries (0 for the diagonal representation).
    double hermiticity_defect() const;

    /// Largest absolute eigenvalue.
    double spectral_norm() const;

    /// Full eigendecomposition. Throws NumericalError on solver failure.
    Eigensystem eigensystem() const;

    /// a * this + b * other, preserving the diagonal representation when both are diagonal.
    static HermitianOperator linear_combination(double a, const HermitianOperator &lhs, double b,
                                                const HermitianOperator &rhs);

  private:
    HermitianOperator() = default;

    std::size_t dim_ = 0;
    std::optional<Eigen::VectorXd> diag_;
    std::optional<Eigen::MatrixXd> real_;
    std::optional<Eigen::MatrixXcd> complex_;
};

// -----------------------------------------------------------------------------
// Propagators
// -----------------------------------------------------------------------------

/// exp(-i dt H / hbar). A diagonal generator yields a diagonal propagator
/// that is only materialized on request.
class UnitaryPropagator {
  public:
    static UnitaryPropagator from_diagonal(Eigen::VectorXcd phases);
    static UnitaryPropagator from_dense(Eigen::MatrixXcd matrix);

    std::size_t dim() const noexcept { return dim_; }
    bool is_diagonal() const noexcept { return diag_.has_value(); }

    Eigen::MatrixXcd matrix() const;
    Complex entry(std::size_t i, std::size_t j) const;

    StateVector apply(const StateVector &psi) const;

    /// this * other (apply `other` first).
    UnitaryPropagator compose(const UnitaryPropagator &other) const;

    /// max |U^dagger U - I| over entries.
    double unitarity_defect() const;

  private:
    UnitaryPropagator() = default;

    std::size_t dim_ = 0;
    std::optional<Eigen::VectorXcd> diag_;
    std::optional<Eigen::MatrixXcd> dense_;
};

/// First-order form I - i dt H / hbar. Generally not unitary; the defect
/// max|U^dagger U - I| is recorded so callers can report norm growth.
struct FirstOrderPropagator {
    Eigen::MatrixXcd matrix;
    double unitarity_defect = 0.0;

    bool is_unitary(double tol) const { return unitarity_defect <= tol; }
};

Complex inner_product(const StateVector &a, const StateVector &b);

/// Kronecker product with `a`'s index major: out[i * b.dim() + j] = a[i] * b[j].
StateVector tensor_product(const StateVector &a, const StateVector &b);

UnitaryPropagator expm_propagator(const HermitianOperator &h, double dt,
                                  const PhysicalConstants &c = {});

FirstOrderPropagator first_order_propagator(const HermitianOperator &h, double dt,
                                            const PhysicalConstants &c = {});

// -----------------------------------------------------------------------------
// Time-dependent Schrodinger equation
// -----------------------------------------------------------------------------

/// How a dense step exponential is applied to the state. Diagonal operators
/// always use the exact entrywise phase.
enum class StepExponential { krylov, eigen };

struct TdseOptions {
    StepExponential method = StepExponential::krylov;
    /// Per-step error target for the Krylov action.
    double krylov_tol = 1e-13;
};

struct TdseResult {
    StateVector state;            // renormalized
    double norm_drift = 0.0;      // | ||psi|| - 1 | before renormalization
    std::vector<std::string> warnings;
};

using TimeDependentOperator = std::function<HermitianOperator(double)>;

/// Midpoint-exponential stepping:
///   psi_{j+1} = exp(-i dt H(t_j + dt/2) / hbar) psi_j,  dt = t_final / steps.
/// A norm drift above 1e-6 adds a warning suggesting more steps.
TdseResult integrate_tdse(const TimeDependentOperator &h_of_t, const StateVector &psi0,
                          double t_final, std::size_t steps, const PhysicalConstants &c = {},
                          const TdseOptions &options = {});

/// Applies exp(-i dt H / hbar) to `v` with a Lanczos approximation whose
/// estimated error is below `tol` (relative to ||v||). Sub-steps the
/// interval when the Krylov space does not converge.
Eigen::VectorXcd krylov_expm_apply(const HermitianOperator &h, double dt,
                                   const Eigen::VectorXcd &v, const PhysicalConstants &c = {},
                                   double tol = 1e-13);

/// y = H v for an operator known only through its action.
using LinearMap = std::function<Eigen::VectorXcd(const Eigen::VectorXcd &)>;

/// Same as above for a Hermitian operator given as a map.
Eigen::VectorXcd krylov_expm_apply(const LinearMap &h, double dt, const Eigen::VectorXcd &v,
                                   const PhysicalConstants &c = {}, double tol = 1e-13);

}  // namespace clab
