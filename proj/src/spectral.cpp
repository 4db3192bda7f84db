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

#include "clab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace clab::reduction {

namespace {

constexpr std::size_t kMaxGridPoints = 4096;
constexpr std::size_t kMaxInverseIterations = 20000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_state(std::size_t dim, const StateVector &psi) {
    if (psi.dim() != dim) {
        throw std::invalid_argument("verify_eigenpair: dimension mismatch (operator " + std::to_string(dim) +
                                    ", state " + std::to_string(psi.dim()) + ")");
    }
    if (!psi.is_normalized()) {
        throw std::invalid_argument("verify_eigenpair: state is not normalized");
    }
}

/// LDL^T pivots of the tridiagonal H - sigma I; empty if not positive definite.
std::optional<Eigen::VectorXd> factor_shifted(const GridHamiltonian &h, double sigma) {
    const Eigen::Index n = h.diagonal().size();
    const double e2 = h.off_diagonal() * h.off_diagonal();
    Eigen::VectorXd piv(n);
    piv[0] = h.diagonal()[0] - sigma;
    if (!(piv[0] > 0.0)) {
        return std::nullopt;
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        piv[i] = h.diagonal()[i] - sigma - e2 / piv[i - 1];
        if (!(piv[i] > 0.0)) {
            return std::nullopt;
        }
    }
    return piv;
}

Eigen::VectorXd solve_shifted(const Eigen::VectorXd &piv, double off, const Eigen::VectorXd &rhs) {
    const Eigen::Index n = rhs.size();
    Eigen::VectorXd y = rhs;
    for (Eigen::Index i = 1; i < n; ++i) {
        y[i] -= off / piv[i - 1] * y[i - 1];
    }
    y[n - 1] /= piv[n - 1];
    for (Eigen::Index i = n - 2; i >= 0; --i) {
        y[i] = (y[i] - off * y[i + 1]) / piv[i];
    }
    return y;
}

GroundState dense_ground(const GridHamiltonian &h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(h.diagonal().size() - 1, h.off_diagonal());
    es.computeFromTridiagonal(h.diagonal(), sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
        throw NumericalError("ground_state: symmetric tridiagonal eigensolver failed (dim " +
                             std::to_string(h.dim()) + ")");
    }
    GroundState g;
    g.energy = es.eigenvalues()[0];
    g.vector = es.eigenvectors().col(0);
    if (g.vector.sum() < 0.0) {
        g.vector = -g.vector;
    }
    g.method = GroundMethod::dense;
    return g;
}

std::optional<GroundState> inverse_iteration(const GridHamiltonian &h) {
    const double scale = std::max(1.0, h.norm_bound());
    const double sigma = h.gershgorin().first - 1e-10 * scale;
    const auto piv = factor_shifted(h, sigma);
    if (!piv) {
        return std::nullopt;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Ones(h.diagonal().size()).normalized();
    for (std::size_t it = 1; it <= kMaxInverseIterations; ++it) {
        x = solve_shifted(*piv, h.off_diagonal(), x);
        x.normalize();
        const Eigen::VectorXd hx = h.apply(x);
        const double rq = x.dot(hx);
        const double res = (hx - rq * x).norm();
        if (res <= 1e-12 * scale) {
            GroundState g;
            g.energy = rq;
            g.vector = x;
            g.iterations = it;
            // Rayleigh-shifted polish. |rq - lambda0| <= res, so the shift
            // stays below lambda0 and the factorization stays positive.
            double best = res;
            for (int k = 0; k < 4 && best > 4.0 * kEps * scale; ++k) {
                const auto p2 = factor_shifted(h, g.energy - 2.0 * best - 4.0 * kEps * scale);
                if (!p2) {
                    break;
                }
                Eigen::VectorXd y = solve_shifted(*p2, h.off_diagonal(), g.vector).normalized();
                const Eigen::VectorXd hy = h.apply(y);
                const double rq2 = y.dot(hy);
                const double res2 = (hy - rq2 * y).norm();
                ++g.iterations;
                if (!(res2 < best)) {
                    break;
                }
                best = res2;
                g.energy = rq2;
                g.vector = std::move(y);
            }
            if (g.vector.sum() < 0.0) {
                g.vector = -g.vector;
            }
            g.method = GroundMethod::inverse_iteration;
            return g;
        }
    }
    return std::nullopt;
}

}  // namespace

void SpectralDecisionInstance::validate() const {
    if (grid_points < 3) {
        throw std::invalid_argument("SpectralDecisionInstance: grid_points must be >= 3, got " +
                                    std::to_string(grid_points));
    }
    if (!(box_length > 0.0) || !std::isfinite(box_length)) {
        throw std::invalid_argument("SpectralDecisionInstance: box_length must be finite and > 0");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw std::invalid_argument("SpectralDecisionInstance: mass must be finite and > 0");
    }
    if (potential.size() != grid_points) {
        throw std::invalid_argument("SpectralDecisionInstance: potential has " + std::to_string(potential.size()) +
                                    " values for " + std::to_string(grid_points) + " grid points");
    }
    if (!std::all_of(potential.begin(), potential.end(), [](double v) { return std::isfinite(v); })) {
        throw std::invalid_argument("SpectralDecisionInstance: non-finite potential value");
    }
    if (!std::isfinite(E_B)) {
        throw std::invalid_argument("SpectralDecisionInstance: E_B must be finite");
    }
}

std::vector<double> SpectralDecisionInstance::positions() const {
    std::vector<double> x(grid_points);
    const double dx = spacing();
    for (std::size_t j = 0; j < grid_points; ++j) {
        x[j] = -0.5 * box_length + static_cast<double>(j + 1) * dx;
    }
    return x;
}

SpectralDecisionInstance harmonic_instance(std::size_t grid_points, double box_length, double mass,
                                           double omega, double E_B, double offset) {
    SpectralDecisionInstance inst{grid_points, box_length, mass, {}, E_B};
    const std::vector<double> x = inst.positions();
    inst.potential.resize(grid_points);
    for (std::size_t j = 0; j < grid_points; ++j) {
        inst.potential[j] = 0.5 * mass * omega * omega * x[j] * x[j] + offset;
    }
    return inst;
}

GridHamiltonian::GridHamiltonian(Eigen::VectorXd diagonal, double off_diagonal)
    : diag_(std::move(diagonal)), off_(off_diagonal) {
    if (diag_.size() < 1 || !diag_.allFinite() || !std::isfinite(off_)) {
        throw std::invalid_argument("GridHamiltonian: need a non-empty finite diagonal and finite coupling");
    }
}

Eigen::MatrixXd GridHamiltonian::dense() const {
    const Eigen::Index n = diag_.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m.diagonal() = diag_;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        m(i, i + 1) = off_;
        m(i + 1, i) = off_;
    }
    return m;
}

HermitianOperator GridHamiltonian::to_operator() const { return HermitianOperator::dense(dense()); }

Eigen::VectorXd GridHamiltonian::apply(const Eigen::VectorXd &v) const {
    const Eigen::Index n = diag_.size();
    if (v.size() != n) {
        throw std::invalid_argument("GridHamiltonian::apply: dimension mismatch");
    }
    Eigen::VectorXd out = diag_.cwiseProduct(v);
    out.head(n - 1) += off_ * v.tail(n - 1);
    out.tail(n - 1) += off_ * v.head(n - 1);
    return out;
}

Eigen::VectorXcd GridHamiltonian::apply(const Eigen::VectorXcd &v) const {
    Eigen::VectorXcd out(v.size());
    out.real() = apply(Eigen::VectorXd(v.real()));
    out.imag() = apply(Eigen::VectorXd(v.imag()));
    return out;
}

std::pair<double, double> GridHamiltonian::gershgorin() const {
    const Eigen::Index n = diag_.size();
    double lo = diag_[0];
    double hi = diag_[0];
    for (Eigen::Index i = 0; i < n; ++i) {
        const double radius = std::abs(off_) * ((i > 0 ? 1.0 : 0.0) + (i + 1 < n ? 1.0 : 0.0));
        lo = std::min(lo, diag_[i] - radius);
        hi = std::max(hi, diag_[i] + radius);
    }
    return {lo, hi};
}

double GridHamiltonian::norm_bound() const {
    const auto [lo, hi] = gershgorin();
    return std::max(std::abs(lo), std::abs(hi));
}

Eigensystem GridHamiltonian::eigensystem() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(diag_.size() - 1, off_);
    es.computeFromTridiagonal(diag_, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) {
        throw NumericalError("GridHamiltonian::eigensystem: solver failed (dim " + std::to_string(dim()) + ")");
    }
    return {es.eigenvalues(), es.eigenvectors().cast<Complex>()};
}

std::pair<GridHamiltonian, double> reduce_energy_decision(const SpectralDecisionInstance &inst,
                                                          const PhysicalConstants &c) {
    inst.validate();
    c.validate();
    const double dx = inst.spacing();
    const double kin = c.hbar * c.hbar / (2.0 * inst.mass * dx * dx);
    Eigen::VectorXd diag(static_cast<Eigen::Index>(inst.grid_points));
    for (std::size_t j = 0; j < inst.grid_points; ++j) {
        diag[static_cast<Eigen::Index>(j)] = 2.0 * kin + inst.potential[j];
    }
    return {GridHamiltonian(std::move(diag), -kin), inst.E_B};
}

std::string to_string(GroundMethod method) {
    return method == GroundMethod::dense ? "dense" : "inverse_iteration";
}

GroundMethod ground_method_from_string(const std::string &name) {
    if (name == "dense") {
        return GroundMethod::dense;
    }
    if (name == "inverse_iteration") {
        return GroundMethod::inverse_iteration;
    }
    throw std::invalid_argument("unknown ground-state method '" + name + "' (expected dense or inverse_iteration)");
}

GroundState ground_state(const GridHamiltonian &h, GroundMethod method) {
    if (h.dim() > kMaxGridPoints) {
        throw std::invalid_argument("ground_state: dim " + std::to_string(h.dim()) + " exceeds " +
                                    std::to_string(kMaxGridPoints));
    }
    if (h.dim() == 1) {
        GroundState g;
        g.energy = h.diagonal()[0];
        g.vector = Eigen::VectorXd::Ones(1);
        return g;
    }
    if (method == GroundMethod::inverse_iteration) {
        if (auto g = inverse_iteration(h)) {
            return *g;
        }
        GroundState g = dense_ground(h);
        g.notices.push_back("inverse iteration did not converge in " + std::to_string(kMaxInverseIterations) +
                            " iterations; fell back to the dense solver");
        return g;
    }
    return dense_ground(h);
}

double ground_energy(const GridHamiltonian &h, GroundMethod method) {
    if (method == GroundMethod::dense && h.dim() > 1 && h.dim() <= kMaxGridPoints) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        Eigen::VectorXd sub = Eigen::VectorXd::Constant(h.diagonal().size() - 1, h.off_diagonal());
        es.computeFromTridiagonal(h.diagonal(), sub, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalError("ground_energy: symmetric tridiagonal eigensolver failed");
        }
        return es.eigenvalues()[0];
    }
    return ground_state(h, method).energy;
}

bool decide_pi_E(const SpectralDecisionInstance &inst, const PhysicalConstants &c, GroundMethod method) {
    const auto [h, e_b] = reduce_energy_decision(inst, c);
    const double e0 = ground_energy(h, method);
    return e0 <= e_b + 1e-9 * std::max(1.0, std::abs(e_b));
}

double eigen_residual(const GridHamiltonian &h, const StateVector &psi, double E) {
    check_state(h.dim(), psi);
    return (h.apply(psi.amplitudes()) - E * psi.amplitudes()).norm();
}

double eigen_residual(const HermitianOperator &h, const StateVector &psi, double E) {
    check_state(h.dim(), psi);
    return (h.apply(psi.amplitudes()) - E * psi.amplitudes()).norm();
}

bool verify_eigenpair(const GridHamiltonian &h, const StateVector &psi, double E, double tol) {
    return eigen_residual(h, psi, E) <= tol;
}

bool verify_eigenpair(const HermitianOperator &h, const StateVector &psi, double E, double tol) {
    return eigen_residual(h, psi, E) <= tol;
}

}  // namespace clab::reduction
