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

#include "clab/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace clab {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

}  // namespace

void PhysicalConstants::validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw std::invalid_argument("hbar must be finite and > 0, got " + fmt_double(hbar));
    }
}

std::string to_string(BasisLabel label) {
    switch (label) {
        case BasisLabel::qubit:
            return "qubit";
        case BasisLabel::detector:
            return "detector";
        case BasisLabel::product:
            return "product";
        case BasisLabel::bitstring:
            return "bitstring";
        case BasisLabel::grid:
            return "grid";
    }
    return "unknown";
}

// -----------------------------------------------------------------------------
// StateVector
// -----------------------------------------------------------------------------

StateVector::StateVector(Eigen::VectorXcd amps, BasisLabel basis)
    : amps_(std::move(amps)), basis_(basis) {
    if (amps_.size() == 0) {
        throw std::invalid_argument("StateVector: dimension must be positive");
    }
    if (!amps_.allFinite()) {
        throw std::invalid_argument("StateVector: non-finite amplitude");
    }
    if (basis_ == BasisLabel::qubit && amps_.size() != 2) {
        throw std::invalid_argument("StateVector: qubit basis requires dim 2, got " +
                                    std::to_string(amps_.size()));
    }
    if (basis_ == BasisLabel::bitstring && !is_power_of_two(static_cast<std::size_t>(amps_.size()))) {
        throw std::invalid_argument("StateVector: bitstring basis requires a power-of-two dim, got " +
                                    std::to_string(amps_.size()));
    }
}

StateVector StateVector::basis_state(std::size_t dim, std::size_t index, BasisLabel basis) {
    if (index >= dim) {
        throw std::invalid_argument("StateVector::basis_state: index " + std::to_string(index) +
                                    " out of range for dim " + std::to_string(dim));
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(v), basis);
}

StateVector StateVector::uniform(std::size_t dim, BasisLabel basis) {
    const double a = 1.0 / std::sqrt(static_cast<double>(dim));
    return StateVector(Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(dim), Complex(a, 0.0)),
                       basis);
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(amps_.squaredNorm() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    const double n = amps_.norm();
    if (!(n > 0.0)) {
        throw NumericalError("StateVector::normalized: zero vector");
    }
    return StateVector(amps_ / n, basis_);
}

// -----------------------------------------------------------------------------
// HermitianOperator
// -----------------------------------------------------------------------------

HermitianOperator HermitianOperator::diagonal(Eigen::VectorXd entries) {
    if (entries.size() == 0) {
        throw std::invalid_argument("HermitianOperator: dimension must be positive");
    }
    if (!entries.allFinite()) {
        throw std::invalid_argument("HermitianOperator: non-finite diagonal entry");
    }
    HermitianOperator op;
    op.dim_ = static_cast<std::size_t>(entries.size());
    op.diag_ = std::move(entries);
    return op;
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
    return diagonal(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)));
}

HermitianOperator HermitianOperator::dense(Eigen::MatrixXcd matrix, double tol) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty, got " +
                                    std::to_string(matrix.rows()) + "x" +
                                    std::to_string(matrix.cols()));
    }
    if (!matrix.allFinite()) {
        throw std::invalid_argument("HermitianOperator: non-finite matrix entry");
    }
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    const double defect = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (defect > tol * scale) {
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (max |M - M^dagger| = " +
                                    fmt_double(defect) + ")");
    }
    HermitianOperator op;
    op.dim_ = static_cast<std::size_t>(matrix.rows());
    if ((matrix.imag().array() == 0.0).all()) {
        op.real_ = matrix.real();
    } else {
        op.complex_ = std::move(matrix);
    }
    return op;
}

HermitianOperator HermitianOperator::dense(const Eigen::MatrixXd &matrix, double tol) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty, got " +
                                    std::to_string(matrix.rows()) + "x" +
                                    std::to_string(matrix.cols()));
    }
    if (!matrix.allFinite()) {
        throw std::invalid_argument("HermitianOperator: non-finite matrix entry");
    }
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    const double defect = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (defect > tol * scale) {
        throw std::invalid_argument("HermitianOperator: matrix is not symmetric (max |M - M^T| = " +
                                    fmt_double(defect) + ")");
    }
    HermitianOperator op;
    op.dim_ = static_cast<std::size_t>(matrix.rows());
    op.real_ = matrix;
    return op;
}

const Eigen::VectorXd &HermitianOperator::diagonal_entries() const {
    if (!diag_) {
        throw std::logic_error("HermitianOperator::diagonal_entries: operator is dense");
    }
    return *diag_;
}

Eigen::MatrixXcd HermitianOperator::to_dense() const {
    if (diag_) {
        return diag_->cast<Complex>().asDiagonal();
    }
    if (real_) {
        return real_->cast<Complex>();
    }
    return *complex_;
}

Complex HermitianOperator::entry(std::size_t i, std::size_t j) const {
    const auto r = static_cast<Eigen::Index>(i);
    const auto col = static_cast<Eigen::Index>(j);
    if (diag_) {
        return i == j ? Complex((*diag_)[r], 0.0) : Complex(0.0, 0.0);
    }
    if (real_) {
        return {(*real_)(r, col), 0.0};
    }
    return (*complex_)(r, col);
}

Eigen::VectorXcd HermitianOperator::apply(const Eigen::VectorXcd &v) const {
    if (static_cast<std::size_t>(v.size()) != dim_) {
        throw std::invalid_argument("HermitianOperator::apply: dimension mismatch (operator " +
                                    std::to_string(dim_) + ", vector " + std::to_string(v.size()) +
                                    ")");
    }
    if (diag_) {
        return diag_->cast<Complex>().cwiseProduct(v);
    }
    if (real_) {
        Eigen::MatrixXd parts(v.size(), 2);
        parts.col(0) = v.real();
        parts.col(1) = v.imag();
        const Eigen::MatrixXd out = (*real_) * parts;
        Eigen::VectorXcd res(v.size());
        res.real() = out.col(0);
        res.imag() = out.col(1);
        return res;
    }
    return (*complex_) * v;
}

StateVector HermitianOperator::apply(const StateVector &psi) const {
    return StateVector(apply(psi.amplitudes()), psi.basis());
}

double HermitianOperator::expectation(const StateVector &psi) const {
    return psi.amplitudes().dot(apply(psi.amplitudes())).real();
}

double HermitianOperator::hermiticity_defect() const {
    if (diag_) {
        return 0.0;
    }
    if (real_) {
        return (*real_ - real_->transpose()).cwiseAbs().maxCoeff();
    }
    return (*complex_ - complex_->adjoint()).cwiseAbs().maxCoeff();
}

double HermitianOperator::spectral_norm() const {
    if (diag_) {
        return diag_->cwiseAbs().maxCoeff();
    }
    return eigensystem().values.cwiseAbs().maxCoeff();
}

Eigensystem HermitianOperator::eigensystem() const {
    Eigensystem out;
    if (diag_) {
        std::vector<Eigen::Index> order(dim_);
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [this](Eigen::Index a, Eigen::Index b) { return (*diag_)[a] < (*diag_)[b]; });
        const auto n = static_cast<Eigen::Index>(dim_);
        out.values.resize(n);
        out.vectors = Eigen::MatrixXcd::Zero(n, n);
        for (Eigen::Index k = 0; k < n; ++k) {
            out.values[k] = (*diag_)[order[static_cast<std::size_t>(k)]];
            out.vectors(order[static_cast<std::size_t>(k)], k) = 1.0;
        }
        return out;
    }
    if (real_) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*real_);
        if (es.info() != Eigen::Success) {
            throw NumericalError("eigendecomposition failed for real symmetric operator of dim " +
                                 std::to_string(dim_) + " (Eigen info " +
                                 std::to_string(static_cast<int>(es.info())) + ")");
        }
        out.values = es.eigenvalues();
        out.vectors = es.eigenvectors().cast<Complex>();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(*complex_);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition failed for Hermitian operator of dim " +
                             std::to_string(dim_) + " (Eigen info " +
                             std::to_string(static_cast<int>(es.info())) + ")");
    }
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    return out;
}

HermitianOperator HermitianOperator::linear_combination(double a, const HermitianOperator &lhs,
                                                        double b, const HermitianOperator &rhs) {
    if (lhs.dim_ != rhs.dim_) {
        throw std::invalid_argument("HermitianOperator::linear_combination: dimension mismatch (" +
                                    std::to_string(lhs.dim_) + " vs " + std::to_string(rhs.dim_) +
                                    ")");
    }
    if (lhs.diag_ && rhs.diag_) {
        return diagonal(a * (*lhs.diag_) + b * (*rhs.diag_));
    }
    if (lhs.is_real() && rhs.is_real()) {
        auto as_real = [](const HermitianOperator &op) -> Eigen::MatrixXd {
            if (op.diag_) {
                return op.diag_->asDiagonal();
            }
            return *op.real_;
        };
        HermitianOperator op;
        op.dim_ = lhs.dim_;
        op.real_ = a * as_real(lhs) + b * as_real(rhs);
        return op;
    }
    HermitianOperator op;
    op.dim_ = lhs.dim_;
    op.complex_ = a * lhs.to_dense() + b * rhs.to_dense();
    return op;
}

// -----------------------------------------------------------------------------
// UnitaryPropagator
// -----------------------------------------------------------------------------

UnitaryPropagator UnitaryPropagator::from_diagonal(Eigen::VectorXcd phases) {
    UnitaryPropagator u;
    u.dim_ = static_cast<std::size_t>(phases.size());
    u.diag_ = std::move(phases);
    return u;
}

UnitaryPropagator UnitaryPropagator::from_dense(Eigen::MatrixXcd matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw std::invalid_argument("UnitaryPropagator: matrix must be square");
    }
    UnitaryPropagator u;
    u.dim_ = static_cast<std::size_t>(matrix.rows());
    u.dense_ = std::move(matrix);
    return u;
}

Eigen::MatrixXcd UnitaryPropagator::matrix() const {
    if (diag_) {
        return diag_->asDiagonal();
    }
    return *dense_;
}

Complex UnitaryPropagator::entry(std::size_t i, std::size_t j) const {
    if (diag_) {
        return i == j ? (*diag_)[static_cast<Eigen::Index>(i)] : Complex(0.0, 0.0);
    }
    return (*dense_)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

StateVector UnitaryPropagator::apply(const StateVector &psi) const {
    if (psi.dim() != dim_) {
        throw std::invalid_argument("UnitaryPropagator::apply: dimension mismatch (propagator " +
                                    std::to_string(dim_) + ", state " + std::to_string(psi.dim()) +
                                    ")");
    }
    if (diag_) {
        return StateVector(diag_->cwiseProduct(psi.amplitudes()), psi.basis());
    }
    return StateVector((*dense_) * psi.amplitudes(), psi.basis());
}

UnitaryPropagator UnitaryPropagator::compose(const UnitaryPropagator &other) const {
    if (other.dim_ != dim_) {
        throw std::invalid_argument("UnitaryPropagator::compose: dimension mismatch");
    }
    if (diag_ && other.diag_) {
        return from_diagonal(diag_->cwiseProduct(*other.diag_));
    }
    return from_dense(matrix() * other.matrix());
}

double UnitaryPropagator::unitarity_defect() const {
    if (diag_) {
        return (diag_->cwiseAbs2().array() - 1.0).abs().maxCoeff();
    }
    const auto n = static_cast<Eigen::Index>(dim_);
    return (dense_->adjoint() * (*dense_) - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

// -----------------------------------------------------------------------------
// Free functions
// -----------------------------------------------------------------------------

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("inner_product: dimension mismatch (a.dim=" +
                                    std::to_string(a.dim()) + ", b.dim=" + std::to_string(b.dim()) +
                                    ")");
    }
    return a.amplitudes().dot(b.amplitudes());
}

StateVector tensor_product(const StateVector &a, const StateVector &b) {
    if (!a.is_normalized() || !b.is_normalized()) {
        throw std::invalid_argument("tensor_product: both factors must be normalized");
    }
    const auto na = static_cast<Eigen::Index>(a.dim());
    const auto nb = static_cast<Eigen::Index>(b.dim());
    Eigen::VectorXcd out(na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        out.segment(i * nb, nb) = a.amplitudes()[i] * b.amplitudes();
    }
    return StateVector(std::move(out), BasisLabel::product);
}

UnitaryPropagator expm_propagator(const HermitianOperator &h, double dt, const PhysicalConstants &c) {
    c.validate();
    if (!std::isfinite(dt)) {
        throw std::invalid_argument("expm_propagator: dt must be finite");
    }
    const double scale = dt / c.hbar;
    if (h.is_diagonal()) {
        const Eigen::VectorXd &e = h.diagonal_entries();
        Eigen::VectorXcd phases(e.size());
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            phases[i] = std::polar(1.0, -scale * e[i]);
        }
        return UnitaryPropagator::from_diagonal(std::move(phases));
    }
    const Eigensystem es = h.eigensystem();
    Eigen::VectorXcd phases(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        phases[i] = std::polar(1.0, -scale * es.values[i]);
    }
    Eigen::MatrixXcd u = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
    if (!u.allFinite()) {
        throw NumericalError("expm_propagator: non-finite result (dim " + std::to_string(h.dim()) + ")");
    }
    return UnitaryPropagator::from_dense(std::move(u));
}

FirstOrderPropagator first_order_propagator(const HermitianOperator &h, double dt,
                                            const PhysicalConstants &c) {
    c.validate();
    const auto n = static_cast<Eigen::Index>(h.dim());
    FirstOrderPropagator out;
    out.matrix = Eigen::MatrixXcd::Identity(n, n) - Complex(0.0, dt / c.hbar) * h.to_dense();
    out.unitarity_defect =
        (out.matrix.adjoint() * out.matrix - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
    return out;
}

TdseResult integrate_tdse(const TimeDependentOperator &h_of_t, const StateVector &psi0,
                          double t_final, std::size_t steps, const PhysicalConstants &c,
                          const TdseOptions &options) {
    c.validate();
    if (steps < 1) {
        throw std::invalid_argument("integrate_tdse: steps must be >= 1");
    }
    if (!std::isfinite(t_final) || t_final < 0.0) {
        throw std::invalid_argument("integrate_tdse: t_final must be finite and >= 0");
    }
    if (!psi0.is_normalized()) {
        throw std::invalid_argument("integrate_tdse: initial state is not normalized (norm^2 = " +
                                    fmt_double(psi0.amplitudes().squaredNorm()) + ")");
    }
    const double dt = t_final / static_cast<double>(steps);
    Eigen::VectorXcd v = psi0.amplitudes();
    for (std::size_t j = 0; j < steps; ++j) {
        const double t_mid = (static_cast<double>(j) + 0.5) * dt;
        const HermitianOperator h = h_of_t(t_mid);
        if (h.dim() != psi0.dim()) {
            throw std::invalid_argument("integrate_tdse: H(t) has dim " + std::to_string(h.dim()) +
                                        " but the state has dim " + std::to_string(psi0.dim()));
        }
        if (h.is_diagonal()) {
            const Eigen::VectorXd &e = h.diagonal_entries();
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                v[i] *= std::polar(1.0, -dt * e[i] / c.hbar);
            }
        } else if (options.method == StepExponential::krylov) {
            v = krylov_expm_apply(h, dt, v, c, options.krylov_tol);
        } else {
            const Eigensystem es = h.eigensystem();
            Eigen::VectorXcd coeffs = es.vectors.adjoint() * v;
            for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
                coeffs[i] *= std::polar(1.0, -dt * es.values[i] / c.hbar);
            }
            v = es.vectors * coeffs;
        }
        if (!v.allFinite()) {
            throw NumericalError("integrate_tdse: non-finite amplitude at step " + std::to_string(j));
        }
    }
    TdseResult result{StateVector(v, psi0.basis()), 0.0, {}};
    const double norm = v.norm();
    result.norm_drift = std::abs(norm - 1.0);
    if (result.norm_drift > 1e-6) {
        std::ostringstream os;
        os << "integrate_tdse: norm drift " << result.norm_drift << " exceeds 1e-6 after " << steps
           << " steps; increase steps (try " << 2 * steps << ")";
        result.warnings.push_back(os.str());
    }
    result.state = result.state.normalized();
    return result;
}

}  // namespace clab
