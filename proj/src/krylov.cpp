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

// Lanczos approximation of exp(-i dt H / hbar) v for Hermitian H.
//
// With V_m the orthonormal Krylov basis and T_m the tridiagonal projection,
//   exp(-i dt H) v ~= ||v|| V_m exp(-i dt T_m) e_1.
// The a-posteriori estimate beta_m |e_m^T exp(-i dt T_m) e_1| bounds the
// truncation error; the interval is halved until the estimate meets tol.

#include <cmath>
#include <optional>

#include "clab/qcore.hpp"

namespace clab {

namespace {

constexpr int kMaxKrylovDim = 40;
constexpr int kMaxHalvings = 30;

std::optional<Eigen::VectorXcd> lanczos_step(const LinearMap &h, double scale,
                                             const Eigen::VectorXcd &v, double tol) {
    const double v_norm = v.norm();
    if (v_norm == 0.0) {
        return v;
    }
    const Eigen::Index n = v.size();
    const int m_max = static_cast<int>(std::min<Eigen::Index>(kMaxKrylovDim, n));

    Eigen::MatrixXcd basis(n, m_max);
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = v / v_norm;

    for (int j = 0; j < m_max; ++j) {
        Eigen::VectorXcd w = h(Eigen::VectorXcd(basis.col(j)));
        const double a = basis.col(j).dot(w).real();
        alpha.push_back(a);
        // Full reorthogonalization, twice, keeps V_m orthonormal to working precision.
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXcd proj = basis.leftCols(j + 1).adjoint() * w;
            w -= basis.leftCols(j + 1) * proj;
        }
        const double b = w.norm();

        const int m = j + 1;
        Eigen::VectorXcd y(m);
        if (m == 1) {
            y[0] = std::polar(1.0, -scale * alpha[0]);
        } else {
            Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
            es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            if (es.info() != Eigen::Success) {
                throw NumericalError("krylov_expm_apply: tridiagonal eigensolver failed at m=" +
                                     std::to_string(m));
            }
            const Eigen::MatrixXd &s = es.eigenvectors();
            Eigen::VectorXcd c(m);
            for (int k = 0; k < m; ++k) {
                c[k] = std::polar(1.0, -scale * es.eigenvalues()[k]) * s(0, k);
            }
            y = s.cast<Complex>() * c;
        }

        const double err = b * std::abs(y[m - 1]);
        if (err <= tol || b == 0.0) {
            return v_norm * (basis.leftCols(m) * y);
        }
        if (j + 1 == m_max) {
            break;
        }
        beta.push_back(b);
        basis.col(j + 1) = w / b;
    }
    return std::nullopt;
}

}  // namespace

Eigen::VectorXcd krylov_expm_apply(const HermitianOperator &h, double dt, const Eigen::VectorXcd &v,
                                   const PhysicalConstants &c, double tol) {
    c.validate();
    if (static_cast<std::size_t>(v.size()) != h.dim()) {
        throw std::invalid_argument("krylov_expm_apply: dimension mismatch (operator " +
                                    std::to_string(h.dim()) + ", vector " +
                                    std::to_string(v.size()) + ")");
    }
    if (h.is_diagonal()) {
        const Eigen::VectorXd &e = h.diagonal_entries();
        Eigen::VectorXcd out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            out[i] = std::polar(1.0, -dt * e[i] / c.hbar) * v[i];
        }
        return out;
    }

    return krylov_expm_apply(LinearMap([&h](const Eigen::VectorXcd &x) { return h.apply(x); }), dt, v, c, tol);
}

Eigen::VectorXcd krylov_expm_apply(const LinearMap &h, double dt, const Eigen::VectorXcd &v,
                                   const PhysicalConstants &c, double tol) {
    c.validate();
    Eigen::VectorXcd w = v;
    double remaining = dt;
    double chunk = dt;
    int halvings = 0;
    while (remaining != 0.0) {
        const double step = std::abs(chunk) < std::abs(remaining) ? chunk : remaining;
        if (auto next = lanczos_step(h, step / c.hbar, w, tol)) {
            w = std::move(*next);
            remaining -= step;
        } else {
            if (++halvings > kMaxHalvings) {
                throw NumericalError("krylov_expm_apply: Krylov iteration failed to converge");
            }
            chunk *= 0.5;
        }
    }
    return w;
}

}  // namespace clab
