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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "clab/spectral.hpp"
#include "oracles.hpp"

using namespace clab;
using namespace clab::reduction;

namespace {

SpectralDecisionInstance flat(std::size_t N, double L, double m, double v0, double E_B = 0.0) {
    return {N, L, m, std::vector<double>(N, v0), E_B};
}

StateVector as_state(const Eigen::VectorXd &v) {
    return StateVector(v.cast<Complex>(), BasisLabel::grid);
}

double harmonic_e0(std::size_t N, double L = 20.0) {
    const auto [h, eb] = reduce_energy_decision(harmonic_instance(N, L, 1.0, 1.0, 0.0));
    return ground_energy(h);
}

}  // namespace

TEST_CASE("instance validation") {
    CHECK_THROWS(flat(2, 1.0, 1.0, 0.0).validate());
    CHECK_THROWS(flat(8, 0.0, 1.0, 0.0).validate());
    CHECK_THROWS(flat(8, 1.0, -1.0, 0.0).validate());
    auto bad = flat(8, 1.0, 1.0, 0.0);
    bad.potential.pop_back();
    CHECK_THROWS(bad.validate());
    const auto ok = flat(9, 10.0, 1.0, 0.0);
    CHECK(ok.spacing() == 1.0);
    const auto x = ok.positions();
    CHECK(x.front() == -4.0);
    CHECK(x.back() == 4.0);
}

TEST_CASE("free particle in a box") {
    for (std::size_t N : {16u, 100u, 513u}) {
        for (double m : {0.5, 2.0}) {
            const double L = 3.0;
            const double hbar = 0.7;
            const auto [h, eb] = reduce_energy_decision(flat(N, L, m, 0.0), PhysicalConstants{hbar});
            const double e0 = ground_energy(h);
            CHECK(std::abs(e0 - oracle::box_level(N, L, m, hbar, 1)) <= 1e-10 * oracle::box_level(N, L, m, hbar, 1));
            const auto es = h.eigensystem();
            for (std::size_t k = 1; k <= 4; ++k) {
                const double ref = oracle::box_level(N, L, m, hbar, k);
                CHECK(std::abs(es.values[static_cast<Eigen::Index>(k - 1)] - ref) <= 1e-9 * ref);
            }
        }
    }
    const double cont = std::numbers::pi * std::numbers::pi / (2.0 * 4.0);
    const auto [h, eb] = reduce_energy_decision(flat(512, 2.0, 1.0, 0.0));
    CHECK(std::abs(ground_energy(h) - cont) <= 0.01 * cont);
}

TEST_CASE("harmonic oscillator ground energy") {
    for (double omega : {0.5, 1.0, 3.0}) {
        const auto [h, eb] = reduce_energy_decision(harmonic_instance(512, 20.0, 1.0, omega, 0.0));
        const double e0 = ground_energy(h);
        CHECK(std::abs(e0 - 0.5 * omega) <= 0.01 * 0.5 * omega);
    }
    const double m = 2.0;
    const double hbar = 0.5;
    const auto [h2, eb2] = reduce_energy_decision(harmonic_instance(1024, 12.0, m, 2.0, 0.0), PhysicalConstants{hbar});
    CHECK(std::abs(ground_energy(h2) - 0.5 * hbar * 2.0) <= 0.01 * 0.5 * hbar * 2.0);
}

TEST_CASE("constant offset shifts the ground energy") {
    const auto [a, ea] = reduce_energy_decision(harmonic_instance(300, 16.0, 1.0, 1.0, 0.0, 0.0));
    const auto [b, ebb] = reduce_energy_decision(harmonic_instance(300, 16.0, 1.0, 1.0, 0.0, 2.75));
    CHECK(std::abs(ground_energy(b) - ground_energy(a) - 2.75) <= 1e-9);
}

TEST_CASE("dense and inverse iteration agree") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 20; ++t) {
        const std::size_t N = 20 + static_cast<std::size_t>(rng() % 800);
        SpectralDecisionInstance inst{N, 10.0, 1.0, {}, 0.0};
        for (std::size_t j = 0; j < N; ++j) {
            inst.potential.push_back(u(rng));
        }
        const auto [h, eb] = reduce_energy_decision(inst);
        const auto d = ground_state(h, GroundMethod::dense);
        const auto ii = ground_state(h, GroundMethod::inverse_iteration);
        CHECK(std::abs(d.energy - ii.energy) <= 1e-8 * std::max(1.0, std::abs(d.energy)));
        CHECK(std::abs(std::abs(d.vector.dot(ii.vector)) - 1.0) <= 1e-8);
        std::vector<double> diag(h.diagonal().data(), h.diagonal().data() + N);
        CHECK(std::abs(d.energy - oracle::tridiagonal_min_eigenvalue(diag, h.off_diagonal())) <=
              1e-9 * std::max(1.0, std::abs(d.energy)));
        CHECK(std::abs(d.vector.norm() - 1.0) <= 1e-12);
    }
    CHECK(to_string(GroundMethod::inverse_iteration) == "inverse_iteration");
    CHECK(ground_method_from_string("dense") == GroundMethod::dense);
    CHECK_THROWS(ground_method_from_string("lanczos"));
}

TEST_CASE("threshold decisions") {
    const double e0 = harmonic_e0(512);
    // hbar omega lies above the ground energy, hbar omega / 4 below it
    CHECK(decide_pi_E(harmonic_instance(512, 20.0, 1.0, 1.0, 1.0)));
    CHECK_FALSE(decide_pi_E(harmonic_instance(512, 20.0, 1.0, 1.0, 0.25)));
    CHECK(decide_pi_E(harmonic_instance(512, 20.0, 1.0, 1.0, e0)));
    CHECK(decide_pi_E(harmonic_instance(512, 20.0, 1.0, 1.0, 1.0), {}, GroundMethod::inverse_iteration));
    CHECK_FALSE(decide_pi_E(harmonic_instance(512, 20.0, 1.0, 1.0, 0.25), {}, GroundMethod::inverse_iteration));
}

TEST_CASE("eigenpair verification") {
    const auto [h, eb] = reduce_energy_decision(harmonic_instance(400, 20.0, 1.0, 1.0, 0.0));
    const auto g = ground_state(h);
    const double tol = 1e-8;
    const StateVector psi = as_state(g.vector);
    CHECK(verify_eigenpair(h, psi, g.energy, tol));
    CHECK(verify_eigenpair(h.to_operator(), psi, g.energy, tol));
    CHECK(eigen_residual(h, psi, g.energy) == doctest::Approx(eigen_residual(h.to_operator(), psi, g.energy)).epsilon(1e-6));

    const double shift = 10.0 * tol * h.norm_bound();
    CHECK_FALSE(verify_eigenpair(h, psi, g.energy + shift, tol));
    CHECK_FALSE(verify_eigenpair(h, psi, g.energy - 3.0 * tol, tol));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (int t = 0; t < 10; ++t) {
        Eigen::VectorXd r(400);
        for (auto &x : r) {
            x = n01(rng);
        }
        r.normalize();
        const double rq = r.dot(h.apply(r));
        CHECK_FALSE(verify_eigenpair(h, as_state(r), rq, tol));
    }

    CHECK_THROWS(verify_eigenpair(h, as_state(2.0 * g.vector), g.energy, tol));
    CHECK_THROWS(verify_eigenpair(h, as_state(Eigen::VectorXd::Ones(5).normalized()), g.energy, tol));
}

TEST_CASE("ground energy is a variational lower bound") {
    const auto [h, eb] = reduce_energy_decision(harmonic_instance(200, 15.0, 1.0, 1.3, 0.0));
    const double e0 = ground_energy(h);
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n01;
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd phi(200);
        for (auto &x : phi) {
            x = n01(rng);
        }
        if (t % 2) {
            // smooth trial functions come closer to the bound
            for (Eigen::Index j = 0; j < 200; ++j) {
                const double x = (static_cast<double>(j) - 99.5) / 20.0;
                phi[j] = std::exp(-0.5 * x * x * (1.0 + 0.01 * t)) * (1.0 + 0.1 * phi[j]);
            }
        }
        CHECK(phi.dot(h.apply(phi)) / phi.squaredNorm() >= e0 - 1e-12);
    }
}

TEST_CASE("discretization error is second order") {
    for (std::size_t N : {63u, 127u, 255u}) {
        const double e1 = std::abs(harmonic_e0(N) - 0.5);
        const double e2 = std::abs(harmonic_e0(2 * N + 1) - 0.5);
        const double ratio = e2 / e1;
        CHECK(ratio >= 0.2);
        CHECK(ratio <= 0.3);
    }
    CHECK(std::abs(harmonic_e0(1025) - harmonic_e0(512)) <= 0.01 * harmonic_e0(1025));
}

TEST_CASE("even potential has an even ground state") {
    const auto [h, eb] = reduce_energy_decision(harmonic_instance(301, 14.0, 1.0, 1.0, 0.0));
    for (auto m : {GroundMethod::dense, GroundMethod::inverse_iteration}) {
        const auto g = ground_state(h, m);
        CHECK((g.vector - g.vector.reverse()).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("grid hamiltonian structure") {
    Eigen::VectorXd d(4);
    d << 1.0, 2.0, 3.0, 4.0;
    const GridHamiltonian h(d, -0.5);
    const Eigen::MatrixXd m = h.dense();
    CHECK(m(0, 1) == -0.5);
    CHECK(m(1, 0) == -0.5);
    CHECK(m(0, 2) == 0.0);
    const auto [lo, hi] = h.gershgorin();
    CHECK(lo == 0.5);
    CHECK(hi == 4.5);
    CHECK(h.norm_bound() == 4.5);
    const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(4, -1.0, 2.0);
    CHECK((h.apply(v) - m * v).norm() <= 1e-15);
    CHECK_THROWS(h.apply(Eigen::VectorXd(Eigen::VectorXd::Ones(3))));
    CHECK_THROWS(ground_state(GridHamiltonian(Eigen::VectorXd::Zero(4097), -1.0)));
}
