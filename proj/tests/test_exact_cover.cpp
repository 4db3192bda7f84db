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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "doctest.h"

#include "clab/errors.hpp"
#include "clab/exact_cover.hpp"
#include "oracles.hpp"

using namespace clab;
using namespace clab::reduction;

namespace {

std::vector<std::string> as_strings(const std::vector<std::uint64_t> &z, std::size_t n) {
    std::vector<std::string> out;
    for (auto v : z) {
        out.push_back(bitstring(v, n));
    }
    return out;
}

ExactCoverInstance random_instance(std::mt19937_64 &rng, std::size_t n, std::size_t m) {
    m = std::min(m, n * (n - 1) * (n - 2) / 6);
    std::vector<Clause> cs;
    while (cs.size() < m) {
        Clause c{1 + rng() % n, 1 + rng() % n, 1 + rng() % n};
        std::sort(c.begin(), c.end());
        if (c[0] == c[1] || c[1] == c[2] || std::find(cs.begin(), cs.end(), c) != cs.end()) {
            continue;
        }
        cs.push_back(c);
    }
    return ExactCoverInstance(n, cs);
}

// sum_i d_i (1 - X_i) / 2 written entry by entry
Eigen::MatrixXcd begin_oracle(std::size_t n, const std::vector<std::size_t> &d) {
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t z = 0; z < dim; ++z) {
        for (std::size_t i = 1; i <= n; ++i) {
            const double w = static_cast<double>(d[i - 1]) / 2.0;
            h(z, z) += w;
            h(z, z ^ (std::size_t{1} << (n - i))) -= w;
        }
    }
    return h;
}

}  // namespace

TEST_CASE("bit convention") {
    CHECK(bitstring(0b100, 3) == "100");
    CHECK(bit_of(0b100, 1, 3) == 1);
    CHECK(bit_of(0b100, 3, 3) == 0);
    CHECK(index_of("001000") == 8);
    for (std::uint64_t z = 0; z < 64; ++z) {
        CHECK(index_of(bitstring(z, 6)) == z);
    }
}

TEST_CASE("instance validation") {
    CHECK_THROWS(ExactCoverInstance(3, {{1, 2, 4}}));
    CHECK_THROWS(ExactCoverInstance(3, {{0, 1, 2}}));
    CHECK_THROWS(ExactCoverInstance(3, {{2, 1, 3}}));
    CHECK_THROWS(ExactCoverInstance(3, {{1, 2, 3}, {1, 2, 3}}));
    CHECK_THROWS(ExactCoverInstance(0, {}));
    const ExactCoverInstance ok(4, {{1, 2, 3}, {2, 3, 4}});
    const auto d = ok.membership();
    CHECK(d == std::vector<std::size_t>{1, 2, 2, 1});
}

TEST_CASE("brute force matches a string walk") {
    const ExactCoverInstance free(3, {});
    CHECK(brute_force_exact_cover(free).size() == 8);

    const ExactCoverInstance one(3, {{1, 2, 3}});
    CHECK(as_strings(brute_force_exact_cover(one), 3) == std::vector<std::string>{"001", "010", "100"});

    // {1,2,3} with {1,2,4},{1,3,4},{2,3,4}: no assignment works
    const ExactCoverInstance none(4, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}});
    CHECK(brute_force_exact_cover(none).empty());
    CHECK(oracle::exact_cover_solutions(4, none.clauses()).empty());

    std::mt19937_64 rng(11);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 3 + t % 10;
        const auto inst = random_instance(rng, n, 1 + rng() % (n + 1));
        CHECK(as_strings(brute_force_exact_cover(inst), n) == oracle::exact_cover_solutions(n, inst.clauses()));
    }
}

TEST_CASE("cost energies count violated clauses") {
    const ExactCoverInstance inst(4, {{1, 2, 3}, {2, 3, 4}});
    const auto hc = build_cost_hamiltonian(inst);
    CHECK(hc.energies.size() == 16);
    CHECK(hc.energies[index_of("0000")] == 2.0);
    CHECK(hc.energies[index_of("1001")] == 0.0);
    CHECK(hc.energies[index_of("0110")] == 2.0);
    CHECK(hc.energies[index_of("0100")] == 0.0);
    CHECK(hc.energies[index_of("1000")] == 1.0);
    CHECK(hc.ground_energy() == 0.0);
    CHECK(hc.to_operator().is_diagonal());
}

TEST_CASE("cost minimizers are the exact covers") {
    std::mt19937_64 rng(12);
    for (std::size_t n = 3; n <= 14; ++n) {
        const auto inst = random_instance(rng, n, n / 2 + 1);
        const auto sols = brute_force_exact_cover(inst);
        const auto hc = build_cost_hamiltonian(inst);
        if (!sols.empty()) {
            CHECK(hc.ground_states() == sols);
            CHECK(hc.ground_energy() == 0.0);
        } else {
            CHECK(hc.ground_energy() >= 1.0);
        }
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); z += 7) {
            REQUIRE(hc.energies[z] == static_cast<double>(inst.violations(z)));
        }
    }
}

TEST_CASE("begin hamiltonian") {
    std::mt19937_64 rng(13);
    const auto inst = random_instance(rng, 6, 5);
    const auto hb = build_begin_hamiltonian(inst);
    const auto op = hb.to_operator();
    CHECK(op.hermiticity_defect() == 0.0);

    const Eigen::MatrixXcd ref = begin_oracle(6, inst.membership());
    CHECK((op.to_dense() - ref).cwiseAbs().maxCoeff() <= 1e-15);

    // uniform superposition is a zero-energy ground state
    const auto u = StateVector::uniform(64, BasisLabel::bitstring);
    CHECK(hb.apply(u.amplitudes()).norm() <= 1e-12);
    const auto es = op.eigensystem();
    CHECK(std::abs(es.values[0]) <= 1e-12);
    CHECK(std::abs(es.values[es.values.size() - 1] - hb.spectral_norm()) <= 1e-12);

    const Eigen::VectorXcd v = oracle::random_unit(rng, 64);
    CHECK((hb.apply(v) - ref * v).norm() <= 1e-13);

    CHECK_THROWS(build_begin_hamiltonian(random_instance(rng, 15, 3)));
    CHECK_THROWS(BeginHamiltonian(13, std::vector<std::size_t>(13, 1)).to_operator());
}

TEST_CASE("interpolation") {
    std::mt19937_64 rng(14);
    const auto inst = random_instance(rng, 4, 3);
    const auto h0 = build_begin_hamiltonian(inst).to_operator();
    const auto hc = build_cost_hamiltonian(inst).to_operator();
    CHECK(interpolate(h0, hc, 0.0, 5.0).to_dense() == h0.to_dense());
    CHECK(interpolate(h0, hc, 5.0, 5.0).to_dense() == hc.to_dense());
    const Eigen::MatrixXcd mid = 0.5 * h0.to_dense() + 0.5 * hc.to_dense();
    CHECK((interpolate(h0, hc, 2.5, 5.0).to_dense() - mid).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK_THROWS(interpolate(h0, hc, 6.0, 5.0));
}

TEST_CASE("recommended step count") {
    const ExactCoverInstance inst(3, {{1, 2, 3}});
    // max(||H_begin|| = 3, ||H_cost|| = 1)
    CHECK(recommended_steps(inst, 2.0) == 60);
    CHECK(recommended_steps(inst, 2.0, PhysicalConstants{2.0}) == 30);
    CHECK(recommended_steps(inst, 1e-9) == 1);
}

TEST_CASE("very short evolution keeps the uniform weights") {
    const ExactCoverInstance inst(3, {{1, 2, 3}});
    const auto out = adiabatic_run(inst, {1e-8, 4});
    CHECK(std::abs(out.success_probability - 3.0 / 8.0) <= 1e-7);
    CHECK(out.norm_drift <= 1e-12);
}

TEST_CASE("slow evolution finds the cover") {
    const ExactCoverInstance inst(3, {{1, 2, 3}});
    SweepOptions opt;
    opt.T_min = 1.0;
    opt.T_max = 64.0;
    opt.full_sweep = true;
    const auto r = adiabatic_sweep(inst, opt);
    REQUIRE(!r.points.empty());
    CHECK(r.reached_target);
    CHECK(r.points.back().success_probability >= 0.9);
    CHECK(r.points.back().success_probability >= r.points.front().success_probability);
    CHECK(r.points.back().most_probable_satisfies);
    for (const auto &p : r.points) {
        CHECK(p.norm_drift <= 1e-6);
        CHECK(p.success_probability >= 0.0);
        CHECK(p.success_probability <= 1.0 + 1e-12);
    }
    CHECK(r.points.size() == 7);
}

TEST_CASE("krylov and eigendecomposition stepping agree") {
    std::mt19937_64 rng(15);
    const auto inst = random_instance(rng, 5, 3);
    const AdiabaticSchedule sched{6.0, recommended_steps(inst, 6.0)};
    const auto a = adiabatic_run(inst, sched, {}, {StepExponential::krylov});
    const auto b = adiabatic_run(inst, sched, {}, {StepExponential::eigen});
    CHECK((a.final_state.amplitudes() - b.final_state.amplitudes()).norm() <= 1e-9);
    CHECK(std::abs(a.success_probability - b.success_probability) <= 1e-10);

    // dense midpoint oracle on the same grid
    const Eigen::MatrixXcd h0 = begin_oracle(5, inst.membership());
    const auto hc = build_cost_hamiltonian(inst);
    Eigen::VectorXcd psi = StateVector::uniform(32, BasisLabel::bitstring).amplitudes();
    const double dt = sched.T / static_cast<double>(sched.steps);
    for (std::size_t j = 0; j < sched.steps; ++j) {
        const double s = (static_cast<double>(j) + 0.5) * dt / sched.T;
        Eigen::MatrixXcd h = (1.0 - s) * h0;
        for (int z = 0; z < 32; ++z) {
            h(z, z) += s * hc.energies[static_cast<std::size_t>(z)];
        }
        psi = oracle::propagator(h, dt, 1.0) * psi;
    }
    CHECK((a.final_state.amplitudes() - psi).norm() <= 1e-9);
}

TEST_CASE("instance json") {
    const ExactCoverInstance inst(5, {{1, 2, 3}, {3, 4, 5}});
    const auto j = instance_to_json(inst);
    CHECK(instance_from_json(j) == inst);
    CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"n": 3})")), ConfigError);
    CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"n": 3, "clauses": [[1, 2]]})")), ConfigError);
    CHECK_THROWS_AS(instance_from_json(nlohmann::json::parse(R"({"n": 3, "clauses": [[1, 2, 9]]})")), ConfigError);
    try {
        (void)instance_from_json(nlohmann::json::parse(R"({"n": 3, "clauses": [[1, 2, 3], [1, "a", 3]]})"));
        FAIL("expected ConfigError");
    } catch (const ConfigError &e) {
        CHECK(std::string(e.what()).find("clauses") != std::string::npos);
    }
    CHECK_THROWS(load_instance("/nonexistent/instance.json"));
}

TEST_CASE("bundled instances have exactly one cover") {
    for (const char *name : {"ec_n3.json", "ec_n6.json", "ec_n8.json"}) {
        const auto inst = load_instance(std::filesystem::path(CLAB_DATA_DIR) / "instances" / name);
        const auto sols = brute_force_exact_cover(inst);
        CHECK(oracle::exact_cover_solutions(inst.n(), inst.clauses()) == as_strings(sols, inst.n()));
        if (inst.n() > 3) {
            CHECK(sols.size() == 1);
        }
    }
    const auto n6 = load_instance(std::filesystem::path(CLAB_DATA_DIR) / "instances" / "ec_n6.json");
    CHECK(as_strings(brute_force_exact_cover(n6), 6) == std::vector<std::string>{"001000"});
    const auto n8 = load_instance(std::filesystem::path(CLAB_DATA_DIR) / "instances" / "ec_n8.json");
    CHECK(as_strings(brute_force_exact_cover(n8), 8) == std::vector<std::string>{"10001001"});
}
