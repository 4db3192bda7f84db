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
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

#include "clab/errors.hpp"
#include "clab/stochastics.hpp"

using namespace clab::stochastics;

TEST_CASE("degenerate interval returns its endpoint") {
    for (double c : {-3.5, 0.0, 1e9}) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            CHECK(sample_uniform({c, c}, RandomSeed{7}, i) == c);
        }
    }
    CHECK_THROWS_AS(sample_uniform({1.0, 0.0}, RandomSeed{7}, 0), std::invalid_argument);
    CHECK_THROWS(UniformInterval{0.0, std::numeric_limits<double>::infinity()}.validate());
}

TEST_CASE("draws are a pure function of seed and index") {
    const RandomSeed s{123456789};
    for (std::uint64_t i = 0; i < 1000; i += 37) {
        CHECK(sample_uniform({-2.0, 5.0}, s, i) == sample_uniform({-2.0, 5.0}, s, i));
        CHECK(hash_counter(s, i, 3) == hash_counter(s, i, 3));
    }
    // neighbouring indices, seeds and streams decorrelate
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seen.insert(hash_counter(s, i));
        seen.insert(hash_counter(RandomSeed{s.value + 1}, i));
        seen.insert(hash_counter(s, i, 1));
    }
    CHECK(seen.size() == 3000);
    CHECK(derive_seed(s, 0) != derive_seed(s, 1));
    CHECK(derive_seed(s, 5) == derive_seed(s, 5));

    CounterStream a(s, 9);
    CounterStream b(s, 9);
    for (int k = 0; k < 10; ++k) {
        CHECK(a.normal() == b.normal());
    }
}

TEST_CASE("uniform draws have the right mean and range") {
    const RandomSeed s{2024};
    const std::uint64_t n = 1000000;
    double sum = 0.0;
    double lo = 1.0;
    double hi = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double u = sample_uniform({0.0, 1.0}, s, i);
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(std::abs(sum / n - 0.5) <= 0.002);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);

    for (std::uint64_t i = 0; i < 100000; ++i) {
        const double v = sample_uniform({-3.0, 2.0}, s, i);
        REQUIRE(v >= -3.0);
        REQUIRE(v <= 2.0);
    }
}

TEST_CASE("normal draws have unit variance") {
    CounterStream rng(RandomSeed{31}, 0);
    const int n = 200000;
    double s1 = 0.0;
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.normal();
        REQUIRE(std::isfinite(g));
        s1 += g;
        s2 += g * g;
    }
    const double mean = s1 / n;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(s2 / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("constant integrand") {
    const auto e = mc_mean([](RandomSeed, std::uint64_t) { return 0.5; }, 10000, RandomSeed{1});
    CHECK(e.mean == 0.5);
    CHECK(e.std_error == 0.0);
    CHECK(e.n == 10000);
}

TEST_CASE("cosine over a symmetric full period averages to zero") {
    const double xi = std::numbers::pi;
    auto f = [xi](RandomSeed s, std::uint64_t i) { return std::cos(sample_uniform({-xi, xi}, s, i)); };
    const auto e = mc_mean(f, 200000, RandomSeed{77});
    const double analytic = std::sin(xi) / xi;
    CHECK(e.std_error > 0.0);
    CHECK(std::abs(e.mean - analytic) <= 4.0 * e.std_error);
}

TEST_CASE("standard error against a two-pass reference") {
    auto f = [](RandomSeed s, std::uint64_t i) { return std::exp(sample_uniform({0.0, 2.0}, s, i)); };
    const std::uint64_t n = 50000;
    const auto e = mc_mean(f, n, RandomSeed{8});
    std::vector<double> v(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        v[i] = f(RandomSeed{8}, i);
    }
    long double s = 0.0L;
    for (double x : v) {
        s += x;
    }
    const long double mean = s / n;
    long double m2 = 0.0L;
    for (double x : v) {
        m2 += (x - mean) * (x - mean);
    }
    const double se = static_cast<double>(std::sqrt(m2 / (n - 1)) / std::sqrt(static_cast<long double>(n)));
    CHECK(e.mean == doctest::Approx(static_cast<double>(mean)).epsilon(1e-14));
    CHECK(e.std_error == doctest::Approx(se).epsilon(1e-10));
}

TEST_CASE("standard error shrinks like one over root n") {
    auto f = [](RandomSeed s, std::uint64_t i) { return sample_uniform({0.0, 1.0}, s, i); };
    int inside = 0;
    const int reps = 20;
    for (int r = 0; r < reps; ++r) {
        const RandomSeed s{static_cast<std::uint64_t>(1000 + r)};
        const double a = mc_mean(f, 4000, s).std_error;
        const double b = mc_mean(f, 8000, s).std_error;
        const double ratio = b / a;
        inside += (ratio >= 0.6 && ratio <= 0.85) ? 1 : 0;
    }
    CHECK(inside == reps);
}

TEST_CASE("thread count does not change a single bit") {
    auto f = [](RandomSeed s, std::uint64_t i) {
        CounterStream rng(s, i);
        return std::sin(40.0 * rng.uniform()) + 1e-3 * rng.normal();
    };
    const std::uint64_t n = 100003;  // ragged last block
    const auto ref = mc_mean(f, n, RandomSeed{5}, 1);
    for (unsigned t : {2u, 3u, 8u, 0u}) {
        const auto e = mc_mean(f, n, RandomSeed{5}, t);
        CHECK(e.mean == ref.mean);
        CHECK(e.std_error == ref.std_error);
    }
}

TEST_CASE("permuting trial indices leaves the mean bit-identical") {
    const std::uint64_t n = 30000;
    std::vector<double> values(n);
    std::mt19937_64 gen(99);
    std::lognormal_distribution<double> ln(0.0, 3.0);
    for (auto &v : values) {
        v = ln(gen) * ((gen() & 1) ? 1.0 : -1.0);  // wide dynamic range, both signs
    }
    std::vector<std::uint64_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const auto base = mc_mean([&](RandomSeed, std::uint64_t i) { return values[i]; }, n, RandomSeed{0});
    for (int r = 0; r < 5; ++r) {
        std::shuffle(perm.begin(), perm.end(), gen);
        const auto e = mc_mean([&](RandomSeed, std::uint64_t i) { return values[perm[i]]; }, n, RandomSeed{0});
        CHECK(e.mean == base.mean);
        CHECK(e.std_error == doctest::Approx(base.std_error).epsilon(1e-12));
    }
}

TEST_CASE("exact summation survives cancellation") {
    // 1e16 + 1 - 1e16 + ... : naive summation loses the ones
    const std::uint64_t n = 4000;
    auto f = [](RandomSeed, std::uint64_t i) {
        switch (i % 4) {
        case 0:
            return 1e16;
        case 1:
            return 1.0;
        case 2:
            return -1e16;
        default:
            return 3.0;
        }
    };
    const auto e = mc_mean(f, n, RandomSeed{0});
    CHECK(e.mean == 1.0);
    const auto tiny = mc_mean([](RandomSeed, std::uint64_t i) { return i % 2 ? 4.9e-324 : -2.5e-323; }, 10,
                              RandomSeed{0});
    CHECK(tiny.mean == doctest::Approx((5 * 4.9e-324 - 5 * 2.5e-323) / 10.0));
}

TEST_CASE("non-finite values are reported with the smallest index") {
    auto f = [](RandomSeed, std::uint64_t i) {
        return (i == 7777 || i == 60000) ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    for (unsigned t : {1u, 4u}) {
        try {
            (void)mc_mean(f, 100000, RandomSeed{1}, t);
            FAIL("expected NumericalError");
        } catch (const clab::NumericalError &e) {
            CHECK(std::string(e.what()).find("7777") != std::string::npos);
        }
    }
}

TEST_CASE("exceptions thrown by the integrand propagate") {
    auto f = [](RandomSeed, std::uint64_t i) -> double {
        if (i == 9000) {
            throw std::runtime_error("boom");
        }
        return 0.0;
    };
    CHECK_THROWS_WITH_AS(mc_mean(f, 20000, RandomSeed{1}, 3), "boom", std::runtime_error);
}

TEST_CASE("sample count preconditions") {
    auto f = [](RandomSeed, std::uint64_t) { return 2.0; };
    CHECK_THROWS_AS(mc_mean(f, 1, RandomSeed{1}), std::invalid_argument);
    CHECK_THROWS_AS(mc_mean(f, 0, RandomSeed{1}), std::invalid_argument);
    const auto one = mc_mean_any(f, 1, RandomSeed{1});
    CHECK(one.mean == 2.0);
    CHECK(one.std_error == 0.0);
    CHECK(one.n == 1);
}
