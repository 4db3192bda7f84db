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

/// @file stochastics.hpp
/// Counter-based random draws and a deterministic Monte Carlo mean.
///
/// Every draw is a pure function of (seed, index, stream), so trials can be
/// evaluated in any order or on any number of threads with identical results.

#include <cstdint>
#include <functional>

namespace clab::stochastics {

struct RandomSeed {
    std::uint64_t value = 0;

    friend bool operator==(const RandomSeed &, const RandomSeed &) = default;
};

struct UniformInterval {
    double lo = 0.0;
    double hi = 1.0;

    void validate() const;
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
};

/// 64-bit mix of (seed, index, stream). SplitMix64 finalizer chain.
std::uint64_t hash_counter(RandomSeed seed, std::uint64_t index, std::uint64_t stream = 0) noexcept;

/// Uniform double in [0, 1) built from the top 53 bits of hash_counter.
double uniform01(RandomSeed seed, std::uint64_t index, std::uint64_t stream = 0) noexcept;

/// Seed for an independent sub-experiment (e.g. one trial) keyed by index.
RandomSeed derive_seed(RandomSeed seed, std::uint64_t index) noexcept;

/// Deterministic draw on [lo, hi] depending only on (seed, index).
double sample_uniform(const UniformInterval &interval, RandomSeed seed, std::uint64_t index);

/// Sequential view over the counter space of one (seed, index) pair, for
/// consumers that need several draws per trial.
class CounterStream {
  public:
    CounterStream(RandomSeed seed, std::uint64_t index) noexcept : seed_(seed), index_(index) {}

    double uniform() noexcept { return uniform01(seed_, index_, counter_++); }
    double uniform(const UniformInterval &interval);
    /// Standard normal via Box-Muller (consumes two uniforms).
    double normal() noexcept;

  private:
    RandomSeed seed_;
    std::uint64_t index_;
    std::uint64_t counter_ = 0;
};

using TrialFunction = std::function<double(RandomSeed, std::uint64_t)>;

/// Mean and standard error of f(seed, i) for i in [0, n).
///
/// The sum behind the mean is accumulated exactly in fixed point, so the
/// mean is bit-identical under any thread count and any permutation of the
/// trial values. The spread is reduced in fixed blocks of indices merged in
/// a fixed binary tree, so the standard error is bit-identical for any
/// `threads` value. `threads == 0` uses the hardware
/// concurrency. Requires n >= 2; a non-finite f(i) throws with the smallest
/// offending index.
MonteCarloEstimate mc_mean(const TrialFunction &f, std::uint64_t n, RandomSeed seed,
                           unsigned threads = 0);

/// Same reduction without the n >= 2 precondition; stderr is 0 when n == 1.
MonteCarloEstimate mc_mean_any(const TrialFunction &f, std::uint64_t n, RandomSeed seed,
                               unsigned threads = 0);

}  // namespace clab::stochastics
