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

#include "clab/stochastics.hpp"

#include "clab/errors.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace clab::stochastics {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kBlock = 4096;

constexpr std::uint64_t splitmix(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double pairwise_sum(const double *x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += x[i];
        }
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

// Exact fixed-point sum of doubles. Bit k of the value sits at 2^(k - 1074);
// limbs hold 32 bits each plus headroom for carries, so the state after
// normalize() depends only on the multiset of added values.
class ExactSum {
  public:
    void add(double x) {
        if (x == 0.0) {
            return;
        }
        int e = 0;
        const double frac = std::frexp(std::abs(x), &e);  // |x| = frac * 2^e, frac in [0.5, 1)
        int shift = e - 53 + kBias;                        // |x| = m * 2^(shift - bias)
        auto m = static_cast<std::uint64_t>(std::ldexp(frac, 53));
        if (shift < 0) {  // subnormal tail, exact because the low bits are zero
            m >>= -shift;
            shift = 0;
        }
        const int r = shift % 32;
        const std::uint64_t lo = m << r;  // m < 2^53 and r < 32: at most 85 bits in (hi, lo)
        const std::uint64_t hi = r == 0 ? 0 : m >> (64 - r);
        const std::size_t k = static_cast<std::size_t>(shift / 32);
        const std::int64_t sign = x < 0.0 ? -1 : 1;
        limbs_[k] += sign * static_cast<std::int64_t>(lo & 0xFFFFFFFFULL);
        limbs_[k + 1] += sign * static_cast<std::int64_t>(lo >> 32);
        limbs_[k + 2] += sign * static_cast<std::int64_t>(hi);
    }

    void add(const ExactSum &other) {
        for (std::size_t i = 0; i < kLimbs; ++i) {
            limbs_[i] += other.limbs_[i];
        }
        normalize();
    }

    // Canonical form: limbs 0..n-2 in [0, 2^32), sign carried by the top limb.
    void normalize() {
        for (std::size_t i = 0; i + 1 < kLimbs; ++i) {
            const std::int64_t carry = limbs_[i] >> 32;  // floor division
            limbs_[i] -= carry * (std::int64_t{1} << 32);
            limbs_[i + 1] += carry;
        }
    }

    /// Requires a normalized state.
    double value() const {
        if (limbs_[kLimbs - 1] < 0) {
            ExactSum neg;
            for (std::size_t i = 0; i < kLimbs; ++i) {
                neg.limbs_[i] = -limbs_[i];
            }
            neg.normalize();
            return -neg.value();
        }
        double s = 0.0;
        for (std::size_t i = kLimbs; i-- > 0;) {
            if (limbs_[i] != 0) {
                s += std::ldexp(static_cast<double>(limbs_[i]), static_cast<int>(32 * i) - kBias);
            }
        }
        return s;
    }

  private:
    static constexpr int kBias = 1074;
    static constexpr std::size_t kLimbs = 70;  // 2098 value bits + 142 bits headroom
    std::array<std::int64_t, kLimbs> limbs_{};
};

struct Partial {
    double count = 0.0;
    double sum = 0.0;
    double m2 = 0.0;  // sum of squared deviations from this partial's mean
};

Partial merge(const Partial &a, const Partial &b) {
    if (a.count == 0.0) {
        return b;
    }
    if (b.count == 0.0) {
        return a;
    }
    Partial out;
    out.count = a.count + b.count;
    out.sum = a.sum + b.sum;
    const double delta = b.sum / b.count - a.sum / a.count;
    out.m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / out.count;
    return out;
}

Partial tree_merge(const std::vector<Partial> &parts, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) {
        return parts[lo];
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return merge(tree_merge(parts, lo, mid), tree_merge(parts, mid, hi));
}

}  // namespace

void UniformInterval::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
        throw std::invalid_argument("UniformInterval: require finite lo <= hi, got [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

std::uint64_t hash_counter(RandomSeed seed, std::uint64_t index, std::uint64_t stream) noexcept {
    std::uint64_t h = splitmix(seed.value);
    h = splitmix(h ^ index);
    h = splitmix(h ^ (stream * kGolden + 0x632BE59BD9B4E019ULL));
    return h;
}

double uniform01(RandomSeed seed, std::uint64_t index, std::uint64_t stream) noexcept {
    return static_cast<double>(hash_counter(seed, index, stream) >> 11) * 0x1.0p-53;
}

RandomSeed derive_seed(RandomSeed seed, std::uint64_t index) noexcept {
    return RandomSeed{hash_counter(seed, index, 0xD1B54A32D192ED03ULL)};
}

double sample_uniform(const UniformInterval &interval, RandomSeed seed, std::uint64_t index) {
    interval.validate();
    return interval.lo + (interval.hi - interval.lo) * uniform01(seed, index);
}

double CounterStream::uniform(const UniformInterval &interval) {
    interval.validate();
    return interval.lo + (interval.hi - interval.lo) * uniform();
}

double CounterStream::normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

MonteCarloEstimate mc_mean_any(const TrialFunction &f, std::uint64_t n, RandomSeed seed,
                               unsigned threads) {
    if (n < 1) {
        throw std::invalid_argument("mc_mean: n must be >= 1");
    }
    const std::uint64_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<Partial> partials(n_blocks);

    constexpr std::uint64_t kNoError = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> first_bad{kNoError};
    std::atomic<std::uint64_t> next_block{0};

    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint64_t error_block = kNoError;

    std::mutex sum_mutex;
    ExactSum exact_total;

    auto worker = [&]() {
        std::vector<double> buf(kBlock);
        ExactSum local;
        for (;;) {
            const std::uint64_t b = next_block.fetch_add(1);
            if (b >= n_blocks) {
                std::lock_guard lock(sum_mutex);
                exact_total.add(local);
                return;
            }
            const std::uint64_t lo = b * kBlock;
            const std::uint64_t hi = std::min(n, lo + kBlock);
            const std::size_t len = static_cast<std::size_t>(hi - lo);
            for (std::uint64_t i = lo; i < hi; ++i) {
                double v = 0.0;
                try {
                    v = f(seed, i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (b < error_block) {
                        error_block = b;
                        error = std::current_exception();
                    }
                    break;
                }
                if (!std::isfinite(v)) {
                    std::uint64_t cur = first_bad.load();
                    while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
                    }
                    buf[i - lo] = 0.0;
                    continue;
                }
                buf[i - lo] = v;
            }
            for (std::size_t k = 0; k < len; ++k) {
                local.add(buf[k]);
            }
            local.normalize();
            Partial p;
            p.count = static_cast<double>(len);
            p.sum = pairwise_sum(buf.data(), len);
            const double mean = p.sum / p.count;
            for (std::size_t k = 0; k < len; ++k) {
                buf[k] = (buf[k] - mean) * (buf[k] - mean);
            }
            p.m2 = pairwise_sum(buf.data(), len);
            partials[b] = p;
        }
    };

    unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n_threads = static_cast<unsigned>(std::min<std::uint64_t>(n_threads, n_blocks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    if (error) {
        std::rethrow_exception(error);
    }
    if (first_bad.load() != kNoError) {
        throw NumericalError("mc_mean: non-finite value at index " + std::to_string(first_bad.load()));
    }

    const Partial total = tree_merge(partials, 0, partials.size());
    MonteCarloEstimate est;
    est.n = n;
    // the exact sum makes the mean independent of evaluation and index order
    est.mean = exact_total.value() / total.count;
    est.std_error = n > 1 ? std::sqrt(std::max(0.0, total.m2) / (total.count - 1.0)) / std::sqrt(total.count)
                          : 0.0;
    return est;
}

MonteCarloEstimate mc_mean(const TrialFunction &f, std::uint64_t n, RandomSeed seed, unsigned threads) {
    if (n < 2) {
        throw std::invalid_argument("mc_mean: n must be >= 2, got " + std::to_string(n));
    }
    return mc_mean_any(f, n, seed, threads);
}

}  // namespace clab::stochastics
