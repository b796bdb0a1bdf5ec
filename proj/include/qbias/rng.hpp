// Copyright 2026 The qbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <numbers>
#include <random>
#include <utility>

namespace qbias {

/// Seedable 64-bit generator (mt19937_64) with platform-independent
/// derived draws. std:: distributions are implementation-defined, so the
/// uniform/normal/bounded draws here are written out explicitly to keep
/// experiment outputs identical across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (one value per call, no caching).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Unbiased integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next();
            if (r >= limit) return r % bound;
        }
    }

  private:
    std::mt19937_64 engine_;
};

/// Independent stream for task `stream` of an experiment seeded with `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t stream) { return Rng(seed + stream); }

/// Fisher-Yates shuffle driven by Rng::below.
template <std::random_access_iterator It>
void shuffle(It first, It last, Rng &rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = rng.below(i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

}  // namespace qbias
