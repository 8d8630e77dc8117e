// Copyright 2026 The qrel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qrel {

// Sampling avoids std::uniform_real_distribution: its output is
// implementation-defined, and seeded runs must replay bit-for-bit.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the high 53 bits of a word.
inline double unit_double(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double next_unit() { return unit_double(engine_()); }

  private:
    std::mt19937_64 engine_;
};

/// Inclusive prefix sums of a weight vector; the final entry is the total.
inline std::vector<double> prefix_sums(std::span<const double> weights) {
    std::vector<double> sums(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        sums[i] = acc;
    }
    return sums;
}

/// Index of the first prefix sum exceeding u * total. Binary search keeps
/// 1e5-shot sampling runs cheap.
inline std::size_t sample_from_prefix(std::span<const double> sums, double u) {
    double target = u * sums.back();
    std::size_t lo = 0, hi = sums.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (sums[mid] > target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

} // namespace qrel
