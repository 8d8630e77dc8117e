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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qrel/kernels.hpp"
#include "qrel/rng.hpp"

namespace {

using qrel::BasisIndex;
using qrel::QubitIndexSet;
using qrel::kernels::Amplitude;

std::vector<Amplitude> random_state(int num_qubits, std::uint64_t seed) {
    qrel::SeededRng rng(seed);
    std::vector<Amplitude> amps(std::size_t{1} << num_qubits);
    double total = 0.0;
    for (auto& a : amps) {
        a = {rng.next_unit() - 0.5, rng.next_unit() - 0.5};
        total += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto& a : amps) a *= scale;
    return amps;
}

double max_abs_diff(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool parity_mark(BasisIndex b) { return __builtin_parityll(b) != 0; }

// 8 qubits stays below the parallel cutoff, 13 is above it; parity between
// the two namespaces has to hold on both sides of the dispatch.
const int kSizes[] = {8, 13};

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("norm_sq matches between serial and parallel") {
    for (int n : kSizes) {
        auto amps = random_state(n, 11 + n);
        CHECK(qrel::kernels::norm_sq(amps) ==
              doctest::Approx(qrel::kernels::serial::norm_sq(amps)).epsilon(1e-13));
        CHECK(qrel::kernels::serial::norm_sq(amps) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("scale matches") {
    for (int n : kSizes) {
        auto a = random_state(n, 23 + n);
        auto b = a;
        qrel::kernels::scale(a, 1.7);
        qrel::kernels::serial::scale(b, 1.7);
        CHECK(max_abs_diff(a, b) == 0.0);
    }
}

TEST_CASE("phase_flip matches and is an involution") {
    for (int n : kSizes) {
        auto a = random_state(n, 31 + n);
        auto b = a;
        const auto original = a;
        qrel::kernels::phase_flip(a, parity_mark);
        qrel::kernels::serial::phase_flip(b, parity_mark);
        CHECK(max_abs_diff(a, b) == 0.0);
        qrel::kernels::phase_flip(a, parity_mark);
        CHECK(max_abs_diff(a, original) == 0.0);
    }
}

TEST_CASE("invert_about_mean matches") {
    for (int n : kSizes) {
        auto a = random_state(n, 41 + n);
        auto b = a;
        qrel::kernels::invert_about_mean(a);
        qrel::kernels::serial::invert_about_mean(b);
        CHECK(max_abs_diff(a, b) < 1e-14);
    }
}

TEST_CASE("reflect_about matches serial and preserves norm") {
    for (int n : kSizes) {
        auto a = random_state(n, 53 + n);
        auto b = a;
        auto ref = random_state(n, 59 + n);
        qrel::kernels::reflect_about(a, ref);
        qrel::kernels::serial::reflect_about(b, ref);
        CHECK(max_abs_diff(a, b) < 1e-14);
        CHECK(qrel::kernels::serial::norm_sq(a) == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("reflect_about a uniform reference equals inversion about the mean") {
    const int n = 6;
    auto a = random_state(n, 61);
    auto b = a;
    std::vector<Amplitude> uniform(a.size(), Amplitude{1.0 / std::sqrt(double(a.size())), 0.0});
    qrel::kernels::serial::reflect_about(a, uniform);
    qrel::kernels::serial::invert_about_mean(b);
    CHECK(max_abs_diff(a, b) < 1e-14);
}

TEST_CASE("reflect_about is an involution") {
    const int n = 7;
    auto a = random_state(n, 67);
    const auto original = a;
    auto ref = random_state(n, 71);
    qrel::kernels::serial::reflect_about(a, ref);
    qrel::kernels::serial::reflect_about(a, ref);
    CHECK(max_abs_diff(a, original) < 1e-13);
}

TEST_CASE("xor_copy_permute matches serial and inverts itself") {
    for (int n : kSizes) {
        auto in = random_state(n, 73 + n);
        const auto source = QubitIndexSet::range(0, n / 2);
        const auto target = QubitIndexSet::range(n / 2, n / 2);
        std::vector<Amplitude> out_p(in.size()), out_s(in.size()), back(in.size());
        qrel::kernels::xor_copy_permute(in, out_p, source, target);
        qrel::kernels::serial::xor_copy_permute(in, out_s, source, target);
        CHECK(max_abs_diff(out_p, out_s) == 0.0);
        qrel::kernels::serial::xor_copy_permute(out_s, back, source, target);
        CHECK(max_abs_diff(back, in) == 0.0);
    }
}

TEST_CASE("apply_pair_matrix matches serial") {
    const std::array<Amplitude, 16> m = {
        Amplitude{0.3, 0.1}, Amplitude{0.0},      Amplitude{1.0},      Amplitude{0.0},
        Amplitude{0.5},      Amplitude{0.2, 0.7}, Amplitude{0.0},      Amplitude{0.0},
        Amplitude{0.0},      Amplitude{1.0},      Amplitude{0.1},      Amplitude{0.0},
        Amplitude{0.0},      Amplitude{0.0},      Amplitude{0.4, 0.4}, Amplitude{1.0},
    };
    for (int n : kSizes) {
        auto a = random_state(n, 79 + n);
        auto b = a;
        qrel::kernels::apply_pair_matrix(a, n - 1, 1, m);
        qrel::kernels::serial::apply_pair_matrix(b, n - 1, 1, m);
        CHECK(max_abs_diff(a, b) == 0.0);
    }
}

TEST_CASE("ancilla_rotate matches serial and keeps norm") {
    for (int n : kSizes) {
        auto a = random_state(n - 1, 83 + n);
        std::vector<Amplitude> full_a(std::size_t{1} << n, Amplitude{0.0});
        std::copy(a.begin(), a.end(), full_a.begin());
        auto full_b = full_a;
        const auto weight = [](BasisIndex b) {
            const double w = 0.25 + 0.5 * ((b >> 1) & 1);
            return std::pair<double, double>{w, 0.3 * (b & 1)};
        };
        qrel::kernels::ancilla_rotate(full_a, n - 1, weight);
        qrel::kernels::serial::ancilla_rotate(full_b, n - 1, weight);
        CHECK(max_abs_diff(full_a, full_b) == 0.0);
        CHECK(qrel::kernels::serial::norm_sq(full_a) == doctest::Approx(1.0).epsilon(1e-11));
    }
}

TEST_CASE("probabilities_into matches serial") {
    for (int n : kSizes) {
        auto a = random_state(n, 89 + n);
        std::vector<double> p(a.size()), q(a.size());
        qrel::kernels::probabilities_into(a, p);
        qrel::kernels::serial::probabilities_into(a, q);
        CHECK(p == q);
    }
}

TEST_CASE("marginal_accumulate matches serial") {
    for (int n : kSizes) {
        auto a = random_state(n, 97 + n);
        const QubitIndexSet keep({1, 2, n - 1});
        std::vector<double> p(8, 0.0), q(8, 0.0);
        qrel::kernels::marginal_accumulate(a, keep, p);
        qrel::kernels::serial::marginal_accumulate(a, keep, q);
        for (std::size_t i = 0; i < p.size(); ++i)
            CHECK(p[i] == doctest::Approx(q[i]).epsilon(1e-13));
        double total = 0.0;
        for (double v : q) total += v;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("marked_mass matches serial") {
    for (int n : kSizes) {
        auto a = random_state(n, 101 + n);
        CHECK(qrel::kernels::marked_mass(a, parity_mark) ==
              doctest::Approx(qrel::kernels::serial::marked_mass(a, parity_mark))
                  .epsilon(1e-13));
    }
}

} // TEST_SUITE

