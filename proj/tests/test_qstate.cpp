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

#include "qrel/state_vector.hpp"

namespace {

using qrel::Amplitude;
using qrel::BasisIndex;
using qrel::ErrorCode;
using qrel::QrelError;
using qrel::QubitIndexSet;
using qrel::StateVector;

constexpr double kInvSqrt2 = 0.7071067811865476;

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const QrelError& e) {
        return e.code() == code;
    }
    return false;
}

} // namespace

TEST_SUITE("qstate") {

TEST_CASE("zero and basis states") {
    const auto z = StateVector::zero_state(3);
    CHECK(z.dim() == 8);
    CHECK(z.amplitude(0) == Amplitude{1.0, 0.0});
    const auto b = StateVector::basis_state(3, 5);
    CHECK(b.amplitude(5) == Amplitude{1.0, 0.0});
    CHECK(b.amplitude(0) == Amplitude{0.0, 0.0});
    CHECK(b.norm_sq() == doctest::Approx(1.0));
}

TEST_CASE("from_amplitudes rescales drifted input and logs it") {
    std::vector<Amplitude> amps = {{0.5, 0.0}, {0.5, 0.0}, {0.5, 0.0}, {0.4, 0.0}};
    const auto s = StateVector::from_amplitudes(2, amps);
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(s.audit_log().size() == 1);
    CHECK(s.audit_log()[0].kind == "renormalize");
    CHECK(throws_code(ErrorCode::ZeroNorm, [] {
        StateVector::from_amplitudes(1, {{0.0, 0.0}, {0.0, 0.0}});
    }));
    CHECK(throws_code(ErrorCode::QubitBudgetExceeded,
                      [] { StateVector::zero_state(25); }));
}

TEST_CASE("phase flip is exact and self-inverse") {
    auto s = StateVector::from_amplitudes(
        2, {{0.5, 0.1}, {0.5, -0.1}, {0.5, 0.0}, {-0.47, 0.0}});
    const auto before = std::vector<Amplitude>(s.amplitudes().begin(), s.amplitudes().end());
    const auto marked = [](BasisIndex b) { return b == 2; };
    s.apply_phase_flip(marked);
    CHECK(s.amplitude(2) == -before[2]);
    CHECK(s.amplitude(1) == before[1]);
    s.apply_phase_flip(marked);
    for (BasisIndex i = 0; i < 4; ++i) CHECK(s.amplitude(i) == before[i]);
}

TEST_CASE("diffusion on a uniform state is the identity") {
    const int n = 4;
    std::vector<Amplitude> amps(16, Amplitude{0.25, 0.0});
    auto s = StateVector::from_amplitudes(n, amps);
    s.apply_diffusion();
    for (BasisIndex i = 0; i < 16; ++i)
        CHECK(std::abs(s.amplitude(i) - Amplitude{0.25, 0.0}) < 1e-14);
}

TEST_CASE("one Grover round on 4 states lands the marked one with certainty") {
    std::vector<Amplitude> amps(4, Amplitude{0.5, 0.0});
    auto s = StateVector::from_amplitudes(2, amps);
    s.apply_phase_flip([](BasisIndex b) { return b == 3; });
    s.apply_diffusion();
    CHECK(std::abs(s.amplitude(3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.amplitude(0)) < 1e-12);
}

TEST_CASE("reflect_about the state itself is the identity") {
    auto s = StateVector::from_amplitudes(2, {{0.5, 0.0}, {0.5, 0.0}, {kInvSqrt2, 0.0}, {0.0, 0.0}});
    const auto ref = s;
    s.apply_reflect_about(ref);
    for (BasisIndex i = 0; i < 4; ++i)
        CHECK(std::abs(s.amplitude(i) - ref.amplitude(i)) < 1e-14);
}

TEST_CASE("cnot copy entangles and rejects dirty targets") {
    auto s = StateVector::from_amplitudes(4, {{kInvSqrt2, 0.0}, {0.0, 0.0}, {0.0, 0.0},
                                              {kInvSqrt2, 0.0}, {0.0, 0.0}, {0.0, 0.0},
                                              {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0},
                                              {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0},
                                              {0.0, 0.0}, {0.0, 0.0}});
    s.apply_cnot_copy(QubitIndexSet::range(0, 2), QubitIndexSet::range(2, 2));
    CHECK(std::abs(s.amplitude(0b0000) - Amplitude{kInvSqrt2, 0.0}) < 1e-14);
    CHECK(std::abs(s.amplitude(0b1111) - Amplitude{kInvSqrt2, 0.0}) < 1e-14);

    auto dirty = StateVector::basis_state(2, 2);
    CHECK(throws_code(ErrorCode::TargetNotZero, [&] {
        dirty.apply_cnot_copy(QubitIndexSet{0}, QubitIndexSet{1});
    }));
}

TEST_CASE("measure_all is reproducible and follows the distribution") {
    auto s = StateVector::from_amplitudes(2, {{0.0, 0.0}, {0.6, 0.0}, {0.0, 0.8}, {0.0, 0.0}});
    const BasisIndex first = s.measure_all(99);
    CHECK(s.measure_all(99) == first);
    int ones = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const BasisIndex m = s.measure_all(seed);
        CHECK((m == 1 || m == 2));
        ones += m == 1;
    }
    CHECK(ones > 280);
    CHECK(ones < 440);
}

TEST_CASE("marginal_distribution sums kept-qubit buckets") {
    auto s = StateVector::from_amplitudes(3, {{0.5, 0.0}, {0.5, 0.0}, {0.5, 0.0}, {0.0, 0.0},
                                              {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.5, 0.0}});
    const auto marg = s.marginal_distribution(QubitIndexSet{0});
    CHECK(marg[0] == doctest::Approx(0.5));
    CHECK(marg[1] == doctest::Approx(0.5));
    const auto marg2 = s.marginal_distribution(QubitIndexSet{1, 2});
    CHECK(marg2[0] == doctest::Approx(0.5));
    CHECK(marg2[1] == doctest::Approx(0.25));
    CHECK(marg2[3] == doctest::Approx(0.25));
}

TEST_CASE("mix gate on |00> yields the renormalized first column") {
    auto s = StateVector::zero_state(2);
    s.apply_mix_gate(1, 0);
    const double norm = std::sqrt(1.0 + 0.5);
    CHECK(std::abs(s.amplitude(0) - Amplitude{1.0 / norm, 0.0}) < 1e-12);
    CHECK(std::abs(s.amplitude(1) - Amplitude{kInvSqrt2 / norm, 0.0}) < 1e-12);
    CHECK(std::abs(s.amplitude(2)) < 1e-15);
    CHECK(std::abs(s.amplitude(3)) < 1e-15);
    REQUIRE(!s.audit_log().empty());
    CHECK(s.audit_log()[0].kind == "non_unitary_apply");
}

TEST_CASE("pair matrix that annihilates the state raises ZeroNorm") {
    const std::array<Amplitude, 16> zero_matrix{};
    auto s = StateVector::zero_state(2);
    CHECK(throws_code(ErrorCode::ZeroNorm, [&] { s.apply_pair_matrix(1, 0, zero_matrix); }));
}

TEST_CASE("ancilla rotation splits mass by the weight function") {
    auto s = StateVector::zero_state(2);
    s.apply_ancilla_rotation(1, [](BasisIndex) {
        return std::pair<double, double>{0.36, 0.0};
    });
    CHECK(std::norm(s.amplitude(0)) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(std::norm(s.amplitude(2)) == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
}

} // TEST_SUITE

