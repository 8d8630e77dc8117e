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
#include <functional>
#include <map>

#include "qrel/coracle.hpp"
#include "qrel/rng.hpp"

namespace {

using qrel::BasisIndex;
using qrel::CombineOp;
using qrel::ErrorCode;
using qrel::QrelError;
using qrel::RowWeight;
using qrel::Schema;
using qrel::SimilarityOp;
using qrel::StepCounter;
using qrel::WeightedRelation;

bool throws_code(ErrorCode code, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const QrelError& e) {
        return e.code() == code;
    }
    return false;
}

WeightedRelation random_relation(const Schema& schema, int max_rows, qrel::SeededRng& rng) {
    const BasisIndex dim = BasisIndex{1} << schema.total_bits();
    const int rows = 1 + static_cast<int>(rng.next_u64() % max_rows);
    std::map<BasisIndex, RowWeight> weights;
    double total = 0.0;
    for (int i = 0; i < rows; ++i) {
        const BasisIndex bits = rng.next_u64() % dim;
        const double p = 0.05 + rng.next_unit();
        weights[bits].prob += p;
        weights[bits].phase = rng.next_unit() * 6.0 - 3.0;
        total += p;
    }
    for (auto& [bits, w] : weights) w.prob /= total;
    return make_relation(schema, std::move(weights));
}

// Independent enumeration of the joined distribution, structured unlike
// classical_join: bucket masses per output tuple first, normalize last.
std::pair<std::map<BasisIndex, double>, double>
naive_join(const WeightedRelation& r, const WeightedRelation& s,
           const CombineOp& combine, const SimilarityOp& sim) {
    std::map<BasisIndex, double> mass;
    double total = 0.0;
    for (const auto& [i, wi] : r.rows) {
        for (const auto& [j, wj] : s.rows) {
            const auto [w, phase] = sim.weight_phase(i, j);
            (void)phase;
            const double m = w * wi.prob * wj.prob;
            if (m == 0.0) continue;
            mass[combine.eval(i, j)] += m;
            total += m;
        }
    }
    for (auto& [bits, m] : mass) m /= total;
    return {std::move(mass), total};
}

} // namespace

TEST_SUITE("coracle") {

TEST_CASE("classical_select filters, renormalizes, and counts") {
    const Schema s{{{"a", 2}, {"b", 2}}};
    const auto rel = make_relation(s, {{0b0000, {0.5, 0.0}},
                                       {0b0101, {0.25, 0.0}},
                                       {0b1010, {0.125, 0.0}},
                                       {0b1111, {0.125, 0.0}}});
    StepCounter counter;
    const auto picked = classical_select(
        rel, [&](BasisIndex t) { return s.field_value(t, 0) >= 1; }, &counter);
    CHECK(counter.comparisons == 4);
    CHECK(counter.index_lookups == 0);
    CHECK(picked.row_count() == 3);
    CHECK(picked.probability(0b0101) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(picked.probability(0b1010) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(picked.probability(0b1111) == doctest::Approx(0.25).epsilon(1e-12));

    CHECK(throws_code(ErrorCode::EmptySelection, [&] {
        classical_select(rel, [](BasisIndex) { return false; });
    }));

    const auto all = classical_select(rel, [](BasisIndex) { return true; });
    for (const auto& [bits, w] : rel.rows)
        CHECK(all.probability(bits) == doctest::Approx(w.prob).epsilon(1e-12));
}

TEST_CASE("classical_project marginalizes onto the kept fields") {
    // Rows (0,0) 1/4, (1,0) 1/4, (1,1) 1/2 over one-bit fields; keeping the
    // second field gives 0 -> 1/2 and 1 -> 1/2, keeping the first gives
    // 0 -> 1/4 and 1 -> 3/4.
    const Schema s{{{"x", 1}, {"y", 1}}};
    const auto rel = make_relation(
        s, {{0b00, {0.25, 0.0}}, {0b10, {0.25, 0.0}}, {0b11, {0.5, 0.0}}});

    const auto keep_y = classical_project(rel, {"y"});
    CHECK(keep_y.schema.to_string() == "y:1");
    CHECK(keep_y.probability(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(keep_y.probability(1) == doctest::Approx(0.5).epsilon(1e-12));

    const auto keep_x = classical_project(rel, {"x"});
    CHECK(keep_x.probability(0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(keep_x.probability(1) == doctest::Approx(0.75).epsilon(1e-12));

    CHECK(throws_code(ErrorCode::UnknownField,
                      [&] { classical_project(rel, {"z"}); }));
}

TEST_CASE("project reorders fields by the keep list") {
    const Schema s{{{"a", 2}, {"b", 1}}};
    const auto rel = make_relation(s, {{0b011, {1.0, 0.0}}}); // a=1, b=1
    const auto flipped = classical_project(rel, {"b", "a"});
    CHECK(flipped.schema.to_string() == "b:1,a:2");
    CHECK(flipped.probability(0b101) == doctest::Approx(1.0));
}

TEST_CASE("select then project commutes with project-aware select") {
    const Schema s{{{"a", 2}, {"b", 2}}};
    qrel::SeededRng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rel = random_relation(s, 8, rng);
        const auto pred = [&](BasisIndex t) { return s.field_value(t, 0) % 2 == 0; };
        WeightedRelation left{Schema{{{"a", 1}}}, {}};
        bool empty = false;
        try {
            left = classical_project(classical_select(rel, pred), {"a"});
        } catch (const QrelError& e) {
            REQUIRE(e.code() == ErrorCode::EmptySelection);
            empty = true;
        }
        if (empty) continue;
        const auto right = classical_select(
            classical_project(rel, {"a"}),
            [&](BasisIndex t) { return t % 2 == 0; });
        const auto delta = compare_distributions(left, right);
        CHECK(delta.tv_distance < 1e-12);
    }
}

TEST_CASE("classical_join matches an independent enumeration") {
    const Schema rs{{{"a", 3}}};
    const Schema ss{{{"k", 3}}};
    qrel::SeededRng rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        const auto r = random_relation(rs, 8, rng);
        const auto s = random_relation(ss, 8, rng);
        const int span = 1 + static_cast<int>(rng.next_u64() % 3);
        const auto sim = qrel::within_similarity(rs, ss, "a", "k", span);
        const auto combine = CombineOp::concat(rs, ss);

        std::pair<WeightedRelation, double> got{WeightedRelation{rs, {}}, 0.0};
        bool empty = false;
        StepCounter counter;
        try {
            got = classical_join(r, s, combine, sim, &counter);
        } catch (const QrelError& e) {
            REQUIRE(e.code() == ErrorCode::EmptyJoin);
            empty = true;
        }
        const auto [want, csim] = naive_join(r, s, combine, sim);
        if (empty) {
            CHECK(csim <= 1e-18);
            continue;
        }
        CHECK(counter.comparisons ==
              static_cast<long>(r.row_count() * s.row_count()));
        CHECK(got.second == doctest::Approx(csim).epsilon(1e-12));
        double sum = 0.0;
        for (const auto& [bits, w] : got.first.rows) sum += w.prob;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(got.first.row_count() == want.size());
        for (const auto& [bits, p] : want)
            CHECK(got.first.probability(bits) == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("classical_join rejects an all-zero similarity") {
    const Schema rs{{{"a", 2}}};
    const Schema ss{{{"k", 2}}};
    const auto r = uniform_relation(rs, {0, 1});
    const auto s = uniform_relation(ss, {2, 3});
    CHECK(throws_code(ErrorCode::EmptyJoin, [&] {
        classical_join(r, s, CombineOp::concat(rs, ss),
                       qrel::equality_similarity(rs, ss, "a", "k"));
    }));
}

TEST_CASE("indexed equijoin agrees with the generic join and counts steps") {
    const Schema rs{{{"a", 2}, {"b", 2}}};
    const Schema ss{{{"k", 3}, {"c", 1}}};
    // s keys 0..7 all distinct: a valid unique index, ceil(log2 8) = 3.
    std::map<BasisIndex, RowWeight> srows;
    for (BasisIndex k = 0; k < 8; ++k)
        srows[(k << 1) | (k & 1)] = RowWeight{0.125, 0.0};
    const auto s = make_relation(ss, std::move(srows));
    const auto r = make_relation(rs, {{0b0000, {0.5, 0.0}},
                                      {0b0101, {0.25, 0.0}},
                                      {0b1010, {0.125, 0.0}},
                                      {0b1111, {0.125, 0.0}}});

    StepCounter counter;
    const auto [joined, csim] =
        classical_equijoin_indexed(r, s, "a", "k", &counter);
    CHECK(counter.index_lookups == 4);
    CHECK(counter.comparisons == 12); // 4 rows * ceil(log2 8)

    StepCounter brute;
    const auto [want, want_csim] = classical_join(
        r, s, CombineOp::concat_drop(rs, ss, "k"),
        qrel::equality_similarity(rs, ss, "a", "k"), &brute);
    CHECK(brute.comparisons == 32);
    CHECK(csim == doctest::Approx(want_csim).epsilon(1e-12));
    const auto delta = compare_distributions(joined, want);
    CHECK(delta.tv_distance < 1e-12);
}

TEST_CASE("indexed equijoin demands a primary key") {
    const Schema rs{{{"a", 2}}};
    const Schema ss{{{"k", 2}, {"c", 2}}};
    const auto r = uniform_relation(rs, {0, 1});
    const auto s = uniform_relation(ss, {0b0000, 0b0001, 0b0100}); // k=0 twice
    CHECK(throws_code(ErrorCode::NotPrimaryKey,
                      [&] { classical_equijoin_indexed(r, s, "a", "k"); }));
}

TEST_CASE("compare_distributions") {
    const Schema s{{{"a", 2}}};
    const auto a = make_relation(s, {{0, {0.5, 0.0}}, {1, {0.5, 0.0}}});
    const auto same = compare_distributions(a, a);
    CHECK(same.tv_distance == 0.0);
    CHECK(same.max_abs_diff == 0.0);

    const auto b = make_relation(s, {{0, {0.4, 0.0}}, {2, {0.6, 0.0}}});
    const auto delta = compare_distributions(a, b);
    CHECK(delta.tv_distance == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(delta.max_abs_diff == doctest::Approx(0.6).epsilon(1e-12));

    const Schema other{{{"z", 2}}};
    CHECK(throws_code(ErrorCode::SchemaMismatch, [&] {
        compare_distributions(a, make_relation(other, {{0, {1.0, 0.0}}}));
    }));
}

} // TEST_SUITE
