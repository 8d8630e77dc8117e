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

#include "qrel/coracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace qrel {
namespace {

constexpr double kEmptyMassFloor = 1e-18;

long ceil_log2(std::size_t n) {
    if (n <= 1) return 0;
    return static_cast<long>(std::bit_width(n - 1));
}

} // namespace

WeightedRelation classical_select(const WeightedRelation& rel,
                                  const std::function<bool(BasisIndex)>& predicate,
                                  StepCounter* counter) {
    if (!predicate)
        throw QrelError(ErrorCode::InvalidArgument, "selection predicate is empty");
    if (counter != nullptr) counter->comparisons += static_cast<long>(rel.row_count());

    std::map<BasisIndex, RowWeight> kept;
    double mass = 0.0;
    for (const auto& [bits, weight] : rel.rows) {
        if (!predicate(bits)) continue;
        kept[bits] = weight;
        mass += weight.prob;
    }
    if (mass < kEmptyMassFloor)
        throw QrelError(ErrorCode::EmptySelection,
                        "selection predicate marks no probability mass");
    for (auto& [bits, weight] : kept) weight.prob /= mass;

    WeightedRelation out;
    out.schema = rel.schema;
    out.rows = std::move(kept);
    return out;
}

WeightedRelation classical_project(const WeightedRelation& rel,
                                   const std::vector<std::string>& keep_fields) {
    if (keep_fields.empty())
        throw QrelError(ErrorCode::InvalidArgument, "projection keeps no fields");
    std::vector<std::size_t> keep_idx;
    keep_idx.reserve(keep_fields.size());
    for (const std::string& name : keep_fields) keep_idx.push_back(rel.schema.require(name));
    if (std::set<std::size_t>(keep_idx.begin(), keep_idx.end()).size() != keep_idx.size())
        throw QrelError(ErrorCode::InvalidArgument, "projection lists a field twice");

    std::vector<Field> out_fields;
    out_fields.reserve(keep_idx.size());
    for (std::size_t idx : keep_idx) out_fields.push_back(rel.schema.field(idx));
    Schema out_schema(std::move(out_fields));

    std::map<BasisIndex, RowWeight> rows;
    std::vector<std::uint64_t> values(keep_idx.size());
    for (const auto& [bits, weight] : rel.rows) {
        for (std::size_t oi = 0; oi < keep_idx.size(); ++oi)
            values[oi] = rel.schema.field_value(bits, keep_idx[oi]);
        rows[out_schema.encode(values)].prob += weight.prob;
    }

    WeightedRelation out;
    out.schema = std::move(out_schema);
    out.rows = std::move(rows);
    return out;
}

std::pair<WeightedRelation, double>
classical_join(const WeightedRelation& rel_r, const WeightedRelation& rel_s,
               const CombineOp& combine, const SimilarityOp& sim,
               StepCounter* counter) {
    if (!(combine.schema_r == rel_r.schema) || !(combine.schema_s == rel_s.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "combiner was built for different input schemas");
    if (sim.schema_r && !(*sim.schema_r == rel_r.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "similarity was built for a different left schema");
    if (sim.schema_s && !(*sim.schema_s == rel_s.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "similarity was built for a different right schema");
    if (counter != nullptr)
        counter->comparisons +=
            static_cast<long>(rel_r.row_count()) * static_cast<long>(rel_s.row_count());

    std::map<BasisIndex, RowWeight> rows;
    double csim = 0.0;
    for (const auto& [i, wi] : rel_r.rows) {
        for (const auto& [j, wj] : rel_s.rows) {
            const double w = sim.weight_phase(i, j).first;
            if (w == 0.0) continue;
            const double mass = w * wi.prob * wj.prob;
            rows[combine.eval(i, j)].prob += mass;
            csim += mass;
        }
    }
    if (csim < kEmptyMassFloor)
        throw QrelError(ErrorCode::EmptyJoin, "no pair of tuples is similar");
    for (auto& [bits, weight] : rows) weight.prob /= csim;

    WeightedRelation out;
    out.schema = combine.out_schema;
    out.rows = std::move(rows);
    return {std::move(out), csim};
}

std::pair<WeightedRelation, double>
classical_equijoin_indexed(const WeightedRelation& rel_r, const WeightedRelation& rel_s,
                           const std::string& key_r, const std::string& key_s,
                           StepCounter* counter) {
    const std::size_t ir = rel_r.schema.require(key_r);
    const std::size_t is = rel_s.schema.require(key_s);

    std::unordered_map<std::uint64_t, BasisIndex> index;
    index.reserve(rel_s.row_count());
    for (const auto& [j, wj] : rel_s.rows) {
        const std::uint64_t key = rel_s.schema.field_value(j, is);
        if (!index.emplace(key, j).second)
            throw QrelError(ErrorCode::NotPrimaryKey,
                            "field '" + key_s + "' repeats value " + std::to_string(key) +
                                "; an index needs a primary key");
    }

    const CombineOp combine = CombineOp::concat_drop(rel_r.schema, rel_s.schema, key_s);
    const long per_probe = ceil_log2(rel_s.row_count());

    std::map<BasisIndex, RowWeight> rows;
    double csim = 0.0;
    for (const auto& [i, wi] : rel_r.rows) {
        if (counter != nullptr) {
            counter->index_lookups += 1;
            counter->comparisons += per_probe;
        }
        const auto hit = index.find(rel_r.schema.field_value(i, ir));
        if (hit == index.end()) continue;
        const double mass = wi.prob * rel_s.rows.at(hit->second).prob;
        rows[combine.eval(i, hit->second)].prob += mass;
        csim += mass;
    }
    if (csim < kEmptyMassFloor)
        throw QrelError(ErrorCode::EmptyJoin, "no pair of tuples is similar");
    for (auto& [bits, weight] : rows) weight.prob /= csim;

    WeightedRelation out;
    out.schema = combine.out_schema;
    out.rows = std::move(rows);
    return {std::move(out), csim};
}

DistributionDelta compare_distributions(const WeightedRelation& rel_a,
                                        const WeightedRelation& rel_b) {
    if (!(rel_a.schema == rel_b.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "distributions live over different schemas");
    std::set<BasisIndex> keys;
    for (const auto& [bits, weight] : rel_a.rows) keys.insert(bits);
    for (const auto& [bits, weight] : rel_b.rows) keys.insert(bits);

    DistributionDelta delta;
    double l1 = 0.0;
    for (BasisIndex bits : keys) {
        const double d = std::abs(rel_a.probability(bits) - rel_b.probability(bits));
        l1 += d;
        delta.max_abs_diff = std::max(delta.max_abs_diff, d);
    }
    delta.tv_distance = 0.5 * l1;
    return delta;
}

} // namespace qrel
