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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qrel/qops.hpp"
#include "qrel/relation.hpp"

namespace qrel {

// Classical reference evaluators. These compute the exact target
// distribution of every operator by brute force over the stored rows, and
// count the abstract work units the cost model charges them.

/// Work-unit tally. Every tuple inspection is a comparison; consulting a
/// prebuilt index once is an index lookup.
struct StepCounter {
    long comparisons = 0;
    long index_lookups = 0;

    long total() const { return comparisons + index_lookups; }
};

/// Filters rows by the predicate and renormalizes. Charges one comparison
/// per stored row. EmptySelection when nothing passes.
WeightedRelation classical_select(const WeightedRelation& rel,
                                  const std::function<bool(BasisIndex)>& predicate,
                                  StepCounter* counter = nullptr);

/// Marginal distribution over the named fields, in the order listed.
WeightedRelation classical_project(const WeightedRelation& rel,
                                   const std::vector<std::string>& keep_fields);

/// Generalized join by full enumeration: every pair (i, j) contributes
/// w(i, j) * P_r(i) * P_s(j) to its combined tuple, normalized by the
/// conditional similarity. Charges |r| * |s| comparisons. Returns the
/// relation and the conditional similarity; EmptyJoin when it vanishes.
std::pair<WeightedRelation, double>
classical_join(const WeightedRelation& rel_r, const WeightedRelation& rel_s,
               const CombineOp& combine, const SimilarityOp& sim,
               StepCounter* counter = nullptr);

/// Equijoin through a unique-key index on s: one lookup per r row plus
/// ceil(log2 |s|) comparisons each, the binary-search cost. NotPrimaryKey
/// when a key value repeats in s. Combines as concat dropping the s key.
std::pair<WeightedRelation, double>
classical_equijoin_indexed(const WeightedRelation& rel_r, const WeightedRelation& rel_s,
                           const std::string& key_r, const std::string& key_s,
                           StepCounter* counter = nullptr);

/// Row-wise distance between two distributions over the same schema.
struct DistributionDelta {
    double tv_distance = 0.0;   // half the L1 distance
    double max_abs_diff = 0.0;
};

DistributionDelta compare_distributions(const WeightedRelation& rel_a,
                                        const WeightedRelation& rel_b);

} // namespace qrel
