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

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrel/relation.hpp"
#include "qrel/state_vector.hpp"

namespace qrel {

/// Pairwise tuple scorer generalizing equijoin equality. eval returns a
/// complex z with |z| <= 1. At level 1 the score is read as a classical
/// real weight w = z (z must be real in [0,1]); at level 2 the weight is
/// w = |z|^2 and arg(z) becomes the ancilla phase, so a real z in [0,1]
/// at level 1 reproduces the sqrt(z)-amplitude encoding directly.
struct SimilarityOp {
    int level = 1;
    std::function<std::complex<double>(BasisIndex, BasisIndex)> eval;
    // Optional arity; when set, join/similarity calls verify it.
    std::optional<Schema> schema_r;
    std::optional<Schema> schema_s;

    /// (weight, ancilla phase) for a tuple pair, validated.
    std::pair<double, double> weight_phase(BasisIndex i, BasisIndex j) const;
};

/// Constant similarity z.
SimilarityOp const_similarity(double z, int level = 1);

/// 1 when the named fields agree, else 0.
SimilarityOp equality_similarity(const Schema& schema_r, const Schema& schema_s,
                                 const std::string& field_r, const std::string& field_s,
                                 int level = 1);

/// max(0, 1 - |a - b| / k): graded closeness of two numeric fields.
SimilarityOp within_similarity(const Schema& schema_r, const Schema& schema_s,
                               const std::string& field_r, const std::string& field_s,
                               double k, int level = 1);

/// One output field of a combiner: which side and which field it copies.
struct CombineSource {
    enum class Side { kLeft, kRight };
    Side side = Side::kLeft;
    std::size_t field_index = 0;
};

/// Dyadic combining operator: builds an output tuple by rearranging fields
/// of the two inputs (permutation and projection on the joined domains).
struct CombineOp {
    Schema schema_r;
    Schema schema_s;
    Schema out_schema;
    std::vector<CombineSource> sources; // one per output field

    BasisIndex eval(BasisIndex left, BasisIndex right) const;

    /// All fields of r then all fields of s; InvalidCombine on a name clash.
    static CombineOp concat(const Schema& schema_r, const Schema& schema_s);

    /// concat, dropping the named field on the s side (the duplicate key of
    /// an equijoin).
    static CombineOp concat_drop(const Schema& schema_r, const Schema& schema_s,
                                 const std::string& dropped_s_field);

    /// Output fields by name, resolved against r first, then s. May drop
    /// and reorder fields; dropping makes the combiner non-injective.
    static CombineOp from_fields(const Schema& schema_r, const Schema& schema_s,
                                 const std::vector<std::string>& names);
};

/// Where the amplitude mass sat while a selection ran.
struct SelectionReport {
    int iterations = 0;
    double marked_fraction = 0.0;          // f of the input state
    double final_success_probability = 0.0;
    /// Signed marked-subspace amplitude after each completed iteration;
    /// entry 0 is the input state. Length iterations + 1.
    std::vector<std::pair<int, double>> amplitude_trace;
    /// Same quantity after every individual operator application (phase
    /// flip, then diffusion, per iteration). Length 2 * iterations + 1; the
    /// sign alternates at the phase-flip entries.
    std::vector<double> step_trace;
    long grover_steps = 0; // register-wide operator passes, 2 per iteration
};

struct JoinReport {
    double conditional_similarity = 0.0;
    double success_probability = 0.0; // ancilla=1 mass after amplification
    int iterations = 0;
    long quantum_steps = 0;             // iterations x 2 operator passes
    long classical_steps_reference = 0; // |r| * |s|
};

/// Options shared by the quantum operators.
struct QopsOptions {
    std::optional<int> iterations;  // nullopt: pick from the marked fraction
    bool postselect = true;         // condition results on the marked subspace
    int max_qubits = kDefaultMaxQubits;
};

/// floor((pi/4) * sqrt(1/f)) rotations, the count that lands the marked
/// amplitude nearest its peak. 0 when everything is already marked.
/// InvalidFraction unless 0 < f <= 1.
int optimal_iterations(double f);

/// Probability mass on marked basis states.
double marked_probability(const StateVector& state, const BasisPredicate& marked);

/// Amplitude amplification of the marked subspace: repeats (phase flip of
/// marked states; reflection about the input state). On a uniform input the
/// reflection equals inversion about the mean amplitude, and the marked
/// probability after k rounds is sin^2((2k+1) asin(sqrt(f))). EmptySelection
/// when the predicate marks no probability mass.
std::pair<StateVector, SelectionReport>
grover_select(const StateVector& state, const BasisPredicate& marked,
              std::optional<int> iterations = std::nullopt);

/// grover_select with a tuple-level predicate over the relation schema.
std::pair<StateVector, SelectionReport>
grover_select_tuples(const StateVector& state, const Schema& schema,
                     const std::function<bool(BasisIndex)>& tuple_predicate,
                     std::optional<int> iterations = std::nullopt);

/// Measures the kept fields and discards the rest: the marginal distribution
/// over the named fields, as a relation over the projected schema (fields in
/// the order listed).
WeightedRelation project(const StateVector& state, const Schema& schema,
                         const std::vector<std::string>& keep_fields);

/// Expected similarity weight of a pair drawn from the two relations:
/// sum over i,j of w(i,j) * P_a(i) * P_b(j). Always in [0,1].
double conditional_similarity(const WeightedRelation& rel_a, const WeightedRelation& rel_b,
                              const SimilarityOp& sim);

/// The generalized join pipeline: product state of the two relations plus an
/// ancilla, similarity rotation of the ancilla, amplitude amplification of
/// ancilla=1, combiner relabeling, projection onto the output fields. With
/// postselect the result conditions on ancilla=1 exactly; otherwise it is the
/// unconditioned distribution and the report carries the success probability.
/// EmptyJoin when no pair is similar; QubitBudgetExceeded when
/// c_r + c_s + 1 qubits do not fit.
std::pair<WeightedRelation, JoinReport>
join_quantum(const WeightedRelation& rel_r, const WeightedRelation& rel_s,
             const CombineOp& combine, const SimilarityOp& sim,
             const QopsOptions& options = {});

} // namespace qrel
