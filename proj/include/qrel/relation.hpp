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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qrel/bits.hpp"
#include "qrel/config.hpp"
#include "qrel/state_vector.hpp"

namespace qrel {

struct Field {
    std::string name;
    int width = 0; // bits
};

/// Ordered field list defining the tuple encoding. The first declared field
/// occupies the most significant bits of the c-bit pattern; tuple bit k maps
/// to qubit k of a register holding the relation.
class Schema {
  public:
    Schema() = default;
    explicit Schema(std::vector<Field> fields);

    int total_bits() const { return total_bits_; }
    std::size_t field_count() const { return fields_.size(); }
    const Field& field(std::size_t i) const { return fields_[i]; }
    const std::vector<Field>& fields() const { return fields_; }

    std::optional<std::size_t> find(std::string_view name) const;

    /// Index of a field that must exist; UnknownField otherwise.
    std::size_t require(std::string_view name) const;

    /// Bit offset of field i from the least significant end.
    int offset(std::size_t i) const { return offsets_[i]; }

    std::uint64_t field_value(BasisIndex bits, std::size_t i) const;

    /// Packs per-field values into a tuple bit pattern. FieldOverflow names
    /// the first field whose value needs more bits than its width.
    BasisIndex encode(std::span<const std::uint64_t> values) const;

    /// Inverse of encode.
    std::vector<std::uint64_t> decode(BasisIndex bits) const;

    /// Qubits carrying field i when the tuple occupies qubits
    /// [base, base + total_bits).
    QubitIndexSet field_qubits(std::size_t i, int base = 0) const;

    bool operator==(const Schema& other) const;

    /// "a:2,b:3" -- the header syntax of relation files.
    std::string to_string() const;

  private:
    std::vector<Field> fields_;
    std::vector<int> offsets_;
    int total_bits_ = 0;
};

/// Probability and phase attached to one stored tuple.
struct RowWeight {
    double prob = 0.0;
    double phase = 0.0; // radians
};

/// Classical relation with per-row probabilities summing to 1 and optional
/// per-row phases. Rows are keyed by their tuple bit pattern; zero-probability
/// rows are never stored. Immutable by convention once built.
struct WeightedRelation {
    Schema schema;
    std::map<BasisIndex, RowWeight> rows;

    std::size_t row_count() const { return rows.size(); }
    double probability(BasisIndex tuple) const {
        auto it = rows.find(tuple);
        return it == rows.end() ? 0.0 : it->second.prob;
    }
};

/// Validates row probabilities (positive, summing to 1 within 1e-9) and
/// returns the relation. InvalidRelation on violation.
WeightedRelation make_relation(Schema schema, std::map<BasisIndex, RowWeight> rows);

/// Uniform relation over the given tuples.
WeightedRelation uniform_relation(Schema schema, const std::vector<BasisIndex>& tuples);

/// Packs per-field values; thin wrapper over Schema::encode matching the
/// relation-level vocabulary.
BasisIndex encode_tuple(const Schema& schema, std::span<const std::uint64_t> values);
std::vector<std::uint64_t> decode_tuple(const Schema& schema, BasisIndex bits);

/// Loads the relation into a register of schema.total_bits() qubits:
/// amplitude sqrt(P(t)) * e^{i phase(t)} at basis index t, zero elsewhere.
StateVector prepare_state(const WeightedRelation& rel, int max_qubits = kDefaultMaxQubits);

/// Amplitude-level equal mixture of two relations over the same schema:
/// amp(t) = (sqrt(Pa(t)) e^{i pa} + sqrt(Pb(t)) e^{i pb}) / sqrt(2),
/// renormalized. ZeroNorm when the inputs cancel exactly.
WeightedRelation mix_combine(const WeightedRelation& rel_a, const WeightedRelation& rel_b);

struct MixResult {
    WeightedRelation relation;
    int depth = 0; // combiner layers
};

/// Balanced binary combiner tree over 2^N single-tuple relations. Distinct
/// equal-phase tuples come out uniform at 1/2^N each; duplicate leaves are
/// allowed and interfere.
MixResult mix_network(const std::vector<WeightedRelation>& singletons);

/// Stochastic tuple generator: loads the relation on c data qubits, copies
/// onto c ancilla qubits through CNOTs, and measures the ancilla register
/// once per shot. Returns tuples in draw order; reproducible per seed.
/// QubitBudgetExceeded when 2c exceeds the budget.
std::vector<BasisIndex> sample_oracle(const WeightedRelation& rel, long shots,
                                      std::uint64_t rng_seed,
                                      int max_qubits = kDefaultMaxQubits);

} // namespace qrel
