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

#include "qrel/relation.hpp"

#include <cmath>
#include <complex>
#include <set>
#include <utility>

#include "qrel/rng.hpp"

namespace qrel {

Schema::Schema(std::vector<Field> fields) : fields_(std::move(fields)) {
    if (fields_.empty())
        throw QrelError(ErrorCode::InvalidRelation, "schema has no fields");
    std::set<std::string> seen;
    for (const Field& f : fields_) {
        if (f.name.empty())
            throw QrelError(ErrorCode::InvalidRelation, "field name is empty");
        if (f.width < 1)
            throw QrelError(ErrorCode::InvalidRelation,
                            "field " + f.name + " needs a positive bit width");
        if (!seen.insert(f.name).second)
            throw QrelError(ErrorCode::InvalidRelation, "duplicate field name " + f.name);
        total_bits_ += f.width;
    }
    if (total_bits_ > kDefaultMaxQubits)
        throw QrelError(ErrorCode::QubitBudgetExceeded,
                        "schema needs " + std::to_string(total_bits_) +
                            " bits, above the register ceiling of " +
                            std::to_string(kDefaultMaxQubits));
    // First field sits in the most significant bits.
    offsets_.resize(fields_.size());
    int off = total_bits_;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        off -= fields_[i].width;
        offsets_[i] = off;
    }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
        if (fields_[i].name == name) return i;
    return std::nullopt;
}

std::size_t Schema::require(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw QrelError(ErrorCode::UnknownField,
                    "field " + std::string(name) + " not in schema " + to_string());
}

std::uint64_t Schema::field_value(BasisIndex bits, std::size_t i) const {
    const std::uint64_t mask = (std::uint64_t{1} << fields_[i].width) - 1;
    return (bits >> offsets_[i]) & mask;
}

BasisIndex Schema::encode(std::span<const std::uint64_t> values) const {
    if (values.size() != fields_.size())
        throw QrelError(ErrorCode::InvalidArgument,
                        "expected " + std::to_string(fields_.size()) + " field values, got " +
                            std::to_string(values.size()));
    BasisIndex bits = 0;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (values[i] >> fields_[i].width)
            throw QrelError(ErrorCode::FieldOverflow,
                            "value " + std::to_string(values[i]) + " does not fit field " +
                                fields_[i].name + ":" + std::to_string(fields_[i].width));
        bits |= values[i] << offsets_[i];
    }
    return bits;
}

std::vector<std::uint64_t> Schema::decode(BasisIndex bits) const {
    std::vector<std::uint64_t> values(fields_.size());
    for (std::size_t i = 0; i < fields_.size(); ++i) values[i] = field_value(bits, i);
    return values;
}

QubitIndexSet Schema::field_qubits(std::size_t i, int base) const {
    return QubitIndexSet::range(base + offsets_[i], fields_[i].width);
}

bool Schema::operator==(const Schema& other) const {
    if (fields_.size() != other.fields_.size()) return false;
    for (std::size_t i = 0; i < fields_.size(); ++i)
        if (fields_[i].name != other.fields_[i].name ||
            fields_[i].width != other.fields_[i].width)
            return false;
    return true;
}

std::string Schema::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (i) out += ',';
        out += fields_[i].name + ":" + std::to_string(fields_[i].width);
    }
    return out;
}

WeightedRelation make_relation(Schema schema, std::map<BasisIndex, RowWeight> rows) {
    if (rows.empty())
        throw QrelError(ErrorCode::InvalidRelation, "relation has no rows");
    const BasisIndex limit = dim_of(schema.total_bits());
    double total = 0.0;
    for (const auto& [bits, w] : rows) {
        if (bits >= limit)
            throw QrelError(ErrorCode::InvalidRelation,
                            "tuple " + std::to_string(bits) + " does not fit the schema");
        if (!(w.prob > 0.0))
            throw QrelError(ErrorCode::InvalidRelation,
                            "row " + std::to_string(bits) + " has non-positive probability");
        total += w.prob;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw QrelError(ErrorCode::InvalidRelation,
                        "row probabilities sum to " + std::to_string(total));
    return WeightedRelation{std::move(schema), std::move(rows)};
}

WeightedRelation uniform_relation(Schema schema, const std::vector<BasisIndex>& tuples) {
    if (tuples.empty())
        throw QrelError(ErrorCode::InvalidRelation, "relation has no rows");
    std::map<BasisIndex, RowWeight> rows;
    const double p = 1.0 / static_cast<double>(tuples.size());
    for (BasisIndex t : tuples) {
        if (!rows.emplace(t, RowWeight{p, 0.0}).second)
            throw QrelError(ErrorCode::InvalidRelation,
                            "duplicate tuple " + std::to_string(t));
    }
    return make_relation(std::move(schema), std::move(rows));
}

BasisIndex encode_tuple(const Schema& schema, std::span<const std::uint64_t> values) {
    return schema.encode(values);
}

std::vector<std::uint64_t> decode_tuple(const Schema& schema, BasisIndex bits) {
    return schema.decode(bits);
}

StateVector prepare_state(const WeightedRelation& rel, int max_qubits) {
    const int c = rel.schema.total_bits();
    if (c > max_qubits)
        throw QrelError(ErrorCode::QubitBudgetExceeded,
                        "relation needs " + std::to_string(c) + " qubits, budget is " +
                            std::to_string(max_qubits));
    std::vector<Amplitude> amps(dim_of(c), Amplitude{0.0, 0.0});
    for (const auto& [bits, w] : rel.rows)
        amps[bits] = std::polar(std::sqrt(w.prob), w.phase);
    return StateVector::from_amplitudes(c, std::move(amps), max_qubits);
}

WeightedRelation mix_combine(const WeightedRelation& rel_a, const WeightedRelation& rel_b) {
    if (!(rel_a.schema == rel_b.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "cannot mix relations over different schemas");
    // Amplitude-level combination so phases interfere.
    std::map<BasisIndex, std::complex<double>> amps;
    constexpr double inv_sqrt2 = 0.7071067811865476;
    for (const auto& [bits, w] : rel_a.rows)
        amps[bits] += std::polar(std::sqrt(w.prob) * inv_sqrt2, w.phase);
    for (const auto& [bits, w] : rel_b.rows)
        amps[bits] += std::polar(std::sqrt(w.prob) * inv_sqrt2, w.phase);

    double norm2 = 0.0;
    for (const auto& [bits, a] : amps) norm2 += std::norm(a);
    if (norm2 <= 1e-24)
        throw QrelError(ErrorCode::ZeroNorm, "mixed relations cancel exactly");

    std::map<BasisIndex, RowWeight> rows;
    for (const auto& [bits, a] : amps) {
        const double p = std::norm(a) / norm2;
        if (p == 0.0) continue;
        rows[bits] = RowWeight{p, std::arg(a)};
    }
    return WeightedRelation{rel_a.schema, std::move(rows)};
}

MixResult mix_network(const std::vector<WeightedRelation>& singletons) {
    if (singletons.empty())
        throw QrelError(ErrorCode::InvalidArgument, "combiner network needs inputs");
    if (singletons.size() & (singletons.size() - 1))
        throw QrelError(ErrorCode::InvalidArgument,
                        "combiner network needs a power-of-two input count");
    for (const WeightedRelation& r : singletons) {
        if (r.row_count() != 1)
            throw QrelError(ErrorCode::InvalidArgument,
                            "combiner network inputs must be single-tuple relations");
        if (!(r.schema == singletons.front().schema))
            throw QrelError(ErrorCode::SchemaMismatch,
                            "combiner network inputs must share one schema");
    }

    std::vector<WeightedRelation> layer = singletons;
    int depth = 0;
    while (layer.size() > 1) {
        std::vector<WeightedRelation> next;
        next.reserve(layer.size() / 2);
        for (std::size_t i = 0; i < layer.size(); i += 2)
            next.push_back(mix_combine(layer[i], layer[i + 1]));
        layer = std::move(next);
        ++depth;
    }
    return MixResult{layer.front(), depth};
}

std::vector<BasisIndex> sample_oracle(const WeightedRelation& rel, long shots,
                                      std::uint64_t rng_seed, int max_qubits) {
    if (shots < 1)
        throw QrelError(ErrorCode::InvalidArgument, "shots must be at least 1");
    const int c = rel.schema.total_bits();
    if (2 * c > max_qubits)
        throw QrelError(ErrorCode::QubitBudgetExceeded,
                        "copy oracle needs " + std::to_string(2 * c) +
                            " qubits, budget is " + std::to_string(max_qubits));

    // Data register on qubits [0, c), ancilla copy on [c, 2c).
    std::vector<Amplitude> amps(dim_of(2 * c), Amplitude{0.0, 0.0});
    for (const auto& [bits, w] : rel.rows)
        amps[bits] = std::polar(std::sqrt(w.prob), w.phase);
    StateVector state = StateVector::from_amplitudes(2 * c, std::move(amps), max_qubits);
    state.apply_cnot_copy(QubitIndexSet::range(0, c), QubitIndexSet::range(c, c));

    const std::vector<double> sums = prefix_sums(state.probabilities());
    SeededRng rng(rng_seed);
    std::vector<BasisIndex> samples;
    samples.reserve(static_cast<std::size_t>(shots));
    for (long s = 0; s < shots; ++s) {
        const auto joint = static_cast<BasisIndex>(sample_from_prefix(sums, rng.next_unit()));
        samples.push_back(joint >> c); // the measured ancilla register
    }
    return samples;
}

} // namespace qrel
