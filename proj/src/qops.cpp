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

#include "qrel/qops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qrel {
namespace {

// Mass below this is treated as an empty subspace rather than amplified.
constexpr double kEmptyMassFloor = 1e-18;
// Output rows below this are numerical dust from cancellation, not tuples.
constexpr double kProbFloor = 1e-15;
// Slack for validating user-supplied similarity scores.
constexpr double kScoreTolerance = 1e-9;

} // namespace

std::pair<double, double> SimilarityOp::weight_phase(BasisIndex i, BasisIndex j) const {
    if (!eval)
        throw QrelError(ErrorCode::InvalidSimilarity, "similarity operator has no evaluator");
    const std::complex<double> z = eval(i, j);
    if (level == 1) {
        if (std::abs(z.imag()) > kScoreTolerance)
            throw QrelError(ErrorCode::InvalidSimilarity,
                            "level-1 similarity score must be real");
        const double w = z.real();
        if (w < -kScoreTolerance || w > 1.0 + kScoreTolerance)
            throw QrelError(ErrorCode::InvalidSimilarity,
                            "level-1 similarity score outside [0, 1]: " + std::to_string(w));
        return {std::clamp(w, 0.0, 1.0), 0.0};
    }
    if (level == 2) {
        double w = std::norm(z);
        if (w > 1.0 + kScoreTolerance)
            throw QrelError(ErrorCode::InvalidSimilarity,
                            "level-2 similarity magnitude above 1: " + std::to_string(std::abs(z)));
        w = std::min(w, 1.0);
        return {w, w == 0.0 ? 0.0 : std::arg(z)};
    }
    throw QrelError(ErrorCode::InvalidSimilarity,
                    "similarity level must be 1 or 2, got " + std::to_string(level));
}

SimilarityOp const_similarity(double z, int level) {
    SimilarityOp op;
    op.level = level;
    op.eval = [z](BasisIndex, BasisIndex) { return std::complex<double>{z, 0.0}; };
    op.weight_phase(0, 0); // the score is known now, reject bad values early
    return op;
}

SimilarityOp equality_similarity(const Schema& schema_r, const Schema& schema_s,
                                 const std::string& field_r, const std::string& field_s,
                                 int level) {
    const std::size_t ir = schema_r.require(field_r);
    const std::size_t is = schema_s.require(field_s);
    SimilarityOp op;
    op.level = level;
    op.schema_r = schema_r;
    op.schema_s = schema_s;
    op.eval = [schema_r, schema_s, ir, is](BasisIndex i, BasisIndex j) {
        const bool equal = schema_r.field_value(i, ir) == schema_s.field_value(j, is);
        return std::complex<double>{equal ? 1.0 : 0.0, 0.0};
    };
    return op;
}

SimilarityOp within_similarity(const Schema& schema_r, const Schema& schema_s,
                               const std::string& field_r, const std::string& field_s,
                               double k, int level) {
    if (!(k > 0.0))
        throw QrelError(ErrorCode::InvalidSimilarity, "within radius must be positive");
    const std::size_t ir = schema_r.require(field_r);
    const std::size_t is = schema_s.require(field_s);
    SimilarityOp op;
    op.level = level;
    op.schema_r = schema_r;
    op.schema_s = schema_s;
    op.eval = [schema_r, schema_s, ir, is, k](BasisIndex i, BasisIndex j) {
        const double a = static_cast<double>(schema_r.field_value(i, ir));
        const double b = static_cast<double>(schema_s.field_value(j, is));
        return std::complex<double>{std::max(0.0, 1.0 - std::abs(a - b) / k), 0.0};
    };
    return op;
}

BasisIndex CombineOp::eval(BasisIndex left, BasisIndex right) const {
    std::vector<std::uint64_t> values;
    values.reserve(sources.size());
    for (const CombineSource& src : sources) {
        const bool from_left = src.side == CombineSource::Side::kLeft;
        const Schema& schema = from_left ? schema_r : schema_s;
        values.push_back(schema.field_value(from_left ? left : right, src.field_index));
    }
    return out_schema.encode(values);
}

namespace {

CombineOp build_concat(const Schema& schema_r, const Schema& schema_s,
                       const std::string* dropped_s_field) {
    if (dropped_s_field != nullptr)
        schema_s.require(*dropped_s_field);
    std::vector<Field> fields;
    std::vector<CombineSource> sources;
    for (std::size_t i = 0; i < schema_r.field_count(); ++i) {
        fields.push_back(schema_r.field(i));
        sources.push_back({CombineSource::Side::kLeft, i});
    }
    for (std::size_t j = 0; j < schema_s.field_count(); ++j) {
        const Field& f = schema_s.field(j);
        if (dropped_s_field != nullptr && f.name == *dropped_s_field) continue;
        if (schema_r.find(f.name))
            throw QrelError(ErrorCode::InvalidCombine,
                            "field '" + f.name + "' appears on both sides; drop or rename it");
        fields.push_back(f);
        sources.push_back({CombineSource::Side::kRight, j});
    }
    CombineOp op;
    op.schema_r = schema_r;
    op.schema_s = schema_s;
    op.out_schema = Schema(std::move(fields));
    op.sources = std::move(sources);
    return op;
}

} // namespace

CombineOp CombineOp::concat(const Schema& schema_r, const Schema& schema_s) {
    return build_concat(schema_r, schema_s, nullptr);
}

CombineOp CombineOp::concat_drop(const Schema& schema_r, const Schema& schema_s,
                                 const std::string& dropped_s_field) {
    return build_concat(schema_r, schema_s, &dropped_s_field);
}

CombineOp CombineOp::from_fields(const Schema& schema_r, const Schema& schema_s,
                                 const std::vector<std::string>& names) {
    if (names.empty())
        throw QrelError(ErrorCode::InvalidCombine, "combiner keeps no fields");
    std::vector<Field> fields;
    std::vector<CombineSource> sources;
    std::set<std::string> seen;
    for (const std::string& name : names) {
        if (!seen.insert(name).second)
            throw QrelError(ErrorCode::InvalidCombine,
                            "field '" + name + "' listed twice in combiner output");
        if (auto i = schema_r.find(name)) {
            fields.push_back(schema_r.field(*i));
            sources.push_back({CombineSource::Side::kLeft, *i});
        } else if (auto j = schema_s.find(name)) {
            fields.push_back(schema_s.field(*j));
            sources.push_back({CombineSource::Side::kRight, *j});
        } else {
            throw QrelError(ErrorCode::UnknownField,
                            "field '" + name + "' exists on neither join side");
        }
    }
    CombineOp op;
    op.schema_r = schema_r;
    op.schema_s = schema_s;
    op.out_schema = Schema(std::move(fields));
    op.sources = std::move(sources);
    return op;
}

int optimal_iterations(double f) {
    if (!(f > 0.0) || f > 1.0)
        throw QrelError(ErrorCode::InvalidFraction,
                        "marked fraction must lie in (0, 1], got " + std::to_string(f));
    return static_cast<int>(std::floor(std::numbers::pi / 4.0 * std::sqrt(1.0 / f)));
}

double marked_probability(const StateVector& state, const BasisPredicate& marked) {
    return kernels::marked_mass(state.amplitudes(), marked);
}

std::pair<StateVector, SelectionReport>
grover_select(const StateVector& state, const BasisPredicate& marked,
              std::optional<int> iterations) {
    if (!marked)
        throw QrelError(ErrorCode::InvalidArgument, "selection predicate is empty");
    if (iterations && *iterations < 0)
        throw QrelError(ErrorCode::InvalidArgument, "iteration count is negative");

    std::vector<BasisIndex> marked_list;
    for (BasisIndex b = 0; b < state.dim(); ++b)
        if (marked(b)) marked_list.push_back(b);

    double f = 0.0;
    for (BasisIndex b : marked_list) f += std::norm(state.amplitude(b));
    if (f < kEmptyMassFloor)
        throw QrelError(ErrorCode::EmptySelection,
                        "selection predicate marks no probability mass");

    const int k = iterations ? *iterations : optimal_iterations(std::min(f, 1.0));

    // The state stays inside span{|m>, |u>} where |m> is the normalized
    // marked component of the input; its coefficient stays real in that
    // frame, so <m|psi> is the signed amplitude the traces record.
    const double inv_sqrt_f = 1.0 / std::sqrt(f);
    std::vector<Amplitude> m_conj;
    m_conj.reserve(marked_list.size());
    for (BasisIndex b : marked_list) m_conj.push_back(std::conj(state.amplitude(b)) * inv_sqrt_f);
    auto signed_amplitude = [&](const StateVector& psi) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < marked_list.size(); ++t)
            acc += m_conj[t] * psi.amplitude(marked_list[t]);
        return acc.real();
    };

    StateVector out = state;
    SelectionReport report;
    report.iterations = k;
    report.marked_fraction = f;
    report.amplitude_trace.push_back({0, signed_amplitude(out)});
    report.step_trace.push_back(report.amplitude_trace.back().second);
    for (int it = 1; it <= k; ++it) {
        out.apply_phase_flip(marked);
        report.step_trace.push_back(signed_amplitude(out));
        out.apply_reflect_about(state);
        report.step_trace.push_back(signed_amplitude(out));
        report.amplitude_trace.push_back({it, report.step_trace.back()});
    }
    report.grover_steps = 2L * k;

    double final_mass = 0.0;
    for (BasisIndex b : marked_list) final_mass += std::norm(out.amplitude(b));
    report.final_success_probability = final_mass;
    return {std::move(out), std::move(report)};
}

std::pair<StateVector, SelectionReport>
grover_select_tuples(const StateVector& state, const Schema& schema,
                     const std::function<bool(BasisIndex)>& tuple_predicate,
                     std::optional<int> iterations) {
    if (state.num_qubits() != schema.total_bits())
        throw QrelError(ErrorCode::SchemaMismatch,
                        "state holds " + std::to_string(state.num_qubits()) +
                            " qubits but the schema needs " +
                            std::to_string(schema.total_bits()));
    return grover_select(state, tuple_predicate, iterations);
}

WeightedRelation project(const StateVector& state, const Schema& schema,
                         const std::vector<std::string>& keep_fields) {
    if (state.num_qubits() != schema.total_bits())
        throw QrelError(ErrorCode::SchemaMismatch,
                        "state holds " + std::to_string(state.num_qubits()) +
                            " qubits but the schema needs " +
                            std::to_string(schema.total_bits()));
    if (keep_fields.empty())
        throw QrelError(ErrorCode::InvalidArgument, "projection keeps no fields");

    std::vector<std::size_t> keep_idx;
    keep_idx.reserve(keep_fields.size());
    for (const std::string& name : keep_fields) keep_idx.push_back(schema.require(name));
    if (std::set<std::size_t>(keep_idx.begin(), keep_idx.end()).size() != keep_idx.size())
        throw QrelError(ErrorCode::InvalidArgument, "projection lists a field twice");

    std::vector<Field> out_fields;
    out_fields.reserve(keep_idx.size());
    for (std::size_t idx : keep_idx) out_fields.push_back(schema.field(idx));
    Schema out_schema(std::move(out_fields));

    std::vector<int> kept_qubits;
    for (std::size_t idx : keep_idx)
        for (int w = 0; w < schema.field(idx).width; ++w)
            kept_qubits.push_back(schema.offset(idx) + w);
    std::sort(kept_qubits.begin(), kept_qubits.end());
    const QubitIndexSet keep_set{kept_qubits};
    const std::vector<double> buckets = state.marginal_distribution(keep_set);

    auto pos_of = [&](int q) {
        return static_cast<int>(std::lower_bound(kept_qubits.begin(), kept_qubits.end(), q) -
                                kept_qubits.begin());
    };

    std::map<BasisIndex, RowWeight> rows;
    double total = 0.0;
    std::vector<std::uint64_t> values(keep_idx.size());
    for (BasisIndex b = 0; b < buckets.size(); ++b) {
        const double p = buckets[b];
        if (p < kProbFloor) continue;
        for (std::size_t oi = 0; oi < keep_idx.size(); ++oi) {
            const std::size_t idx = keep_idx[oi];
            std::uint64_t v = 0;
            for (int w = 0; w < schema.field(idx).width; ++w)
                v |= static_cast<std::uint64_t>(bit_of(b, pos_of(schema.offset(idx) + w))) << w;
            values[oi] = v;
        }
        rows[out_schema.encode(values)].prob += p;
        total += p;
    }
    for (auto& [bits, weight] : rows) weight.prob /= total;

    WeightedRelation out;
    out.schema = std::move(out_schema);
    out.rows = std::move(rows);
    return out;
}

double conditional_similarity(const WeightedRelation& rel_a, const WeightedRelation& rel_b,
                              const SimilarityOp& sim) {
    if (sim.schema_r && !(*sim.schema_r == rel_a.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "similarity was built for a different left schema");
    if (sim.schema_s && !(*sim.schema_s == rel_b.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "similarity was built for a different right schema");
    double acc = 0.0;
    for (const auto& [i, wi] : rel_a.rows)
        for (const auto& [j, wj] : rel_b.rows)
            acc += sim.weight_phase(i, j).first * wi.prob * wj.prob;
    return acc;
}

std::pair<WeightedRelation, JoinReport>
join_quantum(const WeightedRelation& rel_r, const WeightedRelation& rel_s,
             const CombineOp& combine, const SimilarityOp& sim,
             const QopsOptions& options) {
    if (!(combine.schema_r == rel_r.schema) || !(combine.schema_s == rel_s.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "combiner was built for different input schemas");
    if (sim.schema_r && !(*sim.schema_r == rel_r.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "similarity was built for a different left schema");
    if (sim.schema_s && !(*sim.schema_s == rel_s.schema))
        throw QrelError(ErrorCode::SchemaMismatch,
                        "similarity was built for a different right schema");

    const int c_r = rel_r.schema.total_bits();
    const int c_s = rel_s.schema.total_bits();
    const int total = c_r + c_s + 1;
    if (total > options.max_qubits)
        throw QrelError(ErrorCode::QubitBudgetExceeded,
                        "join needs " + std::to_string(total) + " qubits but the budget is " +
                            std::to_string(options.max_qubits));
    const int anc = c_r + c_s;
    const BasisIndex r_mask = (BasisIndex{1} << c_r) - 1;
    const BasisIndex s_mask = (BasisIndex{1} << c_s) - 1;

    std::vector<Amplitude> amps(dim_of(total), Amplitude{0.0, 0.0});
    for (const auto& [i, wr] : rel_r.rows)
        for (const auto& [j, ws] : rel_s.rows)
            amps[i | (j << c_r)] =
                std::polar(std::sqrt(wr.prob * ws.prob), wr.phase + ws.phase);
    StateVector psi = StateVector::from_amplitudes(total, std::move(amps), options.max_qubits);

    psi.apply_ancilla_rotation(anc, [&](BasisIndex b) {
        return sim.weight_phase(b & r_mask, (b >> c_r) & s_mask);
    });

    const BasisPredicate anc_set = [anc](BasisIndex b) { return bit_of(b, anc) == 1; };
    const double f = marked_probability(psi, anc_set);
    if (f < kEmptyMassFloor)
        throw QrelError(ErrorCode::EmptyJoin, "no pair of tuples is similar");

    auto [amplified, sel] = grover_select(psi, anc_set, options.iterations);

    JoinReport report;
    report.conditional_similarity = f;
    report.success_probability = sel.final_success_probability;
    report.iterations = sel.iterations;
    report.quantum_steps = sel.grover_steps;
    report.classical_steps_reference =
        static_cast<long>(rel_r.row_count()) * static_cast<long>(rel_s.row_count());

    // The combiner may merge distinct (i, j) pre-images into one output
    // tuple; masses add because the discarded fields distinguish the
    // branches physically even after relabeling.
    std::map<BasisIndex, RowWeight> out_rows;
    const std::size_t half = dim_of(total) / 2;
    if (options.postselect) {
        if (report.success_probability < kEmptyMassFloor)
            throw QrelError(ErrorCode::ZeroNorm,
                            "amplification left no mass on the similar subspace; "
                            "adjust the iteration count");
        for (BasisIndex b = half; b < dim_of(total); ++b) {
            const double p = std::norm(amplified.amplitude(b));
            if (p < kProbFloor * report.success_probability) continue;
            out_rows[combine.eval(b & r_mask, (b >> c_r) & s_mask)].prob +=
                p / report.success_probability;
        }
    } else {
        for (BasisIndex b = 0; b < dim_of(total); ++b) {
            const double p = std::norm(amplified.amplitude(b));
            if (p < kProbFloor) continue;
            out_rows[combine.eval(b & r_mask, (b >> c_r) & s_mask)].prob += p;
        }
    }

    WeightedRelation out;
    out.schema = combine.out_schema;
    out.rows = std::move(out_rows);
    return {std::move(out), std::move(report)};
}

} // namespace qrel
