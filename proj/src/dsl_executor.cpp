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

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qrel/qdsl.hpp"
#include "qrel/relation_io.hpp"
#include "qrel/rng.hpp"

namespace qrel {
namespace {

constexpr double kProbFloor = 1e-15;

template <typename F>
auto tagged(const std::string& node, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const NodeError&) {
        throw;
    } catch (const QrelError& e) {
        throw NodeError(e, node);
    }
}

std::string fmt_fixed12(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

BasisPredicate compile_predicate(const PredPtr& pred, const Schema& schema) {
    switch (pred->kind) {
        case PredNode::Kind::kCompare: {
            const std::size_t idx = schema.require(pred->field);
            const int off = schema.offset(idx);
            const int width = schema.field(idx).width;
            const std::uint64_t mask =
                width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
            const std::uint64_t value = pred->value;
            const char op = pred->op;
            return [off, mask, value, op](BasisIndex b) {
                const std::uint64_t v = (b >> off) & mask;
                if (op == '=') return v == value;
                if (op == '<') return v < value;
                return v > value;
            };
        }
        case PredNode::Kind::kNot: {
            auto child = compile_predicate(pred->children[0], schema);
            return [child](BasisIndex b) { return !child(b); };
        }
        case PredNode::Kind::kAnd: {
            auto left = compile_predicate(pred->children[0], schema);
            auto right = compile_predicate(pred->children[1], schema);
            return [left, right](BasisIndex b) { return left(b) && right(b); };
        }
        case PredNode::Kind::kOr: {
            auto left = compile_predicate(pred->children[0], schema);
            auto right = compile_predicate(pred->children[1], schema);
            return [left, right](BasisIndex b) { return left(b) || right(b); };
        }
    }
    throw QrelError(ErrorCode::InvalidArgument, "unknown predicate kind");
}

/// Reads a distribution (with phases) back out of an amplified state,
/// conditioning on the marked subspace when postselecting.
WeightedRelation state_to_relation(const StateVector& state, const Schema& schema,
                                   const BasisPredicate& marked, bool postselect) {
    std::map<BasisIndex, RowWeight> rows;
    double total = 0.0;
    for (BasisIndex b = 0; b < state.dim(); ++b) {
        if (postselect && !marked(b)) continue;
        const Amplitude a = state.amplitude(b);
        const double p = std::norm(a);
        if (p < kProbFloor) continue;
        rows[b] = RowWeight{p, std::arg(a)};
        total += p;
    }
    for (auto& [bits, weight] : rows) weight.prob /= total;
    WeightedRelation out;
    out.schema = schema;
    out.rows = std::move(rows);
    return out;
}

struct ReportLine {
    std::string key;
    std::string value;
};

struct SampleBlock {
    std::string id;
    Schema schema;
    std::vector<BasisIndex> draws;
};

struct EngineResult {
    WeightedRelation relation;
    std::vector<SampleBlock> samples;
    std::vector<ReportLine> report;
    StepCounter counter;
};

std::uint64_t node_seed(const ExecOptions& options, int idx) {
    return splitmix64(options.seed ^ static_cast<std::uint64_t>(idx));
}

class Engine {
  public:
    Engine(const QueryPlan& plan, const ExecOptions& options, bool quantum, bool record_samples)
        : plan_(plan), options_(options), quantum_(quantum), record_samples_(record_samples) {}

    EngineResult run() {
        out_.relation = eval(0);
        return std::move(out_);
    }

  private:
    WeightedRelation eval(int idx) {
        const PlanNode& node = plan_.nodes[idx];
        return tagged(node.id, [&] { return eval_node(idx, node); });
    }

    void report(const std::string& key, std::string value) {
        out_.report.push_back({key, std::move(value)});
    }

    WeightedRelation eval_node(int idx, const PlanNode& node) {
        switch (node.kind) {
            case NodeKind::kLoad: return node.relation;
            case NodeKind::kSelect: {
                WeightedRelation rel = eval(node.children[0]);
                const BasisPredicate pred = compile_predicate(node.predicate, node.schema);
                if (!quantum_) return classical_select(rel, pred, &out_.counter);
                StateVector psi = prepare_state(rel, options_.max_qubits);
                auto [state, sel] =
                    grover_select_tuples(psi, node.schema, pred, options_.iterations);
                report(node.id + ".marked_fraction", fmt_fixed12(sel.marked_fraction));
                report(node.id + ".iterations", std::to_string(sel.iterations));
                report(node.id + ".success_probability",
                       fmt_fixed12(sel.final_success_probability));
                report(node.id + ".grover_steps", std::to_string(sel.grover_steps));
                return state_to_relation(state, node.schema, pred, options_.postselect);
            }
            case NodeKind::kProject: {
                WeightedRelation rel = eval(node.children[0]);
                if (!quantum_) return classical_project(rel, node.fields);
                StateVector psi = prepare_state(rel, options_.max_qubits);
                return project(psi, plan_.nodes[node.children[0]].schema, node.fields);
            }
            case NodeKind::kJoin: {
                WeightedRelation left = eval(node.children[0]);
                WeightedRelation right = eval(node.children[1]);
                if (!quantum_) {
                    auto [rel, csim] =
                        classical_join(left, right, node.combine, node.sim, &out_.counter);
                    report(node.id + ".conditional_similarity", fmt_fixed12(csim));
                    return rel;
                }
                QopsOptions qo;
                qo.iterations = options_.iterations;
                qo.postselect = options_.postselect;
                qo.max_qubits = options_.max_qubits;
                auto [rel, rep] = join_quantum(left, right, node.combine, node.sim, qo);
                report(node.id + ".conditional_similarity",
                       fmt_fixed12(rep.conditional_similarity));
                report(node.id + ".iterations", std::to_string(rep.iterations));
                report(node.id + ".success_probability", fmt_fixed12(rep.success_probability));
                report(node.id + ".quantum_steps", std::to_string(rep.quantum_steps));
                report(node.id + ".classical_steps_reference",
                       std::to_string(rep.classical_steps_reference));
                return rel;
            }
            case NodeKind::kSample: {
                WeightedRelation rel = eval(node.children[0]);
                if (record_samples_) {
                    std::vector<BasisIndex> draws =
                        quantum_ ? sample_oracle(rel, node.shots, node_seed(options_, idx),
                                                 options_.max_qubits)
                                 : sample_classical(rel, node.shots, node_seed(options_, idx));
                    out_.samples.push_back({node.id, node.schema, std::move(draws)});
                    report(node.id + ".shots", std::to_string(node.shots));
                }
                return rel;
            }
        }
        throw QrelError(ErrorCode::InvalidArgument, "unknown plan node kind");
    }

    /// Prefix-sum draws over the stored rows; mirrors the sampling oracle's
    /// measurement loop so equal seeds draw equal tuples.
    static std::vector<BasisIndex> sample_classical(const WeightedRelation& rel, long shots,
                                                    std::uint64_t seed) {
        std::vector<BasisIndex> keys;
        std::vector<double> probs;
        keys.reserve(rel.rows.size());
        probs.reserve(rel.rows.size());
        for (const auto& [bits, weight] : rel.rows) {
            keys.push_back(bits);
            probs.push_back(weight.prob);
        }
        const std::vector<double> sums = prefix_sums(probs);
        SeededRng rng(seed);
        std::vector<BasisIndex> draws;
        draws.reserve(static_cast<std::size_t>(shots));
        for (long s = 0; s < shots; ++s)
            draws.push_back(keys[sample_from_prefix(sums, rng.next_unit())]);
        return draws;
    }

    const QueryPlan& plan_;
    const ExecOptions& options_;
    const bool quantum_;
    const bool record_samples_;
    EngineResult out_;
};

std::string document_header(const ExecOptions& options, const char* status) {
    std::string doc = "qrel-result v1\n";
    doc += "mode: " + mode_name(options.mode) + "\n";
    doc += "seed: " + std::to_string(options.seed) + "\n";
    doc += "status: " + std::string(status) + "\n";
    return doc;
}

ExecResult error_result(const ExecOptions& options, ErrorCode code, const std::string& node,
                        const std::string& detail) {
    std::string doc = document_header(options, "error");
    doc += "error: " + std::string(error_code_name(code));
    if (!node.empty()) doc += " at " + node;
    doc += ": " + detail + "\n";
    ExecResult result;
    result.document = std::move(doc);
    result.exit_code = code == ErrorCode::QubitBudgetExceeded ? 3 : 2;
    result.ok = false;
    return result;
}

} // namespace

ExecResult execute_plan(const QueryPlan& plan, const ExecOptions& options) {
    const bool ran_quantum = options.mode != ExecOptions::Mode::kClassical;
    const bool ran_classical = options.mode != ExecOptions::Mode::kQuantum;

    EngineResult quantum;
    EngineResult classical;
    if (ran_quantum) quantum = Engine(plan, options, true, true).run();
    if (ran_classical) classical = Engine(plan, options, false, !ran_quantum).run();

    const EngineResult& primary = ran_quantum ? quantum : classical;

    std::string doc = document_header(options, "ok");
    doc += "schema: " + primary.relation.schema.to_string() + "\n";
    doc += "distribution:\n";
    for (const auto& [bits, weight] : primary.relation.rows)
        doc += "  " + format_tuple(primary.relation.schema, bits) + " " +
               fmt_fixed12(weight.prob) + "\n";
    if (!primary.samples.empty()) {
        doc += "samples:\n";
        for (const SampleBlock& block : primary.samples)
            for (BasisIndex bits : block.draws)
                doc += "  " + format_tuple(block.schema, bits) + "\n";
    }
    doc += "report:\n";
    doc += "  plan.peak_qubits: " + std::to_string(plan.peak_qubits) + "\n";
    for (const ReportLine& line : quantum.report) doc += "  " + line.key + ": " + line.value + "\n";
    for (const ReportLine& line : classical.report)
        doc += "  " + line.key + ": " + line.value + "\n";
    if (ran_classical) {
        doc += "  classical.comparisons: " + std::to_string(classical.counter.comparisons) + "\n";
        doc += "  classical.index_lookups: " + std::to_string(classical.counter.index_lookups) +
               "\n";
    }
    if (ran_quantum && ran_classical) {
        const DistributionDelta delta =
            compare_distributions(quantum.relation, classical.relation);
        doc += "  compare.tv_distance: " + fmt_fixed12(delta.tv_distance) + "\n";
        doc += "  compare.max_abs_diff: " + fmt_fixed12(delta.max_abs_diff) + "\n";
    }

    ExecResult result;
    result.document = std::move(doc);
    result.exit_code = 0;
    result.ok = true;
    return result;
}

ExecResult run_query(const std::string& source, const ExecOptions& options) {
    try {
        const QueryAst ast = parse_query(source);
        const QueryPlan plan = plan_query(*ast, options);
        return execute_plan(plan, options);
    } catch (const NodeError& e) {
        return error_result(options, e.code(), e.node(), e.detail());
    } catch (const QrelError& e) {
        return error_result(options, e.code(), "", e.detail());
    }
}

} // namespace qrel
