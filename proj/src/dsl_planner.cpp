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

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrel/qdsl.hpp"
#include "qrel/relation_io.hpp"

namespace qrel {
namespace {

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

void validate_predicate(const PredPtr& pred, const Schema& schema) {
    if (pred->kind == PredNode::Kind::kCompare) {
        schema.require(pred->field);
        return;
    }
    for (const PredPtr& child : pred->children) validate_predicate(child, schema);
}

void check_budget(const std::string& node, const char* what, int needed, int budget) {
    if (needed > budget)
        throw NodeError(QrelError(ErrorCode::QubitBudgetExceeded,
                                  std::string(what) + " needs " + std::to_string(needed) +
                                      " qubits but the budget is " + std::to_string(budget)),
                        node);
}

SimilarityOp build_similarity(const SimSpec& spec, const Schema& schema_r,
                              const Schema& schema_s, int level) {
    switch (spec.kind) {
        case SimSpec::Kind::kEq:
            return equality_similarity(schema_r, schema_s, spec.field_r, spec.field_s, level);
        case SimSpec::Kind::kWithin:
            return within_similarity(schema_r, schema_s, spec.field_r, spec.field_s, spec.param,
                                     level);
        case SimSpec::Kind::kConst: {
            SimilarityOp sim = const_similarity(spec.param, level);
            sim.schema_r = schema_r;
            sim.schema_s = schema_s;
            sim.weight_phase(0, 0); // score validation, fail at plan time
            return sim;
        }
    }
    throw QrelError(ErrorCode::InvalidSimilarity, "unknown similarity kind");
}

CombineOp build_combine(const CombSpec& spec, const Schema& schema_r, const Schema& schema_s) {
    switch (spec.kind) {
        case CombSpec::Kind::kConcat: return CombineOp::concat(schema_r, schema_s);
        case CombSpec::Kind::kConcatDrop:
            return CombineOp::concat_drop(schema_r, schema_s, spec.dropped);
        case CombSpec::Kind::kFields:
            return CombineOp::from_fields(schema_r, schema_s, spec.fields);
    }
    throw QrelError(ErrorCode::InvalidCombine, "unknown combine kind");
}

class Planner {
  public:
    explicit Planner(const ExecOptions& options) : options_(options) {}

    QueryPlan take(const AstNode& root) {
        visit(root);
        for (const PlanNode& node : plan_.nodes)
            plan_.peak_qubits = std::max(plan_.peak_qubits, node.peak_qubits);
        return std::move(plan_);
    }

  private:
    int visit(const AstNode& ast) {
        const int idx = static_cast<int>(plan_.nodes.size());
        plan_.nodes.emplace_back();
        plan_.nodes[idx].kind = ast.kind;
        plan_.nodes[idx].id = node_kind_name(ast.kind) + "#" + std::to_string(idx);
        const std::string id = plan_.nodes[idx].id;

        std::vector<int> children;
        for (const auto& child : ast.children) children.push_back(visit(*child));
        plan_.nodes[idx].children = children;

        PlanNode& node = plan_.nodes[idx];
        switch (ast.kind) {
            case NodeKind::kLoad:
                tagged(id, [&] {
                    node.relation = read_relation_file(ast.path);
                    node.schema = node.relation.schema;
                    node.peak_qubits = node.schema.total_bits();
                });
                check_budget(id, "the relation", node.peak_qubits, options_.max_qubits);
                break;
            case NodeKind::kSelect:
                node.schema = plan_.nodes[children[0]].schema;
                node.predicate = ast.predicate;
                tagged(id, [&] { validate_predicate(node.predicate, node.schema); });
                node.peak_qubits = node.schema.total_bits();
                break;
            case NodeKind::kProject: {
                const Schema& in = plan_.nodes[children[0]].schema;
                tagged(id, [&] {
                    std::set<std::string> seen;
                    std::vector<Field> fields;
                    for (const std::string& name : ast.fields) {
                        if (!seen.insert(name).second)
                            throw QrelError(ErrorCode::InvalidArgument,
                                            "projection lists field '" + name + "' twice");
                        fields.push_back(in.field(in.require(name)));
                    }
                    node.schema = Schema(std::move(fields));
                });
                node.fields = ast.fields;
                node.peak_qubits = in.total_bits();
                break;
            }
            case NodeKind::kJoin: {
                const Schema& left = plan_.nodes[children[0]].schema;
                const Schema& right = plan_.nodes[children[1]].schema;
                tagged(id, [&] {
                    node.sim = build_similarity(ast.sim, left, right, options_.similarity_level);
                    node.combine = build_combine(ast.comb, left, right);
                    node.schema = node.combine.out_schema;
                });
                node.peak_qubits = left.total_bits() + right.total_bits() + 1;
                check_budget(id, "the join register", node.peak_qubits, options_.max_qubits);
                break;
            }
            case NodeKind::kSample:
                node.schema = plan_.nodes[children[0]].schema;
                node.shots = ast.shots;
                node.peak_qubits = 2 * node.schema.total_bits();
                check_budget(id, "the sampling register", node.peak_qubits, options_.max_qubits);
                break;
        }
        return idx;
    }

    const ExecOptions& options_;
    QueryPlan plan_;
};

} // namespace

std::string mode_name(ExecOptions::Mode mode) {
    switch (mode) {
        case ExecOptions::Mode::kQuantum: return "quantum";
        case ExecOptions::Mode::kClassical: return "classical";
        case ExecOptions::Mode::kBoth: return "both";
    }
    return "both";
}

QueryPlan plan_query(const AstNode& ast, const ExecOptions& options) {
    if (options.max_qubits < 1 || options.max_qubits > kDefaultMaxQubits)
        throw QrelError(ErrorCode::InvalidArgument,
                        "max qubits must lie in [1, " + std::to_string(kDefaultMaxQubits) + "]");
    if (options.similarity_level != 1 && options.similarity_level != 2)
        throw QrelError(ErrorCode::InvalidSimilarity, "similarity level must be 1 or 2");
    if (options.iterations && *options.iterations < 0)
        throw QrelError(ErrorCode::InvalidArgument, "iteration count is negative");
    return Planner(options).take(ast);
}

} // namespace qrel
