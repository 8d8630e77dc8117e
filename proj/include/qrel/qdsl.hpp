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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qrel/coracle.hpp"
#include "qrel/qops.hpp"
#include "qrel/relation.hpp"

namespace qrel {

// The query language. One query is one expression:
//
//   expr := LOAD "path"
//         | SELECT expr WHERE pred
//         | PROJECT expr ON field (, field)*
//         | JOIN expr , expr ON sim COMBINE comb
//         | SAMPLE expr SHOTS int
//         | ( expr )
//
//   pred := or-expr;  or := and (OR and)*;  and := not (AND not)*;
//   not  := NOT not | ( pred ) | field (= | < | >) int
//   sim  := eq(field, field) | within(field, field, k) | const(x)
//   comb := concat | concat_drop(field) | fields(field (, field)*)
//
// Keywords are case-insensitive; field names are case-sensitive. '#'
// starts a comment running to the end of the line. Child expressions of
// composite nodes may need parentheses where a field list would otherwise
// swallow the enclosing clause; the pretty-printer always emits them.

/// A QrelError whose origin is a specific plan node ("join#0").
class NodeError : public QrelError {
  public:
    NodeError(const QrelError& base, std::string node)
        : QrelError(base), node_(std::move(node)) {}

    const std::string& node() const { return node_; }

  private:
    std::string node_;
};

enum class NodeKind { kLoad, kSelect, kProject, kJoin, kSample };

/// Short lowercase tag used in node ids and error messages.
std::string node_kind_name(NodeKind kind);

struct PredNode;
using PredPtr = std::shared_ptr<const PredNode>;

/// Selection predicate expression. Comparisons test one field against an
/// unsigned literal; and/or/not combine them.
struct PredNode {
    enum class Kind { kAnd, kOr, kNot, kCompare };
    Kind kind = Kind::kCompare;
    std::vector<PredPtr> children; // two for and/or, one for not

    std::string field;  // compare only
    char op = '=';      // '=', '<', '>'
    std::uint64_t value = 0;
};

struct SimSpec {
    enum class Kind { kEq, kWithin, kConst };
    Kind kind = Kind::kEq;
    std::string field_r;
    std::string field_s;
    double param = 0.0; // within radius, or the const score
};

struct CombSpec {
    enum class Kind { kConcat, kConcatDrop, kFields };
    Kind kind = Kind::kConcat;
    std::string dropped;             // concat_drop
    std::vector<std::string> fields; // fields(...)
};

struct AstNode {
    NodeKind kind = NodeKind::kLoad;
    int line = 0;
    int column = 0;
    std::vector<std::unique_ptr<AstNode>> children;

    std::string path;                // load
    PredPtr predicate;               // select
    std::vector<std::string> fields; // project
    SimSpec sim;                     // join
    CombSpec comb;                   // join
    long shots = 0;                  // sample
};

using QueryAst = std::unique_ptr<AstNode>;

/// SyntaxError with "line L, column C" in the message on any malformed input.
QueryAst parse_query(const std::string& source);

/// Canonical single-line form; parsing it back yields an identical tree, so
/// print(parse(print(ast))) == print(ast).
std::string print_query(const AstNode& ast);

/// How execute drives the two engines.
struct ExecOptions {
    enum class Mode { kQuantum, kClassical, kBoth };
    Mode mode = Mode::kBoth;
    std::uint64_t seed = 0;
    std::optional<int> iterations; // nullopt picks the optimal count per op
    int similarity_level = 1;
    bool postselect = true;
    int max_qubits = kDefaultMaxQubits;
};

std::string mode_name(ExecOptions::Mode mode);

/// One resolved operator. Nodes are numbered preorder from the root; ids
/// read "<kind>#<number>".
struct PlanNode {
    NodeKind kind = NodeKind::kLoad;
    std::string id;
    Schema schema;       // output schema
    int peak_qubits = 0; // widest register the node touches
    std::vector<int> children;

    WeightedRelation relation;       // load
    PredPtr predicate;               // select
    std::vector<std::string> fields; // project
    SimilarityOp sim;                // join
    CombineOp combine;               // join
    long shots = 0;                  // sample
};

struct QueryPlan {
    std::vector<PlanNode> nodes; // preorder; nodes[0] is the root
    int peak_qubits = 0;
};

/// Loads referenced relations, resolves every field, builds the similarity
/// and combine operators, and checks each node against the qubit budget.
/// Throws NodeError (UnknownField, QubitBudgetExceeded, FileError, ...).
QueryPlan plan_query(const AstNode& ast, const ExecOptions& options);

/// Finished run: the result document text plus the process exit code
/// (0 success, 2 query error, 3 budget error).
struct ExecResult {
    std::string document;
    int exit_code = 0;
    bool ok = false;
};

/// Runs the plan on the engines the mode selects and renders the result
/// document. Throws NodeError on operator failures.
ExecResult execute_plan(const QueryPlan& plan, const ExecOptions& options);

/// parse + plan + execute; never throws, errors become error documents.
ExecResult run_query(const std::string& source, const ExecOptions& options);

} // namespace qrel
