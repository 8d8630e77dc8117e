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

#include "qrel/qdsl.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrel {
namespace {

struct Token {
    enum class Kind { kIdent, kString, kNumber, kSymbol, kEnd };
    Kind kind = Kind::kEnd;
    std::string text;
    int line = 1;
    int column = 1;
};

[[noreturn]] void fail_at(int line, int column, const std::string& message) {
    throw QrelError(ErrorCode::SyntaxError, "line " + std::to_string(line) + ", column " +
                                                std::to_string(column) + ": " + message);
}

[[noreturn]] void fail_at(const Token& tok, const std::string& message) {
    fail_at(tok.line, tok.column, message);
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool is_keyword(const Token& tok, const char* kw) {
    return tok.kind == Token::Kind::kIdent && upper(tok.text) == kw;
}

const char* const kReserved[] = {"LOAD", "SELECT", "WHERE",   "PROJECT", "ON",  "JOIN",
                                 "COMBINE", "SAMPLE", "SHOTS", "AND",     "OR",  "NOT"};

bool is_reserved(const Token& tok) {
    if (tok.kind != Token::Kind::kIdent) return false;
    const std::string u = upper(tok.text);
    for (const char* kw : kReserved)
        if (u == kw) return true;
    return false;
}

std::vector<Token> lex(const std::string& source) {
    std::vector<Token> toks;
    int line = 1;
    int column = 1;
    std::size_t i = 0;
    const auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (source[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < source.size()) {
        const char c = source[i];
        if (c == '#') {
            while (i < source.size() && source[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.column = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < source.size() && (std::isalnum(static_cast<unsigned char>(source[j])) ||
                                         source[j] == '_'))
                ++j;
            tok.kind = Token::Kind::kIdent;
            tok.text = source.substr(i, j - i);
            advance(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j]))) ++j;
            if (j < source.size() && source[j] == '.') {
                ++j;
                if (j >= source.size() || !std::isdigit(static_cast<unsigned char>(source[j])))
                    fail_at(line, column, "malformed number");
                while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j])))
                    ++j;
            }
            tok.kind = Token::Kind::kNumber;
            tok.text = source.substr(i, j - i);
            advance(j - i);
        } else if (c == '"') {
            std::size_t j = i + 1;
            while (j < source.size() && source[j] != '"' && source[j] != '\n') ++j;
            if (j >= source.size() || source[j] != '"')
                fail_at(line, column, "unterminated string");
            tok.kind = Token::Kind::kString;
            tok.text = source.substr(i + 1, j - i - 1);
            advance(j - i + 1);
        } else if (c == '(' || c == ')' || c == ',' || c == '=' || c == '<' || c == '>') {
            tok.kind = Token::Kind::kSymbol;
            tok.text = std::string(1, c);
            advance(1);
        } else {
            fail_at(line, column, std::string("unexpected character '") + c + "'");
        }
        toks.push_back(std::move(tok));
    }
    Token end;
    end.kind = Token::Kind::kEnd;
    end.text = "end of input";
    end.line = line;
    end.column = column;
    toks.push_back(std::move(end));
    return toks;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    QueryAst parse() {
        QueryAst ast = parse_expr();
        if (peek().kind != Token::Kind::kEnd)
            fail_at(peek(), "unexpected trailing input '" + peek().text + "'");
        return ast;
    }

  private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& get() { return toks_[pos_++]; }

    bool at_symbol(const char* s) const {
        return peek().kind == Token::Kind::kSymbol && peek().text == s;
    }

    void expect_symbol(const char* s) {
        if (!at_symbol(s)) fail_at(peek(), std::string("expected '") + s + "'");
        get();
    }

    void expect_keyword(const char* kw) {
        if (!is_keyword(peek(), kw))
            fail_at(peek(), std::string("expected ") + kw + ", got '" + peek().text + "'");
        get();
    }

    std::string expect_field() {
        const Token& tok = peek();
        if (tok.kind != Token::Kind::kIdent)
            fail_at(tok, "expected a field name, got '" + tok.text + "'");
        if (is_reserved(tok))
            fail_at(tok, "reserved keyword '" + tok.text +
                             "' cannot name a field; parenthesize the child expression "
                             "if a field list should end here");
        return get().text;
    }

    std::uint64_t expect_integer(const char* what) {
        const Token& tok = peek();
        if (tok.kind != Token::Kind::kNumber || tok.text.find('.') != std::string::npos)
            fail_at(tok, std::string("expected an integer ") + what);
        try {
            return std::stoull(get().text);
        } catch (const std::out_of_range&) {
            fail_at(tok, std::string("integer out of range for ") + what);
        }
    }

    double expect_real(const char* what) {
        const Token& tok = peek();
        if (tok.kind != Token::Kind::kNumber)
            fail_at(tok, std::string("expected a number ") + what);
        try {
            return std::stod(get().text);
        } catch (const std::out_of_range&) {
            fail_at(tok, std::string("number out of range for ") + what);
        }
    }

    QueryAst parse_expr() {
        const Token& tok = peek();
        if (at_symbol("(")) {
            get();
            QueryAst inner = parse_expr();
            expect_symbol(")");
            return inner;
        }
        if (tok.kind != Token::Kind::kIdent)
            fail_at(tok, "expected a query expression, got '" + tok.text + "'");
        const std::string kw = upper(tok.text);
        if (kw == "LOAD") return parse_load();
        if (kw == "SELECT") return parse_select();
        if (kw == "PROJECT") return parse_project();
        if (kw == "JOIN") return parse_join();
        if (kw == "SAMPLE") return parse_sample();
        fail_at(tok, "expected LOAD, SELECT, PROJECT, JOIN, or SAMPLE, got '" + tok.text + "'");
    }

    QueryAst make_node(NodeKind kind, const Token& tok) {
        auto node = std::make_unique<AstNode>();
        node->kind = kind;
        node->line = tok.line;
        node->column = tok.column;
        return node;
    }

    QueryAst parse_load() {
        QueryAst node = make_node(NodeKind::kLoad, get());
        if (peek().kind != Token::Kind::kString)
            fail_at(peek(), "expected a quoted file path after LOAD");
        node->path = get().text;
        return node;
    }

    QueryAst parse_select() {
        QueryAst node = make_node(NodeKind::kSelect, get());
        node->children.push_back(parse_expr());
        expect_keyword("WHERE");
        node->predicate = parse_pred_or();
        return node;
    }

    QueryAst parse_project() {
        QueryAst node = make_node(NodeKind::kProject, get());
        node->children.push_back(parse_expr());
        expect_keyword("ON");
        node->fields.push_back(expect_field());
        while (at_symbol(",")) {
            get();
            node->fields.push_back(expect_field());
        }
        return node;
    }

    QueryAst parse_join() {
        QueryAst node = make_node(NodeKind::kJoin, get());
        node->children.push_back(parse_expr());
        expect_symbol(",");
        node->children.push_back(parse_expr());
        expect_keyword("ON");
        node->sim = parse_sim();
        expect_keyword("COMBINE");
        node->comb = parse_comb();
        return node;
    }

    QueryAst parse_sample() {
        QueryAst node = make_node(NodeKind::kSample, get());
        node->children.push_back(parse_expr());
        expect_keyword("SHOTS");
        const Token& count_tok = peek();
        const std::uint64_t shots = expect_integer("shot count");
        if (shots < 1 || shots > 100000000)
            fail_at(count_tok, "shot count must lie in [1, 100000000]");
        node->shots = static_cast<long>(shots);
        return node;
    }

    PredPtr parse_pred_or() {
        PredPtr left = parse_pred_and();
        while (is_keyword(peek(), "OR")) {
            get();
            auto node = std::make_shared<PredNode>();
            node->kind = PredNode::Kind::kOr;
            node->children = {left, parse_pred_and()};
            left = node;
        }
        return left;
    }

    PredPtr parse_pred_and() {
        PredPtr left = parse_pred_not();
        while (is_keyword(peek(), "AND")) {
            get();
            auto node = std::make_shared<PredNode>();
            node->kind = PredNode::Kind::kAnd;
            node->children = {left, parse_pred_not()};
            left = node;
        }
        return left;
    }

    PredPtr parse_pred_not() {
        if (is_keyword(peek(), "NOT")) {
            get();
            auto node = std::make_shared<PredNode>();
            node->kind = PredNode::Kind::kNot;
            node->children = {parse_pred_not()};
            return node;
        }
        return parse_pred_primary();
    }

    PredPtr parse_pred_primary() {
        if (at_symbol("(")) {
            get();
            PredPtr inner = parse_pred_or();
            expect_symbol(")");
            return inner;
        }
        auto node = std::make_shared<PredNode>();
        node->kind = PredNode::Kind::kCompare;
        node->field = expect_field();
        const Token& op_tok = peek();
        if (op_tok.kind != Token::Kind::kSymbol ||
            (op_tok.text != "=" && op_tok.text != "<" && op_tok.text != ">"))
            fail_at(op_tok, "expected =, <, or > after field '" + node->field + "'");
        node->op = get().text[0];
        node->value = expect_integer("comparison value");
        return node;
    }

    SimSpec parse_sim() {
        const Token& tok = peek();
        if (tok.kind != Token::Kind::kIdent)
            fail_at(tok, "expected eq, within, or const");
        const std::string name = upper(get().text);
        SimSpec sim;
        if (name == "EQ") {
            sim.kind = SimSpec::Kind::kEq;
            expect_symbol("(");
            sim.field_r = expect_field();
            expect_symbol(",");
            sim.field_s = expect_field();
            expect_symbol(")");
        } else if (name == "WITHIN") {
            sim.kind = SimSpec::Kind::kWithin;
            expect_symbol("(");
            sim.field_r = expect_field();
            expect_symbol(",");
            sim.field_s = expect_field();
            expect_symbol(",");
            sim.param = expect_real("for the within radius");
            expect_symbol(")");
        } else if (name == "CONST") {
            sim.kind = SimSpec::Kind::kConst;
            expect_symbol("(");
            sim.param = expect_real("for the const score");
            expect_symbol(")");
        } else {
            fail_at(tok, "expected eq, within, or const, got '" + tok.text + "'");
        }
        return sim;
    }

    CombSpec parse_comb() {
        const Token& tok = peek();
        if (tok.kind != Token::Kind::kIdent)
            fail_at(tok, "expected concat, concat_drop, or fields");
        const std::string name = upper(get().text);
        CombSpec comb;
        if (name == "CONCAT") {
            comb.kind = CombSpec::Kind::kConcat;
        } else if (name == "CONCAT_DROP") {
            comb.kind = CombSpec::Kind::kConcatDrop;
            expect_symbol("(");
            comb.dropped = expect_field();
            expect_symbol(")");
        } else if (name == "FIELDS") {
            comb.kind = CombSpec::Kind::kFields;
            expect_symbol("(");
            comb.fields.push_back(expect_field());
            while (at_symbol(",")) {
                get();
                comb.fields.push_back(expect_field());
            }
            expect_symbol(")");
        } else {
            fail_at(tok, "expected concat, concat_drop, or fields, got '" + tok.text + "'");
        }
        return comb;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

int pred_precedence(PredNode::Kind kind) {
    switch (kind) {
        case PredNode::Kind::kOr: return 1;
        case PredNode::Kind::kAnd: return 2;
        case PredNode::Kind::kNot: return 3;
        case PredNode::Kind::kCompare: return 4;
    }
    return 4;
}

std::string print_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string print_pred(const PredNode& pred, int parent_precedence) {
    const int prec = pred_precedence(pred.kind);
    std::string out;
    switch (pred.kind) {
        case PredNode::Kind::kOr:
            out = print_pred(*pred.children[0], prec) + " OR " + print_pred(*pred.children[1], prec);
            break;
        case PredNode::Kind::kAnd:
            out = print_pred(*pred.children[0], prec) + " AND " +
                  print_pred(*pred.children[1], prec);
            break;
        case PredNode::Kind::kNot:
            out = "NOT " + print_pred(*pred.children[0], prec);
            break;
        case PredNode::Kind::kCompare:
            out = pred.field + " " + pred.op + " " + std::to_string(pred.value);
            break;
    }
    if (prec < parent_precedence) out = "(" + out + ")";
    return out;
}

std::string print_sim(const SimSpec& sim) {
    switch (sim.kind) {
        case SimSpec::Kind::kEq: return "eq(" + sim.field_r + ", " + sim.field_s + ")";
        case SimSpec::Kind::kWithin:
            return "within(" + sim.field_r + ", " + sim.field_s + ", " + print_real(sim.param) +
                   ")";
        case SimSpec::Kind::kConst: return "const(" + print_real(sim.param) + ")";
    }
    return "";
}

std::string print_comb(const CombSpec& comb) {
    switch (comb.kind) {
        case CombSpec::Kind::kConcat: return "concat";
        case CombSpec::Kind::kConcatDrop: return "concat_drop(" + comb.dropped + ")";
        case CombSpec::Kind::kFields: {
            std::string out = "fields(";
            for (std::size_t i = 0; i < comb.fields.size(); ++i) {
                if (i > 0) out += ", ";
                out += comb.fields[i];
            }
            return out + ")";
        }
    }
    return "";
}

std::string print_child(const AstNode& child) {
    const std::string s = print_query(child);
    return child.kind == NodeKind::kLoad ? s : "(" + s + ")";
}

} // namespace

std::string node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::kLoad: return "load";
        case NodeKind::kSelect: return "select";
        case NodeKind::kProject: return "project";
        case NodeKind::kJoin: return "join";
        case NodeKind::kSample: return "sample";
    }
    return "node";
}

QueryAst parse_query(const std::string& source) {
    return Parser(lex(source)).parse();
}

std::string print_query(const AstNode& ast) {
    switch (ast.kind) {
        case NodeKind::kLoad: return "LOAD \"" + ast.path + "\"";
        case NodeKind::kSelect:
            return "SELECT " + print_child(*ast.children[0]) + " WHERE " +
                   print_pred(*ast.predicate, 0);
        case NodeKind::kProject: {
            std::string out = "PROJECT " + print_child(*ast.children[0]) + " ON ";
            for (std::size_t i = 0; i < ast.fields.size(); ++i) {
                if (i > 0) out += ", ";
                out += ast.fields[i];
            }
            return out;
        }
        case NodeKind::kJoin:
            return "JOIN " + print_child(*ast.children[0]) + ", " +
                   print_child(*ast.children[1]) + " ON " + print_sim(ast.sim) + " COMBINE " +
                   print_comb(ast.comb);
        case NodeKind::kSample:
            return "SAMPLE " + print_child(*ast.children[0]) + " SHOTS " +
                   std::to_string(ast.shots);
    }
    return "";
}

} // namespace qrel
