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

#include "qrel/relation_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace qrel {

namespace {

struct PendingRow {
    BasisIndex bits = 0;
    double phase = 0.0;
    double prob = -1.0; // negative: unweighted
    int line = 0;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw QrelError(ErrorCode::InvalidRelation, "line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, int line, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(s), &used);
        if (used != s.size()) fail(line, std::string("bad ") + what);
        return v;
    } catch (const QrelError&) {
        throw;
    } catch (...) {
        fail(line, std::string("bad ") + what);
    }
}

std::uint64_t parse_u64(std::string_view s, int line, const char* what) {
    if (s.empty()) fail(line, std::string("bad ") + what);
    std::uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') fail(line, std::string("bad ") + what);
        v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
}

Schema parse_schema_line(std::string_view body, int line) {
    std::vector<Field> fields;
    std::stringstream ss{std::string(body)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string_view f = trim(item);
        const auto colon = f.find(':');
        if (colon == std::string_view::npos) fail(line, "expected name:width");
        const std::string name{trim(f.substr(0, colon))};
        const auto width = parse_u64(trim(f.substr(colon + 1)), line, "field width");
        if (width == 0 || width > 63) fail(line, "field width out of range");
        fields.push_back(Field{name, static_cast<int>(width)});
    }
    return Schema(std::move(fields));
}

} // namespace

WeightedRelation parse_relation_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;

    Schema schema;
    bool have_schema = false;
    std::vector<PendingRow> pending;

    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (!have_schema) {
            constexpr std::string_view kPrefix = "schema:";
            if (line.substr(0, kPrefix.size()) != kPrefix)
                fail(line_no, "first line must be 'schema: ...'");
            schema = parse_schema_line(line.substr(kPrefix.size()), line_no);
            have_schema = true;
            continue;
        }

        PendingRow row;
        row.line = line_no;

        // Split off @-suffixes.
        std::string_view values_part = line;
        while (true) {
            const auto at = values_part.rfind('@');
            if (at == std::string_view::npos) break;
            std::string_view suffix = trim(values_part.substr(at + 1));
            values_part = trim(values_part.substr(0, at));
            const auto eq = suffix.find('=');
            if (eq == std::string_view::npos) fail(line_no, "bad @ suffix");
            const std::string_view key = trim(suffix.substr(0, eq));
            const std::string_view val = trim(suffix.substr(eq + 1));
            if (key == "p") {
                row.prob = parse_double(val, line_no, "probability");
                if (!(row.prob > 0.0) || row.prob > 1.0)
                    fail(line_no, "probability must be in (0,1]");
            } else if (key == "phase") {
                row.phase = parse_double(val, line_no, "phase");
            } else {
                fail(line_no, "unknown suffix @" + std::string(key));
            }
        }

        std::vector<std::uint64_t> values;
        std::stringstream vs{std::string(values_part)};
        std::string item;
        while (std::getline(vs, item, ','))
            values.push_back(parse_u64(trim(item), line_no, "field value"));
        try {
            row.bits = schema.encode(values);
        } catch (const QrelError& e) {
            if (e.code() == ErrorCode::FieldOverflow)
                throw QrelError(ErrorCode::FieldOverflow,
                                "line " + std::to_string(line_no) + ": " + e.detail());
            fail(line_no, e.detail());
        }
        pending.push_back(row);
    }

    if (!have_schema)
        throw QrelError(ErrorCode::InvalidRelation, "missing schema line");
    if (pending.empty())
        throw QrelError(ErrorCode::InvalidRelation, "relation has no rows");

    double explicit_sum = 0.0;
    long unweighted = 0;
    for (const PendingRow& r : pending) {
        if (r.prob < 0.0)
            ++unweighted;
        else
            explicit_sum += r.prob;
    }

    double fill = 0.0;
    if (unweighted > 0) {
        const double remaining = 1.0 - explicit_sum;
        if (remaining <= 0.0)
            throw QrelError(ErrorCode::InvalidRelation,
                            "weighted rows already use the whole probability mass");
        fill = remaining / static_cast<double>(unweighted);
    } else if (std::abs(explicit_sum - 1.0) > 1e-9) {
        throw QrelError(ErrorCode::InvalidRelation,
                        "explicit probabilities sum to " + std::to_string(explicit_sum));
    }

    std::map<BasisIndex, RowWeight> rows;
    for (const PendingRow& r : pending) {
        const double p = r.prob < 0.0 ? fill : r.prob;
        if (!rows.emplace(r.bits, RowWeight{p, r.phase}).second)
            fail(r.line, "duplicate row");
    }
    return make_relation(std::move(schema), std::move(rows));
}

WeightedRelation read_relation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw QrelError(ErrorCode::FileError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_relation_text(buf.str());
    } catch (const QrelError& e) {
        throw QrelError(e.code(), path + ": " + e.detail());
    }
}

std::string format_tuple(const Schema& schema, BasisIndex bits) {
    std::string out;
    for (std::size_t i = 0; i < schema.field_count(); ++i) {
        if (i) out += ',';
        out += std::to_string(schema.field_value(bits, i));
    }
    return out;
}

std::string write_relation_text(const WeightedRelation& rel) {
    std::string out = "schema: " + rel.schema.to_string() + "\n";
    char buf[64];
    for (const auto& [bits, w] : rel.rows) {
        out += format_tuple(rel.schema, bits);
        // %.17g round-trips doubles exactly.
        std::snprintf(buf, sizeof buf, " @p=%.17g", w.prob);
        out += buf;
        if (w.phase != 0.0) {
            std::snprintf(buf, sizeof buf, " @phase=%.17g", w.phase);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_relation_file(const WeightedRelation& rel, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw QrelError(ErrorCode::FileError, "cannot write " + path);
    out << write_relation_text(rel);
}

} // namespace qrel
