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

#include <string>
#include <string_view>

#include "qrel/relation.hpp"

namespace qrel {

// Line-oriented relation files:
//
//   schema: name:width,name:width,...
//   <v1>,<v2>,...[ @p=<prob>][ @phase=<radians>]
//
// Rows without @p share the probability mass left over by the weighted
// rows, split evenly, so the total is 1. Blank lines and lines starting
// with '#' are skipped.

/// Parses relation text. InvalidRelation / FieldOverflow carry the line number.
WeightedRelation parse_relation_text(std::string_view text);

/// Reads a relation file; FileError if it cannot be opened.
WeightedRelation read_relation_file(const std::string& path);

/// Canonical form: sorted rows, every probability explicit with enough
/// digits that parsing returns the identical doubles, phases only when
/// nonzero.
std::string write_relation_text(const WeightedRelation& rel);

void write_relation_file(const WeightedRelation& rel, const std::string& path);

/// "v1,v2,..." for one tuple under a schema.
std::string format_tuple(const Schema& schema, BasisIndex bits);

} // namespace qrel
