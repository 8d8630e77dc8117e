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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrel {

/// Failure categories surfaced by the library. The CLI maps
/// QubitBudgetExceeded to exit code 3 and everything else to 2.
enum class ErrorCode {
    TargetNotZero,
    ZeroNorm,
    FieldOverflow,
    QubitBudgetExceeded,
    EmptySelection,
    EmptyJoin,
    InvalidFraction,
    UnknownField,
    NotPrimaryKey,
    SchemaMismatch,
    SyntaxError,
    FileError,
    InvalidRelation,
    InvalidCombine,
    InvalidSimilarity,
    InvalidArgument,
};

constexpr std::string_view error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::TargetNotZero: return "TargetNotZero";
    case ErrorCode::ZeroNorm: return "ZeroNorm";
    case ErrorCode::FieldOverflow: return "FieldOverflow";
    case ErrorCode::QubitBudgetExceeded: return "QubitBudgetExceeded";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::EmptyJoin: return "EmptyJoin";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::NotPrimaryKey: return "NotPrimaryKey";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::FileError: return "FileError";
    case ErrorCode::InvalidRelation: return "InvalidRelation";
    case ErrorCode::InvalidCombine: return "InvalidCombine";
    case ErrorCode::InvalidSimilarity: return "InvalidSimilarity";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class QrelError : public std::runtime_error {
  public:
    QrelError(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code), detail_(message) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace qrel
