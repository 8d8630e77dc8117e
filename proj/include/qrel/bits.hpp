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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "qrel/errors.hpp"

namespace qrel {

/// Basis-state index into a dense amplitude array. Qubit 0 is the least
/// significant bit of the index.
using BasisIndex = std::uint64_t;

inline constexpr std::size_t dim_of(int num_qubits) {
    return std::size_t{1} << num_qubits;
}

inline constexpr int bit_of(BasisIndex b, int qubit) {
    return static_cast<int>((b >> qubit) & 1u);
}

/// Strictly increasing set of qubit positions, validated on construction.
class QubitIndexSet {
  public:
    QubitIndexSet() = default;

    QubitIndexSet(std::initializer_list<int> indices)
        : QubitIndexSet(std::vector<int>(indices)) {}

    explicit QubitIndexSet(std::vector<int> indices) : indices_(std::move(indices)) {
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            if (indices_[i] < 0)
                throw QrelError(ErrorCode::InvalidArgument, "qubit index is negative");
            if (i > 0 && indices_[i] <= indices_[i - 1])
                throw QrelError(ErrorCode::InvalidArgument,
                                "qubit indices must be strictly increasing");
        }
    }

    /// Consecutive block [first, first + count).
    static QubitIndexSet range(int first, int count) {
        std::vector<int> v;
        v.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) v.push_back(first + i);
        return QubitIndexSet(std::move(v));
    }

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    int operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<int>& indices() const { return indices_; }

    int max_index() const { return indices_.empty() ? -1 : indices_.back(); }

    bool contains(int q) const {
        for (int i : indices_)
            if (i == q) return true;
        return false;
    }

    bool disjoint_with(const QubitIndexSet& other) const {
        for (int i : indices_)
            if (other.contains(i)) return false;
        return true;
    }

    /// OR of (1 << q) over the set.
    BasisIndex mask() const {
        BasisIndex m = 0;
        for (int i : indices_) m |= BasisIndex{1} << i;
        return m;
    }

    /// Compacts the selected bits of `b` into a dense pattern; the lowest
    /// selected qubit becomes bit 0 of the result.
    BasisIndex extract(BasisIndex b) const {
        BasisIndex out = 0;
        for (std::size_t i = 0; i < indices_.size(); ++i)
            out |= static_cast<BasisIndex>(bit_of(b, indices_[i])) << i;
        return out;
    }

    /// Inverse of extract: spreads a dense pattern onto the set's positions.
    BasisIndex deposit(BasisIndex pattern) const {
        BasisIndex out = 0;
        for (std::size_t i = 0; i < indices_.size(); ++i)
            out |= ((pattern >> i) & 1u) << indices_[i];
        return out;
    }

  private:
    std::vector<int> indices_;
};

} // namespace qrel
