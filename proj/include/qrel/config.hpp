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

namespace qrel {

/// Hard ceiling for dense registers: 2^24 amplitudes (256 MiB of
/// complex doubles). Runtime budgets may be lower, never higher.
inline constexpr int kDefaultMaxQubits = 24;

/// Norm drift beyond this triggers an audited rescale.
inline constexpr double kNormTolerance = 1e-10;

/// Register-level knobs shared by the relation, operator and planner layers.
struct Config {
    int max_qubits = kDefaultMaxQubits;
};

} // namespace qrel
