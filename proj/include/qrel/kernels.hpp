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

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qrel/bits.hpp"

namespace qrel::kernels {

using Amplitude = std::complex<double>;
using BasisPredicate = std::function<bool(BasisIndex)>;

// Amplitude-array inner loops. qrel::kernels holds the OpenMP versions used
// by StateVector; qrel::kernels::serial mirrors every signature with plain
// loops and is the reference the parity tests and the benchmark run against.
//
// Callbacks (predicates, weight functions) must be safe to invoke from
// multiple threads; every callback built inside this library is a pure
// function of the basis index.

/// Sum of squared magnitudes.
double norm_sq(std::span<const Amplitude> amps);

/// Multiplies every amplitude by `factor`.
void scale(std::span<Amplitude> amps, double factor);

/// Negates amplitudes on basis states where `marked` holds.
void phase_flip(std::span<Amplitude> amps, const BasisPredicate& marked);

/// a_i <- 2*mean(a) - a_i (inversion about the average amplitude).
void invert_about_mean(std::span<Amplitude> amps);

/// a <- 2 <ref|a> ref - a (reflection through the reference state).
/// Equals invert_about_mean when ref is the uniform superposition.
void reflect_about(std::span<Amplitude> amps, std::span<const Amplitude> ref);

/// out[i] = in[mu(i)] where mu XORs the target bits with the source bits.
/// mu is an involution, so the gather realizes the CNOT-copy permutation.
void xor_copy_permute(std::span<const Amplitude> in, std::span<Amplitude> out,
                      const QubitIndexSet& source, const QubitIndexSet& target);

/// Applies a 4x4 matrix (row-major, basis order |ab> with qubit_a the high
/// bit) to every amplitude quadruple selected by the (qubit_a, qubit_b) pair.
void apply_pair_matrix(std::span<Amplitude> amps, int qubit_a, int qubit_b,
                       const std::array<Amplitude, 16>& matrix);

/// Rotates the ancilla qubit on every base state with ancilla = 0:
///   a|b,0>  ->  a*sqrt(1-w)|b,0> + a*sqrt(w)*e^{i phi}|b,1>
/// where (w, phi) come from `weight` evaluated on the non-ancilla bits.
/// States with ancilla = 1 must carry zero amplitude.
void ancilla_rotate(std::span<Amplitude> amps, int ancilla_qubit,
                    const std::function<std::pair<double, double>(BasisIndex)>& weight);

/// probs[i] = |amps[i]|^2.
void probabilities_into(std::span<const Amplitude> amps, std::span<double> probs);

/// Accumulates |amplitude|^2 into buckets indexed by the compacted bits of
/// `keep`. `buckets` must have size 2^keep.size() and be zeroed by the caller.
void marginal_accumulate(std::span<const Amplitude> amps, const QubitIndexSet& keep,
                         std::span<double> buckets);

/// Probability mass on marked basis states.
double marked_mass(std::span<const Amplitude> amps, const BasisPredicate& marked);

namespace serial {

double norm_sq(std::span<const Amplitude> amps);
void scale(std::span<Amplitude> amps, double factor);
void phase_flip(std::span<Amplitude> amps, const BasisPredicate& marked);
void invert_about_mean(std::span<Amplitude> amps);
void reflect_about(std::span<Amplitude> amps, std::span<const Amplitude> ref);
void xor_copy_permute(std::span<const Amplitude> in, std::span<Amplitude> out,
                      const QubitIndexSet& source, const QubitIndexSet& target);
void apply_pair_matrix(std::span<Amplitude> amps, int qubit_a, int qubit_b,
                       const std::array<Amplitude, 16>& matrix);
void ancilla_rotate(std::span<Amplitude> amps, int ancilla_qubit,
                    const std::function<std::pair<double, double>(BasisIndex)>& weight);
void probabilities_into(std::span<const Amplitude> amps, std::span<double> probs);
void marginal_accumulate(std::span<const Amplitude> amps, const QubitIndexSet& keep,
                         std::span<double> buckets);
double marked_mass(std::span<const Amplitude> amps, const BasisPredicate& marked);

} // namespace serial

} // namespace qrel::kernels
