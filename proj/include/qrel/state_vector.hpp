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
#include <span>
#include <string>
#include <vector>

#include "qrel/bits.hpp"
#include "qrel/config.hpp"
#include "qrel/kernels.hpp"

namespace qrel {

using Amplitude = std::complex<double>;
using BasisPredicate = kernels::BasisPredicate;

/// Entry in a state's audit log. Either an intentional non-unitary matrix
/// application or a drift-triggered rescale; neither happens silently.
struct AuditEvent {
    std::string kind;
    double norm_before = 0.0;
};

/// The two-qubit combiner matrix, row-major, basis order |ab> with qubit a
/// as the high bit. Its rows are not orthonormal, so applying it shrinks or
/// grows the norm; apply_mix_gate renormalizes and logs the event.
inline const std::array<Amplitude, 16>& mix_gate_matrix() {
    static const std::array<Amplitude, 16> m = {
        Amplitude{1.0},           Amplitude{0.0},           Amplitude{0.0},           Amplitude{0.0},
        Amplitude{0.7071067811865476}, Amplitude{0.7071067811865476}, Amplitude{0.0},           Amplitude{0.0},
        Amplitude{0.0},           Amplitude{0.0},           Amplitude{0.7071067811865476}, Amplitude{0.7071067811865476},
        Amplitude{0.0},           Amplitude{0.0},           Amplitude{0.0},           Amplitude{1.0},
    };
    return m;
}

/// Dense register of n qubits: 2^n complex amplitudes indexed by basis
/// integer, qubit 0 the least significant bit. A StateVector is a value:
/// one owner, mutating operations parallelize internally but expose a
/// sequential contract. Unit norm (within 1e-10) holds after every public
/// operation.
class StateVector {
  public:
    /// |0...0> on `num_qubits` qubits.
    static StateVector zero_state(int num_qubits, int max_qubits = kDefaultMaxQubits);

    /// Computational basis state |index>.
    static StateVector basis_state(int num_qubits, BasisIndex index,
                                   int max_qubits = kDefaultMaxQubits);

    /// Takes ownership of an amplitude array of length 2^num_qubits.
    /// Rescales (and logs) if the norm drifts beyond tolerance; rejects
    /// zero vectors.
    static StateVector from_amplitudes(int num_qubits, std::vector<Amplitude> amps,
                                       int max_qubits = kDefaultMaxQubits);

    int num_qubits() const { return num_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    Amplitude amplitude(BasisIndex i) const { return amps_[i]; }

    double norm_sq() const;

    /// |amplitude[i]|^2 for every basis state.
    std::vector<double> probabilities() const;

    /// Negates the amplitude of every marked basis state. Exact: flipping
    /// twice with the same predicate restores the original bits.
    void apply_phase_flip(const BasisPredicate& marked);

    /// Inversion about the mean amplitude: a_i <- 2*mean - a_i.
    void apply_diffusion();

    /// Reflection through `reference`: a <- 2<ref|a>ref - a. For a uniform
    /// reference this is exactly apply_diffusion; for a non-uniform one it
    /// is the amplitude-amplification diffusion step.
    void apply_reflect_about(const StateVector& reference);

    /// XORs target bits with source bits on every basis state, entangling
    /// the copy with the original. Requires disjoint index sets of equal
    /// size and target qubits in |0> on every populated basis state;
    /// violation raises TargetNotZero.
    void apply_cnot_copy(const QubitIndexSet& source, const QubitIndexSet& target);

    /// Samples a basis index with probability |amplitude|^2. Does not
    /// collapse the state. Same seed, same index, bit for bit.
    BasisIndex measure_all(std::uint64_t rng_seed) const;

    /// Distribution over the compacted bit patterns of the kept qubits;
    /// bucket[p] sums |amplitude|^2 over basis states matching p.
    std::vector<double> marginal_distribution(const QubitIndexSet& keep) const;

    /// Applies an arbitrary 4x4 matrix to the (qubit_a, qubit_b) pair and
    /// renormalizes, logging a non-unitary-application event. ZeroNorm if
    /// the matrix annihilates the state.
    void apply_pair_matrix(int qubit_a, int qubit_b,
                           const std::array<Amplitude, 16>& matrix);

    /// apply_pair_matrix with the literal combiner matrix of
    /// mix_gate_matrix().
    void apply_mix_gate(int qubit_a, int qubit_b);

    /// Rotates an ancilla qubit per a per-base-state weight; see
    /// kernels::ancilla_rotate. Preserves unit norm.
    void apply_ancilla_rotation(int ancilla_qubit,
                                const std::function<std::pair<double, double>(BasisIndex)>& weight);

    const std::vector<AuditEvent>& audit_log() const { return audit_log_; }

  private:
    StateVector(int num_qubits, std::vector<Amplitude> amps)
        : num_qubits_(num_qubits), amps_(std::move(amps)) {}

    std::span<Amplitude> mutable_amps() { return amps_; }

    /// Rescales to unit norm when drift exceeds kNormTolerance, logging a
    /// "renormalize" event. ZeroNorm when there is nothing to rescale.
    void restore_norm();

    int num_qubits_;
    std::vector<Amplitude> amps_;
    std::vector<AuditEvent> audit_log_;
};

} // namespace qrel
