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

#include "qrel/state_vector.hpp"

#include <cmath>
#include <utility>

#include "qrel/rng.hpp"

namespace qrel {

namespace {

void check_register_size(int num_qubits, int max_qubits) {
    if (num_qubits < 1)
        throw QrelError(ErrorCode::InvalidArgument, "register needs at least one qubit");
    if (num_qubits > max_qubits || num_qubits > kDefaultMaxQubits)
        throw QrelError(ErrorCode::QubitBudgetExceeded,
                        "register of " + std::to_string(num_qubits) +
                            " qubits exceeds the budget of " +
                            std::to_string(std::min(max_qubits, kDefaultMaxQubits)));
}

void check_qubit(int q, int num_qubits) {
    if (q < 0 || q >= num_qubits)
        throw QrelError(ErrorCode::InvalidArgument,
                        "qubit " + std::to_string(q) + " out of range for " +
                            std::to_string(num_qubits) + "-qubit register");
}

} // namespace

StateVector StateVector::zero_state(int num_qubits, int max_qubits) {
    return basis_state(num_qubits, 0, max_qubits);
}

StateVector StateVector::basis_state(int num_qubits, BasisIndex index, int max_qubits) {
    check_register_size(num_qubits, max_qubits);
    if (index >= dim_of(num_qubits))
        throw QrelError(ErrorCode::InvalidArgument, "basis index out of range");
    std::vector<Amplitude> amps(dim_of(num_qubits), Amplitude{0.0, 0.0});
    amps[index] = Amplitude{1.0, 0.0};
    return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<Amplitude> amps,
                                         int max_qubits) {
    check_register_size(num_qubits, max_qubits);
    if (amps.size() != dim_of(num_qubits))
        throw QrelError(ErrorCode::InvalidArgument,
                        "amplitude array length must be 2^num_qubits");
    StateVector state(num_qubits, std::move(amps));
    state.restore_norm();
    return state;
}

double StateVector::norm_sq() const { return kernels::norm_sq(amps_); }

std::vector<double> StateVector::probabilities() const {
    std::vector<double> probs(amps_.size());
    kernels::probabilities_into(amps_, probs);
    return probs;
}

void StateVector::restore_norm() {
    const double n2 = norm_sq();
    if (n2 <= 1e-24)
        throw QrelError(ErrorCode::ZeroNorm, "state vector has vanished");
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        audit_log_.push_back({"renormalize", std::sqrt(n2)});
        kernels::scale(amps_, 1.0 / std::sqrt(n2));
    }
}

void StateVector::apply_phase_flip(const BasisPredicate& marked) {
    kernels::phase_flip(amps_, marked);
}

void StateVector::apply_diffusion() {
    kernels::invert_about_mean(amps_);
    restore_norm();
}

void StateVector::apply_reflect_about(const StateVector& reference) {
    if (reference.num_qubits_ != num_qubits_)
        throw QrelError(ErrorCode::InvalidArgument,
                        "reflection reference has a different register size");
    kernels::reflect_about(amps_, reference.amps_);
    restore_norm();
}

void StateVector::apply_cnot_copy(const QubitIndexSet& source, const QubitIndexSet& target) {
    if (source.size() != target.size())
        throw QrelError(ErrorCode::InvalidArgument,
                        "source and target must have equal cardinality");
    if (source.empty())
        throw QrelError(ErrorCode::InvalidArgument, "empty copy sets");
    if (!source.disjoint_with(target))
        throw QrelError(ErrorCode::InvalidArgument, "source and target qubits overlap");
    check_qubit(source.max_index(), num_qubits_);
    check_qubit(target.max_index(), num_qubits_);

    const BasisIndex target_mask = target.mask();
    for (BasisIndex i = 0; i < amps_.size(); ++i)
        if ((i & target_mask) != 0 && amps_[i] != Amplitude{0.0, 0.0})
            throw QrelError(ErrorCode::TargetNotZero,
                            "target qubits carry amplitude on basis state " +
                                std::to_string(i));

    std::vector<Amplitude> out(amps_.size());
    kernels::xor_copy_permute(amps_, out, source, target);
    amps_ = std::move(out);
}

BasisIndex StateVector::measure_all(std::uint64_t rng_seed) const {
    const std::vector<double> probs = probabilities();
    const std::vector<double> sums = prefix_sums(probs);
    SeededRng rng(rng_seed);
    return static_cast<BasisIndex>(sample_from_prefix(sums, rng.next_unit()));
}

std::vector<double> StateVector::marginal_distribution(const QubitIndexSet& keep) const {
    if (keep.empty())
        throw QrelError(ErrorCode::InvalidArgument, "marginal needs at least one qubit");
    check_qubit(keep.max_index(), num_qubits_);
    std::vector<double> buckets(dim_of(static_cast<int>(keep.size())), 0.0);
    kernels::marginal_accumulate(amps_, keep, buckets);
    return buckets;
}

void StateVector::apply_pair_matrix(int qubit_a, int qubit_b,
                                    const std::array<Amplitude, 16>& matrix) {
    check_qubit(qubit_a, num_qubits_);
    check_qubit(qubit_b, num_qubits_);
    if (qubit_a == qubit_b)
        throw QrelError(ErrorCode::InvalidArgument, "pair gate needs two distinct qubits");
    kernels::apply_pair_matrix(amps_, qubit_a, qubit_b, matrix);
    const double n2 = norm_sq();
    if (n2 <= 1e-24)
        throw QrelError(ErrorCode::ZeroNorm, "matrix annihilated the state");
    audit_log_.push_back({"non_unitary_apply", std::sqrt(n2)});
    kernels::scale(amps_, 1.0 / std::sqrt(n2));
}

void StateVector::apply_mix_gate(int qubit_a, int qubit_b) {
    apply_pair_matrix(qubit_a, qubit_b, mix_gate_matrix());
}

void StateVector::apply_ancilla_rotation(
    int ancilla_qubit, const std::function<std::pair<double, double>(BasisIndex)>& weight) {
    check_qubit(ancilla_qubit, num_qubits_);
    kernels::ancilla_rotate(amps_, ancilla_qubit, weight);
    restore_norm();
}

} // namespace qrel
