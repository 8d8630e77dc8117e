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

// Reference kernels: straight loops, no threading. The parity tests hold
// the OpenMP kernels to these results.

#include "qrel/kernels.hpp"

#include <cmath>

namespace qrel::kernels::serial {

double norm_sq(std::span<const Amplitude> amps) {
    double acc = 0.0;
    for (const Amplitude& a : amps) acc += std::norm(a);
    return acc;
}

void scale(std::span<Amplitude> amps, double factor) {
    for (Amplitude& a : amps) a *= factor;
}

void phase_flip(std::span<Amplitude> amps, const BasisPredicate& marked) {
    for (BasisIndex i = 0; i < amps.size(); ++i)
        if (marked(i)) amps[i] = -amps[i];
}

void invert_about_mean(std::span<Amplitude> amps) {
    Amplitude sum{0.0, 0.0};
    for (const Amplitude& a : amps) sum += a;
    const Amplitude twice_mean = 2.0 * sum / static_cast<double>(amps.size());
    for (Amplitude& a : amps) a = twice_mean - a;
}

void reflect_about(std::span<Amplitude> amps, std::span<const Amplitude> ref) {
    Amplitude overlap{0.0, 0.0};
    for (std::size_t i = 0; i < amps.size(); ++i) overlap += std::conj(ref[i]) * amps[i];
    const Amplitude two_overlap = 2.0 * overlap;
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] = two_overlap * ref[i] - amps[i];
}

void xor_copy_permute(std::span<const Amplitude> in, std::span<Amplitude> out,
                      const QubitIndexSet& source, const QubitIndexSet& target) {
    for (BasisIndex i = 0; i < in.size(); ++i) {
        const BasisIndex mu = i ^ target.deposit(source.extract(i));
        out[i] = in[mu];
    }
}

void apply_pair_matrix(std::span<Amplitude> amps, int qubit_a, int qubit_b,
                       const std::array<Amplitude, 16>& matrix) {
    const BasisIndex mask_a = BasisIndex{1} << qubit_a;
    const BasisIndex mask_b = BasisIndex{1} << qubit_b;
    for (BasisIndex base = 0; base < amps.size(); ++base) {
        if ((base & mask_a) || (base & mask_b)) continue;
        const BasisIndex idx[4] = {base, base | mask_b, base | mask_a,
                                   base | mask_a | mask_b};
        Amplitude v[4];
        for (int r = 0; r < 4; ++r) {
            v[r] = {0.0, 0.0};
            for (int c = 0; c < 4; ++c) v[r] += matrix[4 * r + c] * amps[idx[c]];
        }
        for (int r = 0; r < 4; ++r) amps[idx[r]] = v[r];
    }
}

void ancilla_rotate(std::span<Amplitude> amps, int ancilla_qubit,
                    const std::function<std::pair<double, double>(BasisIndex)>& weight) {
    const BasisIndex mask = BasisIndex{1} << ancilla_qubit;
    for (BasisIndex i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Amplitude a = amps[i];
        if (a == Amplitude{0.0, 0.0}) continue;
        const auto [w, phi] = weight(i);
        amps[i] = a * std::sqrt(1.0 - w);
        amps[i | mask] = a * std::sqrt(w) * std::polar(1.0, phi);
    }
}

void probabilities_into(std::span<const Amplitude> amps, std::span<double> probs) {
    for (std::size_t i = 0; i < amps.size(); ++i) probs[i] = std::norm(amps[i]);
}

void marginal_accumulate(std::span<const Amplitude> amps, const QubitIndexSet& keep,
                         std::span<double> buckets) {
    for (BasisIndex i = 0; i < amps.size(); ++i)
        buckets[keep.extract(i)] += std::norm(amps[i]);
}

double marked_mass(std::span<const Amplitude> amps, const BasisPredicate& marked) {
    double acc = 0.0;
    for (BasisIndex i = 0; i < amps.size(); ++i)
        if (marked(i)) acc += std::norm(amps[i]);
    return acc;
}

} // namespace qrel::kernels::serial
