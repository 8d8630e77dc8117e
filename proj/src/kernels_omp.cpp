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

// OpenMP kernels. Schedules are static so a run with a fixed thread count
// replays bit-for-bit; registers smaller than the cutoff fall through to
// the serial reference, where fork/join overhead would dominate.

#include "qrel/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qrel::kernels {

namespace {
constexpr std::size_t kParallelCutoff = std::size_t{1} << 12;

std::int64_t ssize_of(std::span<const Amplitude> amps) {
    return static_cast<std::int64_t>(amps.size());
}
} // namespace

double norm_sq(std::span<const Amplitude> amps) {
    if (amps.size() < kParallelCutoff) return serial::norm_sq(amps);
    const std::int64_t n = ssize_of(amps);
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::int64_t i = 0; i < n; ++i) acc += std::norm(amps[i]);
    return acc;
}

void scale(std::span<Amplitude> amps, double factor) {
    if (amps.size() < kParallelCutoff) return serial::scale(amps, factor);
    const std::int64_t n = ssize_of(amps);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) amps[i] *= factor;
}

void phase_flip(std::span<Amplitude> amps, const BasisPredicate& marked) {
    if (amps.size() < kParallelCutoff) return serial::phase_flip(amps, marked);
    const std::int64_t n = ssize_of(amps);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        if (marked(static_cast<BasisIndex>(i))) amps[i] = -amps[i];
}

void invert_about_mean(std::span<Amplitude> amps) {
    if (amps.size() < kParallelCutoff) return serial::invert_about_mean(amps);
    const std::int64_t n = ssize_of(amps);
    double sum_re = 0.0, sum_im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : sum_re, sum_im)
    for (std::int64_t i = 0; i < n; ++i) {
        sum_re += amps[i].real();
        sum_im += amps[i].imag();
    }
    const Amplitude twice_mean =
        Amplitude{sum_re, sum_im} * (2.0 / static_cast<double>(n));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) amps[i] = twice_mean - amps[i];
}

void reflect_about(std::span<Amplitude> amps, std::span<const Amplitude> ref) {
    if (amps.size() < kParallelCutoff) return serial::reflect_about(amps, ref);
    const std::int64_t n = ssize_of(amps);
    double ov_re = 0.0, ov_im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : ov_re, ov_im)
    for (std::int64_t i = 0; i < n; ++i) {
        const Amplitude term = std::conj(ref[i]) * amps[i];
        ov_re += term.real();
        ov_im += term.imag();
    }
    const Amplitude two_overlap = 2.0 * Amplitude{ov_re, ov_im};
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) amps[i] = two_overlap * ref[i] - amps[i];
}

void xor_copy_permute(std::span<const Amplitude> in, std::span<Amplitude> out,
                      const QubitIndexSet& source, const QubitIndexSet& target) {
    if (in.size() < kParallelCutoff) return serial::xor_copy_permute(in, out, source, target);
    const std::int64_t n = ssize_of(in);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto b = static_cast<BasisIndex>(i);
        out[i] = in[b ^ target.deposit(source.extract(b))];
    }
}

void apply_pair_matrix(std::span<Amplitude> amps, int qubit_a, int qubit_b,
                       const std::array<Amplitude, 16>& matrix) {
    if (amps.size() < kParallelCutoff)
        return serial::apply_pair_matrix(amps, qubit_a, qubit_b, matrix);
    const BasisIndex mask_a = BasisIndex{1} << qubit_a;
    const BasisIndex mask_b = BasisIndex{1} << qubit_b;
    const std::int64_t n = ssize_of(amps);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto base = static_cast<BasisIndex>(i);
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
    if (amps.size() < kParallelCutoff)
        return serial::ancilla_rotate(amps, ancilla_qubit, weight);
    const BasisIndex mask = BasisIndex{1} << ancilla_qubit;
    const std::int64_t n = ssize_of(amps);
    // Each iteration owns the disjoint pair (i, i | mask).
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto b = static_cast<BasisIndex>(i);
        if (b & mask) continue;
        const Amplitude a = amps[b];
        if (a == Amplitude{0.0, 0.0}) continue;
        const auto [w, phi] = weight(b);
        amps[b] = a * std::sqrt(1.0 - w);
        amps[b | mask] = a * std::sqrt(w) * std::polar(1.0, phi);
    }
}

void probabilities_into(std::span<const Amplitude> amps, std::span<double> probs) {
    if (amps.size() < kParallelCutoff) return serial::probabilities_into(amps, probs);
    const std::int64_t n = ssize_of(amps);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) probs[i] = std::norm(amps[i]);
}

void marginal_accumulate(std::span<const Amplitude> amps, const QubitIndexSet& keep,
                         std::span<double> buckets) {
    if (amps.size() < kParallelCutoff)
        return serial::marginal_accumulate(amps, keep, buckets);
#ifdef _OPENMP
    const std::int64_t n = ssize_of(amps);
#pragma omp parallel
    {
        std::vector<double> local(buckets.size(), 0.0);
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i)
            local[keep.extract(static_cast<BasisIndex>(i))] += std::norm(amps[i]);
        // Merge in thread order so totals are reproducible for a fixed
        // thread count.
        for (int t = 0; t < omp_get_num_threads(); ++t) {
#pragma omp barrier
            if (t == omp_get_thread_num())
                for (std::size_t k = 0; k < buckets.size(); ++k) buckets[k] += local[k];
        }
    }
#else
    serial::marginal_accumulate(amps, keep, buckets);
#endif
}

double marked_mass(std::span<const Amplitude> amps, const BasisPredicate& marked) {
    if (amps.size() < kParallelCutoff) return serial::marked_mass(amps, marked);
    const std::int64_t n = ssize_of(amps);
    double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
    for (std::int64_t i = 0; i < n; ++i)
        if (marked(static_cast<BasisIndex>(i))) acc += std::norm(amps[i]);
    return acc;
}

} // namespace qrel::kernels
