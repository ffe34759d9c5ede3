#pragma once

// Data-parallel inner loops of the tropical geometry. Each entry has a scalar
// reference implementation; vector variants (AVX2 on x86-64, NEON on AArch64)
// are selected once at startup. All kernels use only exactly rounded
// operations (add, sub, min, max), so every variant returns bit-identical
// results to the scalar one.

#include <cstddef>
#include <span>

namespace troppca::simd {

struct KernelTable {
    const char* name;
    // min_i (a_i - b_i)
    double (*min_diff)(const double* a, const double* b, std::size_t n);
    // max_i (a_i - b_i)
    double (*max_diff)(const double* a, const double* b, std::size_t n);
    // max_i (a_i - b_i) - min_i (a_i - b_i)
    double (*diff_range)(const double* a, const double* b, std::size_t n);
    // acc_i = max(acc_i, v_i + shift)
    void (*shifted_max)(double* acc, const double* v, double shift, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

// Widest supported variant. Setting TROPPCA_SIMD=scalar in the environment
// forces the reference kernels.
const KernelTable& active() noexcept;

inline double min_diff(std::span<const double> a, std::span<const double> b) {
    return active().min_diff(a.data(), b.data(), a.size());
}
inline double max_diff(std::span<const double> a, std::span<const double> b) {
    return active().max_diff(a.data(), b.data(), a.size());
}
inline double diff_range(std::span<const double> a, std::span<const double> b) {
    return active().diff_range(a.data(), b.data(), a.size());
}
inline void shifted_max(std::span<double> acc, std::span<const double> v, double shift) {
    active().shifted_max(acc.data(), v.data(), shift, acc.size());
}

}  // namespace troppca::simd
