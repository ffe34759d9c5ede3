// AArch64 only; NEON is architecturally guaranteed there.
#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace troppca::simd {
namespace {

double min_diff_neon(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    double lo = a[0] - b[0];
    if (n >= 2) {
        float64x2_t vlo = vsubq_f64(vld1q_f64(a), vld1q_f64(b));
        for (i = 2; i + 2 <= n; i += 2) {
            vlo = vminq_f64(vlo, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        }
        lo = vminvq_f64(vlo);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < lo) lo = d;
    }
    return lo + 0.0;
}

double max_diff_neon(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    double hi = a[0] - b[0];
    if (n >= 2) {
        float64x2_t vhi = vsubq_f64(vld1q_f64(a), vld1q_f64(b));
        for (i = 2; i + 2 <= n; i += 2) {
            vhi = vmaxq_f64(vhi, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        }
        hi = vmaxvq_f64(vhi);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d > hi) hi = d;
    }
    return hi + 0.0;
}

double diff_range_neon(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    double lo = a[0] - b[0];
    double hi = lo;
    if (n >= 2) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a), vld1q_f64(b));
        float64x2_t vlo = d0;
        float64x2_t vhi = d0;
        for (i = 2; i + 2 <= n; i += 2) {
            const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
            vlo = vminq_f64(vlo, d);
            vhi = vmaxq_f64(vhi, d);
        }
        lo = vminvq_f64(vlo);
        hi = vmaxvq_f64(vhi);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < lo) lo = d;
        if (d > hi) hi = d;
    }
    return (hi - lo) + 0.0;
}

void shifted_max_neon(double* acc, const double* v, double shift, std::size_t n) {
    const float64x2_t vs = vdupq_n_f64(shift);
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vaddq_f64(vld1q_f64(v + i), vs);
        vst1q_f64(acc + i, vaddq_f64(vmaxq_f64(x, vld1q_f64(acc + i)), zero));
    }
    for (; i < n; ++i) {
        const double x = v[i] + shift;
        acc[i] = (x > acc[i] ? x : acc[i]) + 0.0;
    }
}

constexpr KernelTable kNeon{
    "neon", min_diff_neon, max_diff_neon, diff_range_neon, shifted_max_neon,
};

}  // namespace

const KernelTable& detail::neon_table() noexcept { return kNeon; }

}  // namespace troppca::simd
