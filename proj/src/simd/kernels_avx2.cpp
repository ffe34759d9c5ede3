// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include "kernels_impl.hpp"

namespace troppca::simd {
namespace {

inline double hmin(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(m, _mm_unpackhi_pd(m, m)));
}

inline double hmax(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

double min_diff_avx2(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    double lo = a[0] - b[0];
    if (n >= 4) {
        __m256d vlo = _mm256_sub_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(b));
        for (i = 4; i + 4 <= n; i += 4) {
            vlo = _mm256_min_pd(vlo, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        }
        lo = hmin(vlo);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < lo) lo = d;
    }
    return lo + 0.0;
}

double max_diff_avx2(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    double hi = a[0] - b[0];
    if (n >= 4) {
        __m256d vhi = _mm256_sub_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(b));
        for (i = 4; i + 4 <= n; i += 4) {
            vhi = _mm256_max_pd(vhi, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        }
        hi = hmax(vhi);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d > hi) hi = d;
    }
    return hi + 0.0;
}

double diff_range_avx2(const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    double lo = a[0] - b[0];
    double hi = lo;
    if (n >= 4) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(b));
        __m256d vlo = d0;
        __m256d vhi = d0;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
            vlo = _mm256_min_pd(vlo, d);
            vhi = _mm256_max_pd(vhi, d);
        }
        lo = hmin(vlo);
        hi = hmax(vhi);
    }
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < lo) lo = d;
        if (d > hi) hi = d;
    }
    return (hi - lo) + 0.0;
}

void shifted_max_avx2(double* acc, const double* v, double shift, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(shift);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_add_pd(_mm256_loadu_pd(v + i), vs);
        const __m256d m = _mm256_max_pd(x, _mm256_loadu_pd(acc + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(m, zero));
    }
    for (; i < n; ++i) {
        const double x = v[i] + shift;
        acc[i] = (x > acc[i] ? x : acc[i]) + 0.0;
    }
}

constexpr KernelTable kAvx2{
    "avx2", min_diff_avx2, max_diff_avx2, diff_range_avx2, shifted_max_avx2,
};

}  // namespace

const KernelTable& detail::avx2_table() noexcept { return kAvx2; }

}  // namespace troppca::simd
