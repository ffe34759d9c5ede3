#include "troppca/simd/kernels.hpp"

#include "kernels_impl.hpp"

namespace troppca::simd {
namespace {

double min_diff_scalar(const double* a, const double* b, std::size_t n) {
    double lo = a[0] - b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < lo) lo = d;
    }
    return lo + 0.0;
}

double max_diff_scalar(const double* a, const double* b, std::size_t n) {
    double hi = a[0] - b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d > hi) hi = d;
    }
    return hi + 0.0;
}

double diff_range_scalar(const double* a, const double* b, std::size_t n) {
    double lo = a[0] - b[0];
    double hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = a[i] - b[i];
        if (d < lo) lo = d;
        if (d > hi) hi = d;
    }
    return (hi - lo) + 0.0;
}

void shifted_max_scalar(double* acc, const double* v, double shift, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = v[i] + shift;
        acc[i] = (x > acc[i] ? x : acc[i]) + 0.0;
    }
}

constexpr KernelTable kScalar{
    "scalar", min_diff_scalar, max_diff_scalar, diff_range_scalar, shifted_max_scalar,
};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace troppca::simd
