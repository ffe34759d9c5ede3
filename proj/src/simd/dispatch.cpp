#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace troppca::simd {

const KernelTable* avx2_kernels() noexcept {
#if defined(TROPPCA_WITH_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") != 0;
    }();
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_kernels() noexcept {
#if defined(TROPPCA_WITH_NEON)
    return &detail::neon_table();
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = []() -> const KernelTable& {
        const char* force = std::getenv("TROPPCA_SIMD");
        if (force != nullptr && std::strcmp(force, "scalar") == 0) return scalar_kernels();
        if (const KernelTable* t = avx2_kernels()) return *t;
        if (const KernelTable* t = neon_kernels()) return *t;
        return scalar_kernels();
    }();
    return table;
}

}  // namespace troppca::simd
