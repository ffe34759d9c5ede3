#pragma once

#include "troppca/simd/kernels.hpp"

namespace troppca::simd::detail {

// Defined in the per-ISA translation units that are compiled in.
const KernelTable& avx2_table() noexcept;
const KernelTable& neon_table() noexcept;

}  // namespace troppca::simd::detail
