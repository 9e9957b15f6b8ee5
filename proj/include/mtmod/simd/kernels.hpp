#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops shared by the raster operations and the
// reference moderator. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2 variant; the variants are required to produce
// identical results for identical inputs.

namespace mtmod::simd {

struct KernelTable {
  std::string_view name;

  /// dst[i] = min(dst[i], src[i])
  void (*min_u8)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);

  /// dst[i] = floor(alpha * overlay[i] + (1 - alpha) * dst[i] + 0.5), in
  /// single precision with that exact operation order.
  void (*blend_u8)(std::uint8_t* dst, const std::uint8_t* overlay, std::size_t n, float alpha);

  /// acc[i] += add[i] - sub[i]
  void (*accumulate_u32)(std::uint32_t* acc, const std::uint32_t* add, const std::uint32_t* sub,
                         std::size_t n);

  /// sum of popcount(a[i] & b[i])
  std::uint64_t (*and_popcount_u64)(const std::uint64_t* a, const std::uint64_t* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// nullptr when the AVX2 variants were not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Best supported table, unless MTMOD_SIMD=scalar is set in the environment.
const KernelTable& active_kernels();

}  // namespace mtmod::simd
