#include <bit>
#include <cmath>

#include "mtmod/simd/kernels.hpp"

namespace mtmod::simd {
namespace {

void min_u8(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (src[i] < dst[i]) dst[i] = src[i];
}

void blend_u8(std::uint8_t* dst, const std::uint8_t* overlay, std::size_t n, float alpha) {
  const float beta = 1.0f - alpha;
  for (std::size_t i = 0; i < n; ++i) {
    const float a = alpha * static_cast<float>(overlay[i]);
    const float b = beta * static_cast<float>(dst[i]);
    float v = std::floor((a + b) + 0.5f);
    v = v < 0.0f ? 0.0f : (v > 255.0f ? 255.0f : v);
    dst[i] = static_cast<std::uint8_t>(v);
  }
}

void accumulate_u32(std::uint32_t* acc, const std::uint32_t* add, const std::uint32_t* sub,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += add[i] - sub[i];
}

std::uint64_t and_popcount_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return total;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", min_u8, blend_u8, accumulate_u32, and_popcount_u64};
  return table;
}

}  // namespace mtmod::simd
