// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <bit>
#include <cmath>

#include "mtmod/simd/kernels.hpp"

namespace mtmod::simd {
namespace {

void min_u8(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
    __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_min_epu8(d, s));
  }
  for (; i < n; ++i)
    if (src[i] < dst[i]) dst[i] = src[i];
}

void blend_u8(std::uint8_t* dst, const std::uint8_t* overlay, std::size_t n, float alpha) {
  const float beta = 1.0f - alpha;
  const __m256 va = _mm256_set1_ps(alpha);
  const __m256 vb = _mm256_set1_ps(beta);
  const __m256 half = _mm256_set1_ps(0.5f);
  const __m256 lo = _mm256_setzero_ps();
  const __m256 hi = _mm256_set1_ps(255.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m128i o8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(overlay + i));
    __m128i d8 = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(dst + i));
    __m256 o = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(o8));
    __m256 d = _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(d8));
    __m256 v = _mm256_add_ps(_mm256_mul_ps(va, o), _mm256_mul_ps(vb, d));
    v = _mm256_floor_ps(_mm256_add_ps(v, half));
    v = _mm256_min_ps(_mm256_max_ps(v, lo), hi);
    __m256i w = _mm256_cvttps_epi32(v);
    // 8 x i32 -> 8 x u8
    __m128i w16 = _mm_packus_epi32(_mm256_castsi256_si128(w), _mm256_extracti128_si256(w, 1));
    __m128i w8 = _mm_packus_epi16(w16, w16);
    _mm_storel_epi64(reinterpret_cast<__m128i*>(dst + i), w8);
  }
  for (; i < n; ++i) {
    const float a = alpha * static_cast<float>(overlay[i]);
    const float b = beta * static_cast<float>(dst[i]);
    float v = std::floor((a + b) + 0.5f);
    v = v < 0.0f ? 0.0f : (v > 255.0f ? 255.0f : v);
    dst[i] = static_cast<std::uint8_t>(v);
  }
}

void accumulate_u32(std::uint32_t* acc, const std::uint32_t* add, const std::uint32_t* sub,
                    std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
    __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(add + i));
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(sub + i));
    a = _mm256_add_epi32(a, _mm256_sub_epi32(p, m));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i), a);
  }
  for (; i < n; ++i) acc[i] += add[i] - sub[i];
}

// Nibble-table popcount, summed per 64-bit lane with SAD.
inline __m256i popcount_epi64(__m256i v) {
  const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                         0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low = _mm256_set1_epi8(0x0f);
  __m256i lo = _mm256_and_si256(v, low);
  __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
  __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(table, lo), _mm256_shuffle_epi8(table, hi));
  return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

std::uint64_t and_popcount_u64(const std::uint64_t* a, const std::uint64_t* b, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(x, y)));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return total;
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{"avx2", min_u8, blend_u8, accumulate_u32, and_popcount_u64};
  return table;
}

}  // namespace mtmod::simd
