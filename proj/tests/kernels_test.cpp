#include "mtmod/simd/kernels.hpp"

#include <cstdlib>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace mtmod::simd {
namespace {

// Lengths straddling every vector width and tail size.
const std::size_t kLengths[] = {0, 1, 7, 15, 16, 31, 32, 33, 63, 64, 65, 100, 257, 1000};

template <typename T>
std::vector<T> random_vec(std::mt19937_64& gen, std::size_t n, T hi) {
  std::uniform_int_distribution<std::uint64_t> d(0, hi);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(d(gen));
  return v;
}

TEST(Kernels, ScalarMinMatchesDefinition) {
  std::mt19937_64 gen(1);
  for (auto n : kLengths) {
    auto a = random_vec<std::uint8_t>(gen, n, 255), b = random_vec<std::uint8_t>(gen, n, 255);
    auto out = a;
    scalar_kernels().min_u8(out.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(out[i], std::min(a[i], b[i]));
  }
}

TEST(Kernels, ScalarBlendEndpoints) {
  std::mt19937_64 gen(2);
  auto a = random_vec<std::uint8_t>(gen, 100, 255), b = random_vec<std::uint8_t>(gen, 100, 255);
  auto zero = a, one = a;
  scalar_kernels().blend_u8(zero.data(), b.data(), 100, 0.0f);
  scalar_kernels().blend_u8(one.data(), b.data(), 100, 1.0f);
  EXPECT_EQ(zero, a);
  EXPECT_EQ(one, b);
}

TEST(Kernels, ScalarAndPopcount) {
  std::vector<std::uint64_t> a{~0ull, 0xF0F0ull, 1ull}, b{0xFFull, 0xFF00ull, 1ull};
  EXPECT_EQ(scalar_kernels().and_popcount_u64(a.data(), b.data(), 3), 8u + 4u + 1u);
}

TEST(Kernels, Avx2MinEqualsScalar) {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) GTEST_SKIP() << "AVX2 unavailable";
  std::mt19937_64 gen(3);
  for (auto n : kLengths) {
    auto a = random_vec<std::uint8_t>(gen, n, 255), b = random_vec<std::uint8_t>(gen, n, 255);
    auto s = a, x = a;
    scalar_kernels().min_u8(s.data(), b.data(), n);
    v->min_u8(x.data(), b.data(), n);
    EXPECT_EQ(s, x) << "n=" << n;
  }
}

TEST(Kernels, Avx2BlendEqualsScalar) {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) GTEST_SKIP() << "AVX2 unavailable";
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<float> ad(0.0f, 1.0f);
  for (auto n : kLengths) {
    for (int rep = 0; rep < 20; ++rep) {
      float alpha = rep == 0 ? 0.5f : ad(gen);
      auto a = random_vec<std::uint8_t>(gen, n, 255), b = random_vec<std::uint8_t>(gen, n, 255);
      auto s = a, x = a;
      scalar_kernels().blend_u8(s.data(), b.data(), n, alpha);
      v->blend_u8(x.data(), b.data(), n, alpha);
      EXPECT_EQ(s, x) << "n=" << n << " alpha=" << alpha;
    }
  }
}

TEST(Kernels, Avx2AccumulateEqualsScalar) {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) GTEST_SKIP() << "AVX2 unavailable";
  std::mt19937_64 gen(5);
  for (auto n : kLengths) {
    auto acc = random_vec<std::uint32_t>(gen, n, 1u << 30);
    auto add = random_vec<std::uint32_t>(gen, n, 1u << 20), sub = random_vec<std::uint32_t>(gen, n, 1u << 20);
    auto s = acc, x = acc;
    scalar_kernels().accumulate_u32(s.data(), add.data(), sub.data(), n);
    v->accumulate_u32(x.data(), add.data(), sub.data(), n);
    EXPECT_EQ(s, x) << "n=" << n;
  }
}

TEST(Kernels, Avx2AndPopcountEqualsScalar) {
  const KernelTable* v = avx2_kernels();
  if (v == nullptr) GTEST_SKIP() << "AVX2 unavailable";
  std::mt19937_64 gen(6);
  for (auto n : kLengths) {
    auto a = random_vec<std::uint64_t>(gen, n, ~0ull), b = random_vec<std::uint64_t>(gen, n, ~0ull);
    EXPECT_EQ(scalar_kernels().and_popcount_u64(a.data(), b.data(), n),
              v->and_popcount_u64(a.data(), b.data(), n))
        << "n=" << n;
  }
}

TEST(Kernels, EnvironmentForcesScalar) {
  // active_kernels() caches its choice, so only the name is checked here.
  const char* forced = std::getenv("MTMOD_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar")
    EXPECT_EQ(active_kernels().name, scalar_kernels().name);
  else if (avx2_kernels() != nullptr)
    EXPECT_EQ(active_kernels().name, avx2_kernels()->name);
  else
    EXPECT_EQ(active_kernels().name, scalar_kernels().name);
}

}  // namespace
}  // namespace mtmod::simd
