#include "mtmod/rng.hpp"

namespace mtmod {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  Rng r(base ^ (a * 0xD1B54A32D192ED03ull));
  r.next_u64();
  Rng s(r.next_u64() ^ (b * 0x8CB92BA72F3D8DD7ull));
  return s.next_u64();
}

}  // namespace mtmod
