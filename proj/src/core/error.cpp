#include "mtmod/error.hpp"

#include <cstdio>

namespace mtmod {

namespace {
std::string coverage_message(char32_t cp) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "font has no glyph for U+%04X", static_cast<unsigned>(cp));
  return buf;
}
}  // namespace

GlyphCoverageError::GlyphCoverageError(char32_t codepoint)
    : Error(coverage_message(codepoint)), codepoint_(codepoint) {}

}  // namespace mtmod
