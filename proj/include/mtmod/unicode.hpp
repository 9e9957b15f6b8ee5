#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mtmod::unicode {

std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t cp);

/// NFC, trim, and collapse internal whitespace runs to one U+0020.
std::string normalize_seed_text(std::string_view utf8);

bool is_space(char32_t cp);

/// Lowercases ASCII letters; other codepoints pass through.
std::string ascii_lower(std::string_view s);

}  // namespace mtmod::unicode
