#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mtmod {

/// Neutral English words and the digits 0-9.
const std::vector<std::string>& bundled_benign_words();

/// UTF-8, one word per line; blank lines and lines starting with '#' are
/// skipped, surrounding whitespace trimmed.
std::vector<std::string> parse_word_list(std::string_view content);
std::vector<std::string> load_word_list(const std::filesystem::path& path);

}  // namespace mtmod
