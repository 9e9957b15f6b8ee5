#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "mtmod/canvas.hpp"
#include "mtmod/corpus.hpp"

namespace mtmod::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("mtmod_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline SeedRecord seed(std::string id, std::string text) {
  SeedRecord s;
  s.seed_id = std::move(id);
  s.text = std::move(text);
  return s;
}

/// Ten short ASCII seeds covering one to four words.
inline SeedCorpus ascii_corpus(std::size_t n = 10) {
  static const char* texts[] = {"kill all idiots", "you are trash", "loser",  "shut up moron",
                                "freak show",      "go away creep", "dumb",   "you stupid fool",
                                "hate you",        "nasty jerk",    "get lost", "idiot boss"};
  SeedCorpus c;
  for (std::size_t i = 0; i < n; ++i)
    c.seeds.push_back(seed("s" + std::to_string(i), texts[i % std::size(texts)]));
  return c;
}

inline std::size_t ink_count(const Canvas& c) { return ink_mask(c).count(); }

}  // namespace mtmod::testing
