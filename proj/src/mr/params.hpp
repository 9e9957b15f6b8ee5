#pragma once

// Typed access to a relation's JSON parameter object with range checks.

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtmod/canvas.hpp"

namespace mtmod::mr::detail {

using json = nlohmann::json;

class ParamReader {
 public:
  ParamReader(std::string_view mr, const json& j);

  double number(const char* key, double fallback, double lo, double hi);
  int integer(const char* key, int fallback, int lo, int hi);
  bool boolean(const char* key, bool fallback);
  Rgb color(const char* key, Rgb fallback);
  std::string choice(const char* key, const std::string& fallback, const std::vector<std::string>& options);
  std::vector<int> int_list(const char* key, const std::vector<int>& fallback, int lo, int hi);

  /// Throws ParamError naming any key that was never read.
  void finish() const;
  [[noreturn]] void fail(const std::string& key, const std::string& why) const;

 private:
  const json* get(const char* key);

  std::string mr_;
  const json& j_;
  std::set<std::string> seen_;
};

json color_json(Rgb c);

}  // namespace mtmod::mr::detail
