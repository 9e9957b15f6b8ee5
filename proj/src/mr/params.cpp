#include "params.hpp"

#include <cmath>

#include "mtmod/error.hpp"

namespace mtmod::mr::detail {

ParamReader::ParamReader(std::string_view mr, const json& j) : mr_(mr), j_(j) {
  if (!j_.is_object()) throw ParamError(mr_ + ": parameters must be a JSON object");
}

const json* ParamReader::get(const char* key) {
  seen_.insert(key);
  auto it = j_.find(key);
  if (it == j_.end() || it->is_null()) return nullptr;
  return &*it;
}

void ParamReader::fail(const std::string& key, const std::string& why) const {
  throw ParamError(mr_ + "." + key + ": " + why);
}

double ParamReader::number(const char* key, double fallback, double lo, double hi) {
  const json* v = get(key);
  if (v == nullptr) return fallback;
  if (!v->is_number()) fail(key, "expected a number");
  const double d = v->get<double>();
  if (!std::isfinite(d) || d < lo || d > hi)
    fail(key, "must be within [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return d;
}

int ParamReader::integer(const char* key, int fallback, int lo, int hi) {
  const json* v = get(key);
  if (v == nullptr) return fallback;
  if (!v->is_number_integer() && !(v->is_number_float() && std::trunc(v->get<double>()) == v->get<double>()))
    fail(key, "expected an integer");
  const double d = v->get<double>();
  if (d < lo || d > hi) fail(key, "must be within [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(d);
}

bool ParamReader::boolean(const char* key, bool fallback) {
  const json* v = get(key);
  if (v == nullptr) return fallback;
  if (!v->is_boolean()) fail(key, "expected true or false");
  return v->get<bool>();
}

Rgb ParamReader::color(const char* key, Rgb fallback) {
  const json* v = get(key);
  if (v == nullptr) return fallback;
  if (!v->is_array() || v->size() != 3) fail(key, "expected [r, g, b]");
  int c[3];
  for (int i = 0; i < 3; ++i) {
    const json& e = (*v)[static_cast<std::size_t>(i)];
    if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() > 255) fail(key, "channels must be integers 0-255");
    c[i] = e.get<int>();
  }
  return {static_cast<std::uint8_t>(c[0]), static_cast<std::uint8_t>(c[1]), static_cast<std::uint8_t>(c[2])};
}

std::string ParamReader::choice(const char* key, const std::string& fallback,
                                const std::vector<std::string>& options) {
  const json* v = get(key);
  if (v == nullptr) return fallback;
  if (!v->is_string()) fail(key, "expected a string");
  const std::string s = v->get<std::string>();
  for (const auto& o : options)
    if (o == s) return s;
  fail(key, "unknown value '" + s + "'");
}

std::vector<int> ParamReader::int_list(const char* key, const std::vector<int>& fallback, int lo, int hi) {
  const json* v = get(key);
  if (v == nullptr) return fallback;
  if (!v->is_array()) fail(key, "expected a list of integers");
  std::vector<int> out;
  for (const json& e : *v) {
    if (!e.is_number_integer()) fail(key, "expected a list of integers");
    const int i = e.get<int>();
    if (i < lo || i > hi) fail(key, "entries must be within [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out.push_back(i);
  }
  return out;
}

void ParamReader::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (!seen_.contains(it.key())) throw ParamError(mr_ + ": unknown parameter '" + it.key() + "'");
}

json color_json(Rgb c) { return json::array({c.r, c.g, c.b}); }

}  // namespace mtmod::mr::detail
