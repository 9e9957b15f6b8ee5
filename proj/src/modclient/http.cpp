#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>

#include "mtmod/error.hpp"
#include "mtmod/modclient.hpp"

namespace mtmod {

namespace {

const std::set<std::string> kTopKeys{"name", "version", "endpoint", "timeout_ms", "auth", "request", "response"};

std::string str_or(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  if (!j[key].is_string()) throw ConfigError(std::string("target config: '") + key + "' must be a string");
  return j[key].get<std::string>();
}

// "a.b" and "/a/b" both address nested keys.
json::json_pointer to_pointer(const std::string& path) {
  if (path.empty() || path.front() == '/') return json::json_pointer(path);
  std::string p;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t dot = path.find('.', pos);
    if (dot == std::string::npos) dot = path.size();
    p += "/" + path.substr(pos, dot - pos);
    pos = dot + 1;
  }
  return json::json_pointer(p);
}

std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw ConfigError("endpoint needs a scheme: " + endpoint);
  const auto slash = endpoint.find('/', scheme + 3);
  if (slash == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, slash), endpoint.substr(slash)};
}

}  // namespace

HttpTargetConfig HttpTargetConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("target config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!kTopKeys.contains(it.key())) throw ConfigError("target config: unknown key '" + it.key() + "'");
  HttpTargetConfig c;
  try {
    c.name = str_or(j, "name", c.name);
    c.version = str_or(j, "version", c.version);
    c.endpoint = str_or(j, "endpoint", "");
    if (c.endpoint.rfind("http://", 0) != 0 && c.endpoint.rfind("https://", 0) != 0)
      throw ConfigError("target config: endpoint must be an http:// or https:// URL");
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    if (c.timeout_ms <= 0) throw ConfigError("target config: timeout_ms must be positive");
    const json auth = j.value("auth", json::object());
    c.auth_header = str_or(auth, "header", "");
    c.auth_env = str_or(auth, "env", "");
    c.auth_prefix = str_or(auth, "prefix", "");
    if (!c.auth_header.empty() && c.auth_env.empty())
      throw ConfigError("target config: auth.header requires auth.env naming the variable holding the secret");
    const json req = j.value("request", json::object());
    c.image_field = str_or(req, "image_field", c.image_field);
    c.ground_truth_field = str_or(req, "ground_truth_field", "");
    c.extra_fields = req.value("extra_fields", std::map<std::string, std::string>{});
    const json resp = j.value("response", json::object());
    c.label_path = str_or(resp, "label_path", "");
    c.score_path = str_or(resp, "score_path", "");
    c.score_threshold = resp.value("threshold", c.score_threshold);
    for (const auto& [k, v] : resp.value("label_map", std::map<std::string, std::string>{}))
      c.label_map[k] = parse_label(v);
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("target config: ") + ex.what());
  } catch (const SchemaError& ex) {
    throw ConfigError(std::string("target config: ") + ex.what());
  }
  if (c.label_path.empty() == c.score_path.empty())
    throw ConfigError("target config: set exactly one of response.label_path and response.score_path");
  if (!c.label_path.empty() && c.label_map.empty())
    throw ConfigError("target config: response.label_map is required with label_path");
  return c;
}

HttpTargetConfig HttpTargetConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read target config " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& ex) {
    throw ConfigError("target config " + path.string() + ": " + ex.what());
  }
}

HttpTargetConfig HttpTargetConfig::for_mock(const std::string& base_url) {
  HttpTargetConfig c;
  c.name = "mock";
  c.version = "mock-1";
  c.endpoint = base_url + "/moderate";
  c.ground_truth_field = "ground_truth";
  c.label_path = "/label";
  c.label_map = {{"toxic", Label::Toxic}, {"non_toxic", Label::NonToxic}};
  return c;
}

Label map_response(const HttpTargetConfig& cfg, const std::string& body, json* parsed) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error&) {
    throw ProtocolError("response is not JSON");
  }
  if (parsed != nullptr) *parsed = j;
  const std::string& path = cfg.label_path.empty() ? cfg.score_path : cfg.label_path;
  const json::json_pointer ptr = to_pointer(path);
  if (!j.contains(ptr)) throw ProtocolError("response has no value at '" + path + "'");
  const json& v = j.at(ptr);
  if (!cfg.label_path.empty()) {
    const std::string key = v.is_string() ? v.get<std::string>() : v.dump();
    auto it = cfg.label_map.find(key);
    if (it == cfg.label_map.end()) throw ProtocolError("unmapped label value '" + key + "'");
    return it->second;
  }
  if (!v.is_number()) throw ProtocolError("score at '" + path + "' is not a number");
  return v.get<double>() >= cfg.score_threshold ? Label::Toxic : Label::NonToxic;
}

Verdict http_moderate(const HttpTargetConfig& cfg, const ModerationRequest& request) {
  if (request.artifact.empty()) throw ProtocolError("empty artifact");
  const auto [base, path] = split_endpoint(cfg.endpoint);
  httplib::Client cli(base);
  const auto timeout = std::chrono::milliseconds(cfg.timeout_ms);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!cfg.auth_header.empty()) {
    const char* secret = std::getenv(cfg.auth_env.c_str());
    if (secret == nullptr || *secret == '\0')
      throw AuthError("credential variable " + cfg.auth_env + " is not set");
    headers.emplace(cfg.auth_header, cfg.auth_prefix + secret);
  }
  const bool gif = request.format == ImageFormat::Gif;
  httplib::MultipartFormDataItems items;
  items.push_back({cfg.image_field, std::string(request.artifact.begin(), request.artifact.end()),
                   gif ? "artifact.gif" : "artifact.png", gif ? "image/gif" : "image/png"});
  if (!cfg.ground_truth_field.empty()) items.push_back({cfg.ground_truth_field, request.ground_truth, "", ""});
  for (const auto& [k, v] : cfg.extra_fields) items.push_back({k, v, "", ""});

  const auto t0 = std::chrono::steady_clock::now();
  const httplib::Result res = cli.Post(path, headers, items);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (!res) throw TransportError("request to " + cfg.name + " failed: " + httplib::to_string(res.error()), 0, true);
  if (res->status == 401 || res->status == 403)
    throw AuthError(cfg.name + " rejected the credentials (HTTP " + std::to_string(res->status) + ")");
  if (res->status < 200 || res->status >= 300) {
    const bool retry = res->status == 429 || res->status >= 500;
    throw TransportError(cfg.name + " returned HTTP " + std::to_string(res->status), res->status, retry);
  }
  Verdict v;
  v.case_id = request.case_id;
  v.target = cfg.name;
  v.label = map_response(cfg, res->body, &v.raw);
  v.latency_ms = ms;
  return v;
}

Verdict HttpModerationClient::moderate(const ModerationRequest& request) { return http_moderate(cfg_, request); }

}  // namespace mtmod
