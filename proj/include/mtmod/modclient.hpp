#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtmod/codec.hpp"
#include "mtmod/corpus.hpp"
#include "mtmod/render.hpp"

namespace httplib {
class Server;
}

namespace mtmod {

using json = nlohmann::json;

struct Verdict {
  std::string case_id;
  std::string target;
  Label label = Label::Toxic;
  json raw = json::object();
  double latency_ms = 0.0;
};

struct ModerationRequest {
  std::string case_id;
  std::span<const std::uint8_t> artifact;
  ImageFormat format = ImageFormat::Png;
  std::string ground_truth;
};

/// A moderation target. Implementations must accept concurrent calls.
class ModerationClient {
 public:
  virtual ~ModerationClient() = default;
  virtual std::string name() const = 0;
  virtual std::string version() const { return "unknown"; }
  /// Throws TransportError, ProtocolError, AuthError or DecodeError.
  virtual Verdict moderate(const ModerationRequest& request) = 0;
};

// ---------------------------------------------------------------------------
// Generic HTTP adapter

struct HttpTargetConfig {
  std::string name = "http";
  std::string version = "unknown";
  std::string endpoint;  // scheme://host[:port]/path
  int timeout_ms = 10000;

  /// Header carrying the secret; the secret itself is read from the
  /// environment variable `auth_env` at request time.
  std::string auth_header;
  std::string auth_env;
  std::string auth_prefix;

  std::string image_field = "image";
  /// Sends the case ground truth in this multipart field when non-empty.
  std::string ground_truth_field;
  std::map<std::string, std::string> extra_fields;

  /// JSON pointer to a string label mapped through `label_map` ...
  std::string label_path;
  std::map<std::string, Label> label_map;
  /// ... or to a numeric score, Toxic when >= score_threshold.
  std::string score_path;
  double score_threshold = 0.5;

  /// Parses a target file. Throws ConfigError.
  static HttpTargetConfig from_json(const json& j);
  static HttpTargetConfig load(const std::filesystem::path& path);
  /// Config for the bundled mock service at `base_url`.
  static HttpTargetConfig for_mock(const std::string& base_url);
};

/// Maps a response body to a label; throws ProtocolError.
Label map_response(const HttpTargetConfig& cfg, const std::string& body, json* parsed = nullptr);

Verdict http_moderate(const HttpTargetConfig& cfg, const ModerationRequest& request);

class HttpModerationClient : public ModerationClient {
 public:
  explicit HttpModerationClient(HttpTargetConfig cfg) : cfg_(std::move(cfg)) {}
  std::string name() const override { return cfg_.name; }
  std::string version() const override { return cfg_.version; }
  Verdict moderate(const ModerationRequest& request) override;

 private:
  HttpTargetConfig cfg_;
};

// ---------------------------------------------------------------------------
// Mock moderation service

enum class MockMode { AlwaysToxic, AlwaysBenign, SidecarLexicon };

MockMode parse_mock_mode(std::string_view s);

struct MockConfig {
  MockMode mode = MockMode::AlwaysToxic;
  std::vector<std::string> words;  // SidecarLexicon only
  std::string host = "127.0.0.1";
  int port = 0;                    // 0 picks a free port
};

/// Label the mock assigns to a request carrying `ground_truth`.
Label mock_label(const MockConfig& cfg, const std::string& ground_truth);

/// POST /moderate with multipart "image" (required) and "ground_truth"
/// (optional); replies {"label": "toxic"|"non_toxic"}. Missing image or a
/// body that is not multipart yields HTTP 400.
class MockModerationServer {
 public:
  explicit MockModerationServer(MockConfig cfg);
  ~MockModerationServer();
  MockModerationServer(const MockModerationServer&) = delete;
  MockModerationServer& operator=(const MockModerationServer&) = delete;

  /// Binds and serves on a background thread. Throws BindError.
  void start();
  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();
  int port() const { return port_; }
  std::string base_url() const;
  std::size_t requests_served() const;

 private:
  MockConfig cfg_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::shared_ptr<std::atomic<std::size_t>> served_;
};

// ---------------------------------------------------------------------------
// Reference moderator

struct ReferenceModeratorConfig {
  std::vector<std::string> lexicon;
  double theta = 0.9;
  int ink_threshold = 128;  // ink when the brightest channel is below this
  RenderSettings render;    // used to draw the templates
  /// Also match Capitalized and UPPER forms of each word.
  bool case_variants = true;
};

struct MatchResult {
  double score = 0.0;
  std::string word;
  int x = -1, y = -1;
  int frame = -1;
};

/// Template-matching stand-in for an OCR + text classifier pipeline. Each
/// lexicon word is rendered as a binary template and slid over the binarized
/// artifact at every integer offset; the score of an offset is the fraction
/// of template ink that lands on artifact ink. A frame is Toxic when some
/// word reaches theta; a GIF is Toxic when any frame is.
class ReferenceModerator : public ModerationClient {
 public:
  explicit ReferenceModerator(ReferenceModeratorConfig cfg);
  ~ReferenceModerator() override;

  std::string name() const override { return "reference"; }
  std::string version() const override;
  Verdict moderate(const ModerationRequest& request) override;

  /// Best match over all templates; stops early once theta is reached
  /// unless `exhaustive`.
  MatchResult best_match(const Canvas& frame, bool exhaustive = false) const;

  struct Template;

 private:
  ReferenceModeratorConfig cfg_;
  std::vector<Template> templates_;
};

Verdict reference_moderate(const ReferenceModeratorConfig& cfg, std::span<const std::uint8_t> artifact);

/// Brute-force score of one placement, bit by bit; test oracle for the
/// packed matcher.
double template_score_naive(const Mask& tmpl, const Mask& image, int x, int y);

}  // namespace mtmod
