#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtmod/corpus.hpp"
#include "mtmod/modclient.hpp"
#include "mtmod/mr.hpp"

namespace mtmod {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry {
  std::string case_id;
  std::string seed_id;
  std::string text;
  Language language = Language::English;
  Category category = Category::Abuse;
  std::string mr_id;  // chain id, the EFR grouping key
  MrChain chain;
  std::uint64_t rng_seed = 0;
  std::string artifact_path;  // relative to the manifest directory
  std::string artifact_format;
  json aux = json::object();
  std::optional<std::string> skipped_reason;

  json to_json() const;
  static ManifestEntry from_json(const json& j);
  bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
  std::filesystem::path dir;  // directory artifact paths are relative to
  std::vector<ManifestEntry> entries;

  /// One JSON object per line, in entry order.
  std::string to_jsonl() const;
  static Manifest parse(std::string_view jsonl, std::filesystem::path dir);
  static Manifest load(const std::filesystem::path& file);
  const ManifestEntry* find(std::string_view case_id) const;
  std::filesystem::path artifact(const ManifestEntry& e) const { return dir / e.artifact_path; }
};

inline constexpr const char* kManifestFile = "manifest.jsonl";
inline constexpr const char* kImagesDir = "images";

struct GenerateOptions {
  std::uint64_t rng_seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Renders every (seed, chain) pair, writes images/<case_id>.png|gif and
/// manifest.jsonl under `out_dir`. Per-case failures become skipped entries.
/// Throws ConfigError for an empty corpus or chain list, CompositionError
/// for an invalid chain, IoError when out_dir is unwritable.
Manifest generate_suite(const SeedCorpus& corpus, const std::vector<MrChain>& chains,
                        const std::filesystem::path& out_dir, const Resources& resources,
                        const GenerateOptions& options = {});

/// Chains with per-step seeds derived from the case seed; used by
/// generate_suite and exposed for tests.
MrChain seeded_chain(const MrChain& chain, std::uint64_t case_seed);
std::uint64_t case_seed(std::uint64_t base, std::size_t seed_index, std::size_t chain_index);

// ---------------------------------------------------------------------------
// Running against a target

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds backoff{200};  // doubled after each retry
};

struct RunOptions {
  double qps = 0.0;  // 0: unlimited
  int concurrency = 4;
  RetryPolicy retry;
};

struct CaseFailure {
  std::string case_id;
  std::string target;
  std::string error;
  int status = 0;
  int attempts = 0;
};

struct VerdictLog {
  std::vector<Verdict> verdicts;
  std::vector<CaseFailure> failures;
  std::map<std::string, std::string> target_versions;

  std::string to_jsonl(const Manifest* manifest = nullptr) const;
  static VerdictLog parse(std::string_view jsonl);
  static VerdictLog load(const std::filesystem::path& file);
  /// Appends another log (for multi-target runs).
  void merge(const VerdictLog& other);
};

/// Token bucket with a burst of one: the n-th acquire returns no earlier
/// than (n - 1) / qps seconds after the first.
class RateLimiter {
 public:
  explicit RateLimiter(double qps);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_{};
  std::optional<std::chrono::steady_clock::time_point> next_;
};

/// Submits each non-skipped case once (plus retries for retryable transport
/// errors) with bounded concurrency and rate limiting. Results are sorted by
/// case_id. An AuthError stops submission and is rethrown.
VerdictLog run_suite(const Manifest& manifest, ModerationClient& target, const RunOptions& options = {});

}  // namespace mtmod
