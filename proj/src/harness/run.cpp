#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "mtmod/error.hpp"
#include "mtmod/harness.hpp"

namespace mtmod {

RateLimiter::RateLimiter(double qps) {
  if (qps < 0.0) throw ConfigError("qps must be non-negative");
  if (qps > 0.0)
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(1.0 / qps));
}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = next_ && *next_ > now ? *next_ : now;
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read artifact " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

VerdictLog run_suite(const Manifest& manifest, ModerationClient& target, const RunOptions& options) {
  if (options.concurrency < 1) throw ConfigError("concurrency must be at least 1");
  std::vector<const ManifestEntry*> cases;
  for (const ManifestEntry& e : manifest.entries)
    if (!e.skipped_reason) cases.push_back(&e);

  RateLimiter limiter(options.qps);
  const std::string name = target.name();
  std::mutex mu;
  VerdictLog log;
  log.target_versions[name] = target.version();
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr auth_error;

  auto work = [&] {
    for (std::size_t i = next++; i < cases.size() && !stop; i = next++) {
      const ManifestEntry& e = *cases[i];
      CaseFailure failure{e.case_id, name, "", 0, 0};
      std::vector<std::uint8_t> bytes;
      try {
        bytes = read_bytes(manifest.artifact(e));
      } catch (const IoError& ex) {
        failure.error = ex.what();
        std::lock_guard lock(mu);
        log.failures.push_back(failure);
        continue;
      }
      ModerationRequest req{e.case_id, bytes, e.artifact_format == "gif" ? ImageFormat::Gif : ImageFormat::Png, e.text};
      auto backoff = options.retry.backoff;
      for (int attempt = 1;; ++attempt) {
        limiter.acquire();
        failure.attempts = attempt;
        try {
          Verdict v = target.moderate(req);
          v.case_id = e.case_id;
          v.target = name;
          std::lock_guard lock(mu);
          log.verdicts.push_back(std::move(v));
          break;
        } catch (const TransportError& ex) {
          failure.error = ex.what();
          failure.status = ex.status();
          if (ex.retryable() && attempt < options.retry.max_attempts && !stop) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
            continue;
          }
        } catch (const AuthError&) {
          std::lock_guard lock(mu);
          if (!auth_error) auth_error = std::current_exception();
          stop = true;
          break;
        } catch (const Error& ex) {
          failure.error = ex.what();
          failure.status = 0;
        }
        std::lock_guard lock(mu);
        log.failures.push_back(failure);
        break;
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(options.concurrency), cases.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  if (threads > 0) work();
  for (std::thread& t : pool) t.join();
  if (auth_error) std::rethrow_exception(auth_error);

  std::sort(log.verdicts.begin(), log.verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.case_id < b.case_id; });
  std::sort(log.failures.begin(), log.failures.end(),
            [](const CaseFailure& a, const CaseFailure& b) { return a.case_id < b.case_id; });
  return log;
}

std::string VerdictLog::to_jsonl(const Manifest* manifest) const {
  auto context = [&](json& j, const std::string& case_id, const std::string& target) {
    const ManifestEntry* e = manifest != nullptr ? manifest->find(case_id) : nullptr;
    j["seed_id"] = e != nullptr ? e->seed_id : "";
    j["mr_id"] = e != nullptr ? e->mr_id : "";
    auto it = target_versions.find(target);
    j["target_version"] = it != target_versions.end() ? it->second : "unknown";
  };
  std::string out;
  for (const Verdict& v : verdicts) {
    json j = {{"case_id", v.case_id},
              {"target", v.target},
              {"label", std::string(to_string(v.label))},
              {"latency_ms", v.latency_ms},
              {"raw", v.raw}};
    context(j, v.case_id, v.target);
    out += j.dump() + "\n";
  }
  for (const CaseFailure& f : failures) {
    json j = {{"case_id", f.case_id}, {"target", f.target}, {"error", f.error}, {"status", f.status}, {"attempts", f.attempts}};
    context(j, f.case_id, f.target);
    out += j.dump() + "\n";
  }
  return out;
}

VerdictLog VerdictLog::parse(std::string_view jsonl) {
  VerdictLog log;
  std::istringstream in{std::string(jsonl)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      const std::string target = j.at("target").get<std::string>();
      if (j.contains("target_version")) log.target_versions[target] = j["target_version"].get<std::string>();
      if (j.contains("error")) {
        log.failures.push_back({j.at("case_id").get<std::string>(), target, j["error"].get<std::string>(),
                                j.value("status", 0), j.value("attempts", 0)});
        continue;
      }
      Verdict v;
      v.case_id = j.at("case_id").get<std::string>();
      v.target = target;
      v.label = parse_label(j.at("label").get<std::string>());
      v.latency_ms = j.value("latency_ms", 0.0);
      v.raw = j.value("raw", json::object());
      log.verdicts.push_back(std::move(v));
    } catch (const json::exception& ex) {
      throw SchemaError("verdict line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return log;
}

VerdictLog VerdictLog::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read verdicts " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void VerdictLog::merge(const VerdictLog& other) {
  verdicts.insert(verdicts.end(), other.verdicts.begin(), other.verdicts.end());
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  for (const auto& [k, v] : other.target_versions) target_versions[k] = v;
}

}  // namespace mtmod
