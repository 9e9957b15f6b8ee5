#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "mtmod/error.hpp"
#include "mtmod/harness.hpp"
#include "mtmod/rng.hpp"

namespace mtmod {

std::uint64_t case_seed(std::uint64_t base, std::size_t seed_index, std::size_t chain_index) {
  return derive_seed(base, seed_index, chain_index);
}

MrChain seeded_chain(const MrChain& chain, std::uint64_t seed) {
  MrChain out = chain;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rng_seed = derive_seed(seed, i);
  return out;
}

namespace {

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.' || c == '+';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

void write_file(const std::filesystem::path& p, std::span<const std::uint8_t> bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + p.string());
}

struct Outcome {
  std::vector<std::uint8_t> bytes;
  bool gif = false;
  json aux;
  std::string error;
};

}  // namespace

Manifest generate_suite(const SeedCorpus& corpus, const std::vector<MrChain>& chains,
                        const std::filesystem::path& out_dir, const Resources& resources,
                        const GenerateOptions& options) {
  if (corpus.seeds.empty()) throw ConfigError("seed corpus is empty");
  if (chains.empty()) throw ConfigError("no relations requested");
  std::vector<MrChain> valid;
  for (const MrChain& c : chains) valid.push_back(compose(c));

  std::error_code ec;
  std::filesystem::create_directories(out_dir / kImagesDir, ec);
  if (ec) throw IoError("cannot create " + (out_dir / kImagesDir).string() + ": " + ec.message());

  Manifest m;
  m.dir = out_dir;
  std::set<std::string> used;
  for (std::size_t si = 0; si < corpus.seeds.size(); ++si) {
    const SeedRecord& seed = corpus.seeds[si];
    for (std::size_t ci = 0; ci < valid.size(); ++ci) {
      ManifestEntry e;
      e.seed_id = seed.seed_id;
      e.text = seed.text;
      e.language = seed.language;
      e.category = seed.category;
      e.mr_id = chain_id(valid[ci]);
      e.rng_seed = case_seed(options.rng_seed, si, ci);
      e.chain = seeded_chain(valid[ci], e.rng_seed);
      const std::string base = sanitize(seed.seed_id) + "." + e.mr_id;
      e.case_id = base;
      for (int n = 2; used.contains(e.case_id); ++n) e.case_id = base + "~" + std::to_string(n);
      used.insert(e.case_id);
      m.entries.push_back(std::move(e));
    }
  }

  std::vector<Outcome> outcomes(m.entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < m.entries.size(); i = next++) {
      const ManifestEntry& e = m.entries[i];
      const SeedRecord& seed = corpus.seeds[i / valid.size()];
      Outcome& o = outcomes[i];
      try {
        const TestCase tc = apply_chain(seed, e.chain, resources);
        bool quantized = false;
        o.bytes = encode_artifact(tc, &quantized);
        o.gif = tc.is_gif();
        o.aux = tc.aux;
        if (quantized) o.aux["gif_quantized"] = true;
      } catch (const Error& ex) {
        o.error = ex.what();
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, m.entries.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    ManifestEntry& e = m.entries[i];
    Outcome& o = outcomes[i];
    if (!o.error.empty()) {
      e.skipped_reason = o.error;
      continue;
    }
    e.artifact_format = o.gif ? "gif" : "png";
    e.artifact_path = std::string(kImagesDir) + "/" + e.case_id + "." + e.artifact_format;
    e.aux = std::move(o.aux);
    write_file(out_dir / e.artifact_path, o.bytes);
  }
  const std::string jsonl = m.to_jsonl();
  write_file(out_dir / kManifestFile, std::span(reinterpret_cast<const std::uint8_t*>(jsonl.data()), jsonl.size()));
  return m;
}

}  // namespace mtmod
