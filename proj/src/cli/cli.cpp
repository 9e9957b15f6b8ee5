#include "mtmod/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mtmod/codec.hpp"
#include "mtmod/error.hpp"
#include "mtmod/harness.hpp"
#include "mtmod/lexicon.hpp"
#include "mtmod/report.hpp"

namespace mtmod {

namespace {

// Configuration mistakes that surface after flag parsing still count as
// usage errors.
struct UsageError : Error {
  using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) {
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

void write_text(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << content)) throw IoError("cannot write " + path);
}

struct SeedsFilterArgs {
  std::string corpus, format, verdicts, manifest, out;
};

int seeds_filter(const SeedsFilterArgs& a, std::ostream& out, std::ostream& err) {
  const SeedCorpus corpus =
      load_seeds(a.corpus, a.format.empty() ? corpus_format_for(a.corpus) : parse_corpus_format(a.format));
  std::optional<Manifest> manifest;
  if (!a.manifest.empty()) manifest = Manifest::load(a.manifest);
  std::ifstream in(a.verdicts);
  if (!in) throw IoError("cannot read verdicts " + a.verdicts);
  // A seed passes only if every baseline verdict for it is Toxic.
  std::map<std::string, Label> verdicts;
  for (std::string line; std::getline(in, line);) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      throw SchemaError(std::string("baseline verdicts: ") + ex.what());
    }
    if (j.contains("error")) continue;
    if (j.contains("mr_id") && !j["mr_id"].get<std::string>().empty() && j["mr_id"] != "baseline") continue;
    std::string seed = j.value("seed_id", "");
    if (seed.empty() && manifest) {
      if (const ManifestEntry* e = manifest->find(j.value("case_id", ""))) seed = e->seed_id;
    }
    if (seed.empty()) throw SchemaError("baseline verdict without seed_id; pass --manifest");
    const Label l = parse_label(j.at("label").get<std::string>());
    auto [it, fresh] = verdicts.emplace(seed, l);
    if (!fresh && l == Label::NonToxic) it->second = Label::NonToxic;
  }
  const SeedCorpus kept = filter_baseline(corpus, verdicts);
  write_text(a.out, write_seeds_jsonl(kept), out);
  err << "kept " << kept.seeds.size() << " of " << corpus.seeds.size() << " seeds\n";
  return 0;
}

struct GenerateArgs {
  std::string corpus, format, mrs, out, lexicon, benign_lexicon, benign_images, font, alt_font;
  std::vector<std::string> combos, params;
  std::uint64_t rng_seed = 0;
  unsigned threads = 0;
  int size = kDefaultTextSize;
};

std::map<MrId, json> parse_param_flags(const std::vector<std::string>& flags) {
  std::map<MrId, json> out;
  for (const std::string& f : flags) {
    const auto eq = f.find('='), dot = f.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
      throw UsageError("--param expects relation.key=value, got '" + f + "'");
    const MrId id = parse_mr(f.substr(0, dot));
    const std::string key = f.substr(dot + 1, eq - dot - 1), raw = f.substr(eq + 1);
    json v;
    try {
      v = json::parse(raw);
    } catch (const json::parse_error&) {
      v = raw;
    }
    out[id][key] = v;
  }
  return out;
}

int generate(const GenerateArgs& a, std::ostream& out) {
  const auto overrides = parse_param_flags(a.params);
  auto spec_for = [&](MrId id) {
    auto it = overrides.find(id);
    return make_spec(id, it != overrides.end() ? it->second : json::object());
  };
  std::vector<MrChain> chains;
  for (const std::string& name : split(a.mrs, ',')) {
    if (name == "all") {
      for (const MrInfo& info : all_mrs()) chains.push_back({spec_for(info.id)});
    } else {
      chains.push_back({spec_for(parse_mr(name))});
    }
  }
  for (const std::string& combo : a.combos) {
    MrChain chain;
    for (const std::string& name : split(combo, '+')) chain.push_back(spec_for(parse_mr(name)));
    chains.push_back(compose(chain));
  }
  if (chains.empty()) throw UsageError("nothing to generate: pass --mrs and/or --combo");

  Resources res = Resources::defaults();
  res.render.size = a.size;
  if (!a.font.empty())
    res.render.font = FontProvider(std::make_shared<const BitmapFont>(BitmapFont::load_hex_file(a.font)));
  if (!a.alt_font.empty())
    res.alternate_font = FontProvider(std::make_shared<const BitmapFont>(BitmapFont::load_hex_file(a.alt_font)));
  if (!a.lexicon.empty()) res.toxic_lexicon = load_word_list(a.lexicon);
  if (!a.benign_lexicon.empty()) res.benign_words = load_word_list(a.benign_lexicon);
  if (!a.benign_images.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(a.benign_images))
      if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f, std::ios::binary);
      const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
      res.benign_images.push_back(decode_png(bytes));
    }
  }
  const SeedCorpus corpus =
      load_seeds(a.corpus, a.format.empty() ? corpus_format_for(a.corpus) : parse_corpus_format(a.format));
  const Manifest m = generate_suite(corpus, chains, a.out, res, {a.rng_seed, a.threads});
  const auto skipped = std::count_if(m.entries.begin(), m.entries.end(), [](const ManifestEntry& e) { return e.skipped_reason.has_value(); });
  out << "generated " << m.entries.size() - static_cast<std::size_t>(skipped) << " cases (" << skipped
      << " skipped) in " << (std::filesystem::path(a.out) / kManifestFile).string() << "\n";
  return 0;
}

struct RunArgs {
  std::string manifest, target, mock_url, out, lexicon;
  double qps = 0.0, theta = 0.9;
  int concurrency = 4, attempts = 3;
};

int run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const Manifest manifest = Manifest::load(a.manifest);
  std::unique_ptr<ModerationClient> client;
  if (a.target == "mock") {
    if (a.mock_url.empty()) throw UsageError("--target mock needs --mock-url");
    client = std::make_unique<HttpModerationClient>(HttpTargetConfig::for_mock(a.mock_url));
  } else if (a.target == "reference") {
    if (a.lexicon.empty()) throw UsageError("--target reference needs --lexicon");
    ReferenceModeratorConfig cfg;
    cfg.lexicon = load_word_list(a.lexicon);
    cfg.theta = a.theta;
    client = std::make_unique<ReferenceModerator>(cfg);
  } else if (a.target.rfind("http:", 0) == 0 && a.target.size() > 5) {
    client = std::make_unique<HttpModerationClient>(HttpTargetConfig::load(a.target.substr(5)));
  } else {
    throw UsageError("unknown target '" + a.target + "' (mock, reference or http:CONFIG)");
  }
  RunOptions opts;
  opts.qps = a.qps;
  opts.concurrency = a.concurrency;
  opts.retry.max_attempts = a.attempts;
  const VerdictLog log = run_suite(manifest, *client, opts);
  const std::string path = a.out.empty() ? (manifest.dir / "verdicts.jsonl").string() : a.out;
  write_text(path, log.to_jsonl(&manifest), out);
  out << log.verdicts.size() << " verdicts, " << log.failures.size() << " failures written to " << path << "\n";
  if (!log.failures.empty()) {
    err << "warning: " << log.failures.size() << " cases failed; first: " << log.failures.front().case_id << ": "
        << log.failures.front().error << "\n";
    return 1;
  }
  return 0;
}

int report(const std::string& verdicts, const std::string& manifest, const std::string& format,
           const std::string& path, std::ostream& out, std::ostream& err) {
  const EfrReport r = compute_efr(VerdictLog::load(verdicts), Manifest::load(manifest));
  for (const std::string& w : r.warnings) err << "warning: " << w << "\n";
  write_text(path, write_report(r, parse_report_format(format)), out);
  return 0;
}

int mock_serve(const std::string& mode, const std::string& host, int port, const std::string& lexicon,
               std::ostream& out) {
  MockConfig cfg;
  cfg.mode = parse_mock_mode(mode);
  cfg.host = host;
  cfg.port = port;
  if (cfg.mode == MockMode::SidecarLexicon) {
    if (lexicon.empty()) throw UsageError("--mode sidecar needs --lexicon");
    cfg.words = load_word_list(lexicon);
  }
  MockModerationServer server(cfg);
  server.start();
  out << "listening on " << server.base_url() << std::endl;
  server.wait();
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metamorphic testing of image-based content moderation"};
  app.name("mtmod");
  app.require_subcommand(1);

  auto* seeds = app.add_subcommand("seeds", "Seed corpus utilities");
  seeds->require_subcommand(1);
  SeedsFilterArgs sf;
  auto* filter = seeds->add_subcommand("filter", "Keep seeds the target flags as toxic when unperturbed");
  filter->add_option("--corpus", sf.corpus, "Seed corpus (csv, tsv or jsonl)")->required();
  filter->add_option("--format", sf.format, "Corpus format, default from extension");
  filter->add_option("--baseline-verdicts", sf.verdicts, "Verdicts of a baseline run")->required();
  filter->add_option("--manifest", sf.manifest, "Manifest of the baseline run, if verdicts lack seed ids");
  filter->add_option("--out", sf.out, "Filtered corpus (jsonl), default stdout");

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Render test cases");
  gen->add_option("--corpus", ga.corpus, "Seed corpus (csv, tsv or jsonl)")->required();
  gen->add_option("--format", ga.format, "Corpus format, default from extension");
  gen->add_option("--mrs", ga.mrs, "Comma-separated relations, or 'all'");
  gen->add_option("--combo", ga.combos, "Relation chain such as font-color+mirror (repeatable)");
  gen->add_option("--out", ga.out, "Output directory")->required();
  gen->add_option("--rng-seed", ga.rng_seed, "Base random seed");
  gen->add_option("--param", ga.params, "Parameter override relation.key=value (repeatable)");
  gen->add_option("--lexicon", ga.lexicon, "Toxic word list used by font-size and font-color");
  gen->add_option("--benign-lexicon", ga.benign_lexicon, "Benign word list");
  gen->add_option("--benign-images", ga.benign_images, "Directory of PNG files for benign-image");
  gen->add_option("--font", ga.font, "Unifont .hex font for the text");
  gen->add_option("--alt-font", ga.alt_font, "Unifont .hex font for font-change");
  gen->add_option("--size", ga.size, "Text size in pixels")->check(CLI::Range(1, 512));
  gen->add_option("--threads", ga.threads, "Worker threads, 0 for all cores");

  RunArgs ra;
  auto* runc = app.add_subcommand("run", "Submit test cases to a moderation target");
  runc->add_option("--manifest", ra.manifest, "Manifest from generate")->required();
  runc->add_option("--target", ra.target, "mock, reference or http:CONFIG")->required();
  runc->add_option("--mock-url", ra.mock_url, "Base URL of a mock-serve instance");
  runc->add_option("--qps", ra.qps, "Request rate limit, 0 for none")->check(CLI::NonNegativeNumber);
  runc->add_option("--concurrency", ra.concurrency, "Requests in flight")->check(CLI::Range(1, 256));
  runc->add_option("--attempts", ra.attempts, "Attempts per case for retryable errors")->check(CLI::Range(1, 20));
  runc->add_option("--out", ra.out, "Verdicts file, default verdicts.jsonl next to the manifest");
  runc->add_option("--lexicon", ra.lexicon, "Word list for the reference target");
  runc->add_option("--theta", ra.theta, "Reference match threshold")->check(CLI::Range(0.0, 1.0));

  std::string rv, rm, rf = "markdown", ro;
  auto* rep = app.add_subcommand("report", "Error finding rates per relation and target");
  rep->add_option("--verdicts", rv, "Verdicts file")->required();
  rep->add_option("--manifest", rm, "Manifest file")->required();
  rep->add_option("--format", rf, "json or markdown")->check(CLI::IsMember({"json", "markdown", "md"}));
  rep->add_option("--out", ro, "Output file, default stdout");

  std::string ev, em, eo;
  auto* exp = app.add_subcommand("export-retrain", "Export misclassified cases as (image, text) pairs");
  exp->add_option("--verdicts", ev, "Verdicts file")->required();
  exp->add_option("--manifest", em, "Manifest file")->required();
  exp->add_option("--out", eo, "Output directory")->required();

  std::string mode, host = "127.0.0.1", mlex;
  int port = 8080;
  auto* mock = app.add_subcommand("mock-serve", "Run the mock moderation service");
  mock->add_option("--mode", mode, "always-toxic, always-benign or sidecar")->required();
  mock->add_option("--port", port, "TCP port, 0 for any")->check(CLI::Range(0, 65535));
  mock->add_option("--host", host, "Bind address");
  mock->add_option("--lexicon", mlex, "Word list for sidecar mode");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (filter->parsed()) return seeds_filter(sf, out, err);
    if (gen->parsed()) return generate(ga, out);
    if (runc->parsed()) return run(ra, out, err);
    if (rep->parsed()) return report(rv, rm, rf, ro, out, err);
    if (exp->parsed()) {
      const std::size_t n = export_retraining_set(Manifest::load(em), VerdictLog::load(ev), eo);
      out << "exported " << n << " cases to " << eo << "\n";
      return 0;
    }
    if (mock->parsed()) return mock_serve(mode, host, port, mlex, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParamError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CompositionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mtmod
