#include "mtmod/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>
#include <functional>
#include <mutex>
#include <thread>

#include <gtest/gtest.h>

#include "mtmod/error.hpp"
#include "support.hpp"

namespace mtmod {
namespace {

using testing::TempDir;

std::vector<MrChain> singles(std::initializer_list<MrId> ids) {
  std::vector<MrChain> out;
  for (MrId id : ids) out.push_back({make_spec(id)});
  return out;
}

std::vector<MrChain> all_singles() {
  std::vector<MrChain> out;
  for (const MrInfo& m : all_mrs()) out.push_back({make_spec(m.id)});
  return out;
}

class FakeClient : public ModerationClient {
 public:
  explicit FakeClient(std::function<Label(const ModerationRequest&, int)> fn) : fn_(std::move(fn)) {}
  std::string name() const override { return "fake"; }
  std::string version() const override { return "1"; }
  Verdict moderate(const ModerationRequest& r) override {
    int n = ++calls;
    int now = ++in_flight;
    int prev = max_in_flight.load();
    while (now > prev && !max_in_flight.compare_exchange_weak(prev, now)) {}
    std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    --in_flight;
    Verdict v;
    v.case_id = r.case_id;
    v.target = name();
    v.label = fn_(r, n);
    return v;
  }
  std::atomic<int> calls{0}, in_flight{0}, max_in_flight{0};
  int delay_ms = 0;

 private:
  std::function<Label(const ModerationRequest&, int)> fn_;
};

TEST(Generate, ProductOfSeedsAndRelations) {
  TempDir dir;
  Manifest m = generate_suite(testing::ascii_corpus(7), all_singles(), dir.path(), Resources::defaults());
  EXPECT_EQ(m.entries.size(), 147u);
  std::set<std::string> ids;
  for (const auto& e : m.entries) {
    EXPECT_FALSE(e.skipped_reason.has_value()) << e.case_id << ": " << *e.skipped_reason;
    EXPECT_TRUE(std::filesystem::exists(m.artifact(e))) << e.artifact_path;
    ids.insert(e.case_id);
  }
  EXPECT_EQ(ids.size(), 147u);
  Manifest back = Manifest::load(dir / kManifestFile);
  EXPECT_EQ(back.entries, m.entries);
}

TEST(Generate, EmptyInputsAreConfigErrors) {
  TempDir dir;
  EXPECT_THROW(generate_suite(testing::ascii_corpus(2), {}, dir.path(), Resources::defaults()), ConfigError);
  EXPECT_THROW(generate_suite(SeedCorpus{}, singles({MrId::Mirror}), dir.path(), Resources::defaults()), ConfigError);
}

TEST(Generate, InvalidChainIsCompositionError) {
  TempDir dir;
  std::vector<MrChain> chains{{make_spec(MrId::Mirror), make_spec(MrId::FontColor)}};
  EXPECT_THROW(generate_suite(testing::ascii_corpus(2), chains, dir.path(), Resources::defaults()), CompositionError);
}

TEST(Generate, RerunIsByteIdentical) {
  TempDir a, b;
  auto chains = singles({MrId::CharRotation, MrId::WordCloud, MrId::Scribble, MrId::Watermark, MrId::ToGif,
                         MrId::BenignImage, MrId::FontSize, MrId::BenignText});
  GenerateOptions opts{7, 3};
  generate_suite(testing::ascii_corpus(4), chains, a.path(), Resources::defaults(), opts);
  opts.threads = 1;
  generate_suite(testing::ascii_corpus(4), chains, b.path(), Resources::defaults(), opts);
  EXPECT_EQ(testing::read_file(a / kManifestFile), testing::read_file(b / kManifestFile));
  for (const auto& f : std::filesystem::directory_iterator(a / kImagesDir))
    EXPECT_EQ(testing::read_file(f.path()), testing::read_file(b / kImagesDir / f.path().filename().string()))
        << f.path();
}

TEST(Generate, SeedChangesRandomRelations) {
  TempDir a, b;
  auto chains = singles({MrId::CharRotation});
  generate_suite(testing::ascii_corpus(1), chains, a.path(), Resources::defaults(), {1, 1});
  generate_suite(testing::ascii_corpus(1), chains, b.path(), Resources::defaults(), {2, 1});
  EXPECT_NE(testing::read_file(a / kManifestFile), testing::read_file(b / kManifestFile));
}

TEST(Generate, UncoveredSeedIsSkipped) {
  TempDir dir;
  SeedCorpus c = testing::ascii_corpus(1);
  c.seeds.push_back(testing::seed("cjk", "\xE5\xA5\xBD"));
  Manifest m = generate_suite(c, singles({MrId::Mirror}), dir.path(), Resources::defaults());
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_FALSE(m.entries[0].skipped_reason.has_value());
  ASSERT_TRUE(m.entries[1].skipped_reason.has_value());
}

TEST(Generate, CaseIdsAreSanitizedAndUnique) {
  TempDir dir;
  SeedCorpus c;
  c.seeds.push_back(testing::seed("a/b", "one"));
  c.seeds.push_back(testing::seed("a:b", "two"));
  Manifest m = generate_suite(c, singles({MrId::Mirror}), dir.path(), Resources::defaults());
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_NE(m.entries[0].case_id, m.entries[1].case_id);
  for (const auto& e : m.entries) {
    EXPECT_EQ(e.case_id.find('/'), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(m.artifact(e)));
  }
}

TEST(Generate, SeededChainDerivation) {
  MrChain c{make_spec(MrId::FontColor), make_spec(MrId::Mirror)};
  MrChain s1 = seeded_chain(c, case_seed(7, 0, 0)), s2 = seeded_chain(c, case_seed(7, 0, 0));
  EXPECT_EQ(s1, s2);
  EXPECT_NE(s1[0].rng_seed, s1[1].rng_seed);
  EXPECT_NE(case_seed(7, 0, 1), case_seed(7, 1, 0));
}

class RunTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest = generate_suite(testing::ascii_corpus(10), singles({MrId::Mirror, MrId::Blur}), dir.path(),
                              Resources::defaults(), {1, 0});
  }
  TempDir dir;
  Manifest manifest;
};

TEST_F(RunTest, AlwaysToxic) {
  FakeClient c([](const ModerationRequest&, int) { return Label::Toxic; });
  VerdictLog log = run_suite(manifest, c);
  ASSERT_EQ(log.verdicts.size(), 20u);
  EXPECT_TRUE(log.failures.empty());
  for (const auto& v : log.verdicts) EXPECT_EQ(v.label, Label::Toxic);
  EXPECT_TRUE(std::is_sorted(log.verdicts.begin(), log.verdicts.end(),
                             [](const Verdict& a, const Verdict& b) { return a.case_id < b.case_id; }));
  EXPECT_EQ(log.target_versions.at("fake"), "1");
}

TEST_F(RunTest, RequestCarriesArtifactAndGroundTruth) {
  FakeClient c([&](const ModerationRequest& r, int) {
    const ManifestEntry* e = manifest.find(r.case_id);
    EXPECT_NE(e, nullptr);
    if (e != nullptr) {
      EXPECT_EQ(r.ground_truth, e->text);
      EXPECT_EQ(std::string(r.artifact.begin(), r.artifact.end()), testing::read_file(manifest.artifact(*e)));
    }
    return Label::NonToxic;
  });
  EXPECT_EQ(run_suite(manifest, c).verdicts.size(), 20u);
}

TEST_F(RunTest, OfflineTargetRecordsFailures) {
  FakeClient c([](const ModerationRequest&, int) -> Label { throw TransportError("connection refused", 0, true); });
  RunOptions opts;
  opts.retry = {3, std::chrono::milliseconds(1)};
  VerdictLog log = run_suite(manifest, c, opts);
  EXPECT_TRUE(log.verdicts.empty());
  ASSERT_EQ(log.failures.size(), 20u);
  for (const auto& f : log.failures) EXPECT_EQ(f.attempts, 3);
  EXPECT_EQ(c.calls.load(), 60);
}

TEST_F(RunTest, RetriesThenSucceeds) {
  std::mutex mu;
  std::map<std::string, int> seen;
  FakeClient c([&](const ModerationRequest& r, int) {
    std::lock_guard lock(mu);
    if (++seen[r.case_id] == 1) throw TransportError("429", 429, true);
    return Label::Toxic;
  });
  RunOptions opts;
  opts.retry = {3, std::chrono::milliseconds(1)};
  VerdictLog log = run_suite(manifest, c, opts);
  EXPECT_EQ(log.verdicts.size(), 20u);
  EXPECT_TRUE(log.failures.empty());
}

TEST_F(RunTest, NonRetryableNotRetried) {
  FakeClient c([](const ModerationRequest&, int) -> Label { throw TransportError("bad request", 400, false); });
  VerdictLog log = run_suite(manifest, c);
  EXPECT_EQ(log.failures.size(), 20u);
  EXPECT_EQ(c.calls.load(), 20);
  EXPECT_EQ(log.failures[0].status, 400);
}

TEST_F(RunTest, AuthErrorStopsRun) {
  FakeClient c([](const ModerationRequest&, int) -> Label { throw AuthError("401"); });
  RunOptions opts;
  opts.concurrency = 1;
  EXPECT_THROW(run_suite(manifest, c, opts), AuthError);
  EXPECT_EQ(c.calls.load(), 1);
}

TEST_F(RunTest, ConcurrencyBound) {
  FakeClient c([](const ModerationRequest&, int) { return Label::Toxic; });
  c.delay_ms = 20;
  RunOptions opts;
  opts.concurrency = 3;
  run_suite(manifest, c, opts);
  EXPECT_LE(c.max_in_flight.load(), 3);
  EXPECT_GE(c.max_in_flight.load(), 2);
}

TEST_F(RunTest, RateLimit) {
  FakeClient c([](const ModerationRequest&, int) { return Label::Toxic; });
  RunOptions opts;
  opts.qps = 5;
  opts.concurrency = 8;
  auto t0 = std::chrono::steady_clock::now();
  VerdictLog log = run_suite(manifest, c, opts);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(log.verdicts.size(), 20u);
  // 20 requests at 5/s: the last starts no earlier than 19/5 s after the first.
  EXPECT_GE(secs, 19.0 / 5.0);
  EXPECT_LT(secs, 19.0 / 5.0 + 1.5);
}

TEST_F(RunTest, MissingArtifactIsFailure) {
  std::filesystem::remove(manifest.artifact(manifest.entries[0]));
  FakeClient c([](const ModerationRequest&, int) { return Label::Toxic; });
  VerdictLog log = run_suite(manifest, c);
  EXPECT_EQ(log.verdicts.size(), 19u);
  ASSERT_EQ(log.failures.size(), 1u);
  EXPECT_EQ(log.failures[0].case_id, manifest.entries[0].case_id);
}

TEST_F(RunTest, VerdictLogRoundTrip) {
  FakeClient c([](const ModerationRequest&, int n) { return n % 3 == 0 ? Label::NonToxic : Label::Toxic; });
  VerdictLog log = run_suite(manifest, c);
  log.failures.push_back({"x.mirror", "fake", "timeout", 0, 3});
  VerdictLog back = VerdictLog::parse(log.to_jsonl(&manifest));
  ASSERT_EQ(back.verdicts.size(), log.verdicts.size());
  for (std::size_t i = 0; i < log.verdicts.size(); ++i) {
    EXPECT_EQ(back.verdicts[i].case_id, log.verdicts[i].case_id);
    EXPECT_EQ(back.verdicts[i].label, log.verdicts[i].label);
    EXPECT_EQ(back.verdicts[i].target, "fake");
  }
  ASSERT_EQ(back.failures.size(), 1u);
  EXPECT_EQ(back.failures[0].attempts, 3);
  EXPECT_EQ(back.target_versions, log.target_versions);
}

TEST(RateLimiter, SpacesAcquisitions) {
  RateLimiter rl(50.0);
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 11; ++i) rl.acquire();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_GE(secs, 10 / 50.0 - 1e-3);
}

}  // namespace
}  // namespace mtmod
