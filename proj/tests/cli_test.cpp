#include "mtmod/cli.hpp"

#include <algorithm>
#include <sstream>

#include <gtest/gtest.h>

#include "mtmod/harness.hpp"
#include "mtmod/report.hpp"
#include "support.hpp"

namespace mtmod {
namespace {

using testing::TempDir;

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::write_file(dir / "seeds.jsonl", write_seeds_jsonl(testing::ascii_corpus(4)));
    testing::write_file(dir / "lexicon.txt", "# toxic words\nkill\ntrash\nloser\nmoron\n");
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  TempDir dir;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"generate", "--corpus", path("seeds.jsonl")}).code, 2);  // --out missing
}

TEST_F(CliTest, UnknownRelationIsUsageError) {
  Result r = cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "wobble", "--out", path("out")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("wobble"), std::string::npos);
}

TEST_F(CliTest, InvalidComboIsUsageError) {
  EXPECT_EQ(cli({"generate", "--corpus", path("seeds.jsonl"), "--combo", "mirror+font-color", "--out", path("o")}).code, 2);
  EXPECT_EQ(cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "blur", "--param", "blur.k=4", "--out",
                 path("o")}).code,
            2);
}

TEST_F(CliTest, GenerateProduct) {
  Result r = cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "mirror,crop", "--out", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(testing::read_file(dir / "out" / kManifestFile)), 8u);
}

TEST_F(CliTest, GenerateWithParamsAndCombo) {
  Result r = cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "rotation", "--combo", "font-color+mirror",
                  "--param", "rotation.degrees=90", "--out", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  Manifest m = Manifest::load(dir / "out" / kManifestFile);
  ASSERT_EQ(m.entries.size(), 8u);
  EXPECT_EQ(m.entries[0].chain[0].params["degrees"], 90.0);
  EXPECT_EQ(m.entries[1].mr_id, "font-color+mirror");
}

TEST_F(CliTest, RunReportExport) {
  ASSERT_EQ(cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "baseline,mirror,blur", "--out", path("out"),
                 "--rng-seed", "3"})
                .code,
            0);
  std::string manifest = path("out/manifest.jsonl");
  Result run = cli({"run", "--manifest", manifest, "--target", "reference", "--lexicon", path("lexicon.txt")});
  ASSERT_EQ(run.code, 0) << run.err;
  std::string verdicts = path("out/verdicts.jsonl");
  EXPECT_EQ(VerdictLog::load(verdicts).verdicts.size(), 12u);

  Result md = cli({"report", "--verdicts", verdicts, "--manifest", manifest, "--format", "markdown"});
  ASSERT_EQ(md.code, 0) << md.err;
  EXPECT_NE(md.out.find("| Baseline |"), std::string::npos);
  EXPECT_NE(md.out.find("| Picture |"), std::string::npos);
  EXPECT_NE(md.out.find("reference EFR (%)"), std::string::npos);

  Result js = cli({"report", "--verdicts", verdicts, "--manifest", manifest, "--format", "json", "--out",
                   path("report.json")});
  ASSERT_EQ(js.code, 0);
  json report = json::parse(testing::read_file(dir / "report.json"));
  EXPECT_EQ(report["rows"].size(), 3u);

  Result ex = cli({"export-retrain", "--verdicts", verdicts, "--manifest", manifest, "--out", path("retrain")});
  ASSERT_EQ(ex.code, 0) << ex.err;
  std::size_t missed = 0;
  for (const auto& v : VerdictLog::load(verdicts).verdicts) missed += v.label == Label::NonToxic;
  EXPECT_EQ(line_count(testing::read_file(dir / "retrain" / "index.jsonl")), missed);
}

TEST_F(CliTest, SeedsFilter) {
  ASSERT_EQ(cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "baseline", "--out", path("out")}).code, 0);
  ASSERT_EQ(cli({"run", "--manifest", path("out/manifest.jsonl"), "--target", "reference", "--lexicon",
                 path("lexicon.txt")})
                .code,
            0);
  Result r = cli({"seeds", "filter", "--corpus", path("seeds.jsonl"), "--baseline-verdicts",
                  path("out/verdicts.jsonl"), "--out", path("kept.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  // Of "kill all idiots", "you are trash", "loser", "shut up moron", every
  // seed holds a lexicon word.
  SeedCorpus kept = load_seeds(dir / "kept.jsonl", CorpusFormat::Jsonl);
  EXPECT_EQ(kept.seeds.size(), 4u);
}

TEST_F(CliTest, TransportFailureExitsOne) {
  testing::write_file(dir / "target.json",
                      R"({"endpoint":"http://127.0.0.1:1/x","timeout_ms":500,
                          "response":{"score_path":"s"}})");
  ASSERT_EQ(cli({"generate", "--corpus", path("seeds.jsonl"), "--mrs", "mirror", "--out", path("out")}).code, 0);
  Result r = cli({"run", "--manifest", path("out/manifest.jsonl"), "--target", "http:" + path("target.json"),
                  "--attempts", "1"});
  EXPECT_EQ(r.code, 1);
  VerdictLog log = VerdictLog::load(dir / "out" / "verdicts.jsonl");
  EXPECT_TRUE(log.verdicts.empty());
  EXPECT_EQ(log.failures.size(), 4u);
}

TEST_F(CliTest, MissingFilesAreRuntimeErrors) {
  EXPECT_EQ(cli({"report", "--verdicts", path("none.jsonl"), "--manifest", path("none2.jsonl")}).code, 1);
  EXPECT_EQ(cli({"generate", "--corpus", path("none.csv"), "--mrs", "mirror", "--out", path("o")}).code, 1);
}

}  // namespace
}  // namespace mtmod
