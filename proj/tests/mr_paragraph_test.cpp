#include "mtmod/mr_paragraph.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "mtmod/error.hpp"
#include "mtmod/lexicon.hpp"
#include "support.hpp"

namespace mtmod {
namespace {

using testing::seed;

TestCase run(const std::string& text, MrId mr, const json& params = json::object(),
             const Resources& res = Resources::defaults(), std::uint64_t rng = 1) {
  return apply_mr(seed("t", text), make_spec(mr, params, rng), res);
}

TestCase baseline(const std::string& text) { return run(text, MrId::Baseline); }

StyledText doc_of(const std::string& text, int size = kDefaultTextSize) {
  RenderSettings s;
  s.size = size;
  return StyledText::from_text(text, Language::English, s);
}

double centroid_distance(const Rect& r, const Canvas& c) {
  return std::hypot(r.x + r.w / 2.0 - c.width() / 2.0, r.y + r.h / 2.0 - c.height() / 2.0);
}

TEST(Circle, FourUnitsAtCompassPoints) {
  TestCase tc = run("a b c d", MrId::Circle);
  auto angles = tc.aux["circle"]["angles"].get<std::vector<double>>();
  EXPECT_EQ(angles, (std::vector<double>{-90.0, 0.0, 90.0, 180.0}));
  const Canvas& c = tc.frames[0];
  const double cx = c.width() / 2.0, cy = c.height() / 2.0;
  auto center = [](const Rect& r) { return std::pair{r.x + r.w / 2.0, r.y + r.h / 2.0}; };
  auto [ax, ay] = center(tc.ledger[0].bbox);
  auto [bx, by] = center(tc.ledger[1].bbox);
  auto [dx, dy] = center(tc.ledger[2].bbox);
  auto [ex, ey] = center(tc.ledger[3].bbox);
  EXPECT_LT(ay, cy);  // top
  EXPECT_GT(bx, cx);  // right
  EXPECT_GT(dy, cy);  // bottom
  EXPECT_LT(ex, cx);  // left
  EXPECT_NEAR(ax, cx, 1.0);
  EXPECT_NEAR(by, cy, 1.0);
}

TEST(Circle, SingleUnitAtTop) {
  TestCase tc = run("hello", MrId::Circle);
  Rect u = mr::ledger_union(tc.ledger, 0, 5);
  EXPECT_NEAR(u.x + u.w / 2.0, tc.frames[0].width() / 2.0, 1.0);
  EXPECT_LT(u.y + u.h / 2.0, tc.frames[0].height() / 2.0);
}

TEST(Circle, CentroidsEquidistant) {
  for (bool tangential : {false, true}) {
    TestCase tc = run("kill all the idiots now", MrId::Circle, {{"tangential", tangential}});
    StyledText doc = doc_of("kill all the idiots now");
    std::vector<double> d;
    std::size_t first = 0;
    for (const TextUnit& u : doc.units) {
      d.push_back(centroid_distance(mr::ledger_union(tc.ledger, first, u.size()), tc.frames[0]));
      first += u.size();
    }
    double r = tc.aux["circle"]["radius"].get<double>();
    for (double x : d) EXPECT_NEAR(x, r, 1.0) << "tangential=" << tangential;
  }
}

TEST(Circle, RadiusFormula) {
  TestCase tc = run("ab cde", MrId::Circle);
  // Unit widths 24 and 36 at size 24; line height 24.
  EXPECT_DOUBLE_EQ(tc.aux["circle"]["radius"].get<double>(), (24.0 + 36.0) / (2 * M_PI) + 24.0);
}

TEST(Vertical, HeightIsSumOfParts) {
  TestCase tc = run("you are trash", MrId::Vertical);
  int h = 0, w = 0;
  for (const char* word : {"you", "are", "trash"}) {
    Rendering part = render_line(word, FontProvider::bundled(), kDefaultTextSize);
    h += part.canvas.height();
    w = std::max(w, part.canvas.width());
  }
  EXPECT_EQ(tc.frames[0].height(), h);
  EXPECT_EQ(tc.frames[0].width(), w);
}

TEST(Vertical, WidthsExample) {
  // Widths 24/40/16 at size 16 (8 px per glyph): 3, 5 and 2 glyphs.
  RenderSettings s;
  s.size = 16;
  s.padding = 0;
  Rendering r = mr::vertical(StyledText::from_text("abc defgh ij", Language::English, s));
  EXPECT_EQ(r.canvas.width(), 40);
  EXPECT_EQ(r.canvas.height(), 48);
}

TEST(Vertical, SingleUnitIsBaseline) {
  EXPECT_EQ(run("loser", MrId::Vertical).frames[0], baseline("loser").frames[0]);
}

TEST(RightToLeft, ReversesWords) {
  EXPECT_EQ(run("kill all X", MrId::RightToLeft).frames[0], baseline("X all kill").frames[0]);
}

TEST(RightToLeft, PalindromeUnitsAreBaseline) {
  EXPECT_EQ(run("go to go", MrId::RightToLeft).frames[0], baseline("go to go").frames[0]);
}

TEST(RightToLeft, TwiceIsIdentity) {
  StyledText doc = doc_of("you are a fool");
  StyledText twice = mr::reversed_units(mr::reversed_units(doc));
  EXPECT_EQ(layout_line(twice).canvas, layout_line(doc).canvas);
}

TEST(AlignAlternate, OffsetsFromWidths) {
  // Widths 36, 12, 24 at size 24, padding 8: W = 2*8 + 36 = 52.
  TestCase tc = run("abc d ef", MrId::AlignAlternate);
  const int p = 8, W = 2 * p + 36;
  EXPECT_EQ(tc.frames[0].width(), W);
  EXPECT_EQ(tc.ledger[0].bbox.x, p);
  EXPECT_EQ(tc.ledger[3].bbox.x, W - p - 12);
  EXPECT_EQ(tc.ledger[4].bbox.x, p);
}

TEST(AlignAlternate, SingleUnitLeftAligned) {
  TestCase tc = run("hello", MrId::AlignAlternate);
  EXPECT_EQ(tc.ledger[0].bbox.x, 8);
}

TEST(AlignAlternate, SameWidthsAlternate) {
  TestCase tc = run("aa bb cc dd", MrId::AlignAlternate);
  const int W = tc.frames[0].width();
  EXPECT_EQ(W, 16 + 24);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(tc.ledger[2 * i].bbox.x, i % 2 == 0 ? 8 : W - 8 - 24);
}

TEST(Overlap, ZeroIsBaseline) {
  EXPECT_EQ(run("you are trash", MrId::Overlap, {{"overlap", 0.0}}).frames[0],
            baseline("you are trash").frames[0]);
}

TEST(Overlap, SecondWordShifted) {
  // Size 16: "abcd" plus its trailing space advances 40 px.
  RenderSettings s;
  s.size = 16;
  Rendering r = mr::overlap(StyledText::from_text("abcd efgh", Language::English, s), {0.3});
  const int x0 = r.ledger[0].bbox.x;
  EXPECT_EQ(r.ledger[4].bbox.x, x0 + 28);
}

TEST(Overlap, NearTotalStillValid) {
  TestCase tc = run("you are trash", MrId::Overlap, {{"overlap", 0.99}});
  EXPECT_GE(tc.frames[0].width(), 1);
  EXPECT_EQ(tc.ledger.size(), 11u);
  EXPECT_THROW(run("x", MrId::Overlap, {{"overlap", 1.0}}), ParamError);
}

TEST(BenignText, InsertionCount) {
  TestCase tc = run("kill all idiots", MrId::BenignText, {{"words_between", 2}});
  EXPECT_EQ(tc.aux["benign-text"]["rendered_units"].get<int>(), 7);
  EXPECT_EQ(tc.aux["benign-text"]["inserted"].size(), 4u);
}

TEST(BenignText, ZeroWordsIsBaselinePlusRings) {
  TestCase tc = run("kill all idiots", MrId::BenignText, {{"words_between", 0}});
  Canvas base = baseline("kill all idiots").frames[0];
  const Canvas& c = tc.frames[0];
  ASSERT_EQ(c.width(), base.width());
  ASSERT_EQ(c.height(), base.height());
  std::size_t red = 0;
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x) {
      if (c.at(x, y) == Rgb{255, 0, 0})
        ++red;
      else
        EXPECT_EQ(c.at(x, y), base.at(x, y));
    }
  EXPECT_GT(red, 0u);
}

TEST(BenignText, RingsEncloseOriginalUnits) {
  TestCase tc = run("kill all idiots", MrId::BenignText);
  const auto& units = tc.aux["benign-text"]["original_units"];
  ASSERT_EQ(units.size(), 3u);
  const Canvas& c = tc.frames[0];
  for (const auto& u : units) {
    Rect r{u[0], u[1], u[2], u[3]};
    // Red left of and right of the unit center row, within stroke + 1 px.
    int mid = r.y + r.h / 2;
    bool left = false, right = false;
    for (int x = r.x - 3; x <= r.x; ++x) left |= c.contains(x, mid) && c.at(x, mid) == Rgb{255, 0, 0};
    for (int x = r.right() - 1; x <= r.right() + 2; ++x) right |= c.contains(x, mid) && c.at(x, mid) == Rgb{255, 0, 0};
    EXPECT_TRUE(left && right);
  }
}

Mask dilate(const Mask& m) {
  Mask out(m.width, m.height);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x) {
      bool v = false;
      for (int dy = -1; dy <= 1 && !v; ++dy)
        for (int dx = -1; dx <= 1 && !v; ++dx) {
          int xx = x + dx, yy = y + dy;
          v = xx >= 0 && yy >= 0 && xx < m.width && yy < m.height && m.at(xx, yy);
        }
      out.set(x, y, v);
    }
  return out;
}

// Fraction of mask pixels covered by at least one placed word box.
double recount_coverage(const mr::WordCloud& wc) {
  std::size_t total = 0, covered = 0;
  for (int y = 0; y < wc.mask.height; ++y)
    for (int x = 0; x < wc.mask.width; ++x) {
      if (!wc.mask.at(x, y)) continue;
      ++total;
      for (const Rect& r : wc.word_boxes)
        if (x >= r.x && x < r.right() && y >= r.y && y < r.bottom()) {
          ++covered;
          break;
        }
    }
  return total == 0 ? 0.0 : static_cast<double>(covered) / total;
}

TEST(WordCloud, CoverageAndContainment) {
  for (const char* word : {"idiot", "loser", "moron", "trash", "freak"}) {
    Rng rng(3);
    mr::WordCloud wc = mr::word_cloud(doc_of(word), {}, bundled_benign_words(), rng);
    EXPECT_GE(recount_coverage(wc), 0.6) << word;
    EXPECT_NEAR(wc.coverage, recount_coverage(wc), 1e-12) << word;
    const Canvas& c = wc.rendering.canvas;
    ASSERT_EQ(c.width(), wc.mask.width);
    ASSERT_EQ(c.height(), wc.mask.height);
    Mask allowed = dilate(wc.mask);
    for (int y = 0; y < c.height(); ++y)
      for (int x = 0; x < c.width(); ++x)
        if (c.at(x, y) != kWhite) {
          ASSERT_TRUE(allowed.at(x, y)) << word << " at " << x << "," << y;
        }
    // Placed words never overlap.
    for (std::size_t i = 0; i < wc.word_boxes.size(); ++i)
      for (std::size_t j = i + 1; j < wc.word_boxes.size(); ++j)
        EXPECT_FALSE(wc.word_boxes[i].intersects(wc.word_boxes[j]));
  }
}

TEST(WordCloud, ZeroCoverageIsValid) {
  Rng rng(1);
  EXPECT_NO_THROW(mr::word_cloud(doc_of("x"), {0.0, 192, {16}}, bundled_benign_words(), rng));
}

TEST(WordCloud, InfeasibleWhenNothingFits) {
  Rng rng(1);
  EXPECT_THROW(mr::word_cloud(doc_of("i"), {0.6, 16, {64}}, {"abcdefgh"}, rng), CloudInfeasibleError);
}

TEST(WordCloud, Deterministic) {
  EXPECT_EQ(run("moron", MrId::WordCloud, json::object(), Resources::defaults(), 9).frames[0],
            run("moron", MrId::WordCloud, json::object(), Resources::defaults(), 9).frames[0]);
}

}  // namespace
}  // namespace mtmod
