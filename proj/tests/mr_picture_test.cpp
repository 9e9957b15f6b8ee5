#include "mtmod/mr_picture.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "mtmod/codec.hpp"
#include "mtmod/error.hpp"
#include "support.hpp"

namespace mtmod {
namespace {

using testing::seed;

TestCase run(const std::string& text, MrId mr, const json& params = json::object(),
             const Resources& res = Resources::defaults(), std::uint64_t rng = 1) {
  return apply_mr(seed("t", text), make_spec(mr, params, rng), res);
}

TestCase baseline(const std::string& text) { return run(text, MrId::Baseline); }

TEST(Blur, DefaultKernelMatchesCanvasOp) {
  EXPECT_EQ(run("you are trash", MrId::Blur).frames[0], blur_mean(baseline("you are trash").frames[0], 5));
  EXPECT_THROW(run("x", MrId::Blur, {{"k", 4}}), ParamError);
}

TEST(Crop, FullFractionIsIdentity) {
  EXPECT_EQ(run("you are trash", MrId::Crop, {{"keep_top_fraction", 1.0}}).frames[0],
            baseline("you are trash").frames[0]);
}

TEST(Crop, KeptRows) {
  EXPECT_EQ(mr::kept_rows(0.7, 16), 12);  // 11.2 rounds up
  EXPECT_EQ(mr::kept_rows(0.7, 24), 17);  // 16.8
  EXPECT_EQ(mr::kept_rows(0.7, 10), 7);   // exactly 7 despite 0.7*10 = 7.000000000000001
  EXPECT_EQ(mr::kept_rows(1.0, 24), 24);
}

TEST(Crop, BlanksBottomOfEachCell) {
  RenderSettings s;
  s.size = 16;
  Resources res = Resources::defaults();
  res.render = s;
  TestCase base = run("HELLO world", MrId::Baseline, json::object(), res);
  TestCase tc = run("HELLO world", MrId::Crop, json::object(), res);
  const Canvas &b = base.frames[0], &c = tc.frames[0];
  const int keep = static_cast<int>(std::ceil(0.7 * 16));
  EXPECT_EQ(keep, 12);
  Mask in_blank(c.width(), c.height());
  for (const auto& g : base.ledger) {
    ASSERT_EQ(g.bbox.h, 16);
    for (int y = g.bbox.y + keep; y < g.bbox.bottom(); ++y)
      for (int x = g.bbox.x; x < g.bbox.right(); ++x) {
        EXPECT_EQ(c.at(x, y), kWhite);
        in_blank.set(x, y);
      }
  }
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x)
      if (!in_blank.at(x, y)) {
        EXPECT_EQ(c.at(x, y), b.at(x, y));
      }
  EXPECT_THROW(run("x", MrId::Crop, {{"keep_top_fraction", 0.0}}), ParamError);
}

TEST(Mirror, InvolutionAndLedger) {
  TestCase base = baseline("abc");
  TestCase tc = run("abc", MrId::Mirror);
  EXPECT_EQ(mirror_canvas(tc.frames[0]), base.frames[0]);
  EXPECT_EQ(tc.frames[0].width(), base.frames[0].width());
  const int w = base.frames[0].width();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(tc.ledger[i].bbox.x, w - base.ledger[i].bbox.right());
}

std::vector<int> column_histogram(const Canvas& c) {
  Mask m = ink_mask(c);
  std::vector<int> h(static_cast<std::size_t>(c.width()), 0);
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x) h[static_cast<std::size_t>(x)] += m.at(x, y);
  return h;
}

TEST(Mirror, ReversesColumnHistogram) {
  auto hb = column_histogram(baseline("you are trash").frames[0]);
  auto hm = column_histogram(run("you are trash", MrId::Mirror).frames[0]);
  std::reverse(hb.begin(), hb.end());
  EXPECT_EQ(hm, hb);
}

TEST(Mirror, SymmetricGlyphKeepsColumnHistogram) {
  // At size 16 glyphs are drawn 1:1; the bundled "A" differs from its
  // mirror image only in the bottom row.
  Resources res = Resources::defaults();
  res.render.size = 16;
  auto hb = column_histogram(run("A", MrId::Baseline, json::object(), res).frames[0]);
  auto hm = column_histogram(run("A", MrId::Mirror, json::object(), res).frames[0]);
  ASSERT_EQ(hb.size(), hm.size());
  int diff = 0, total = 0;
  for (std::size_t x = 0; x < hb.size(); ++x) {
    diff += std::abs(hb[x] - hm[x]);
    total += hb[x];
  }
  EXPECT_GT(total, 0);
  EXPECT_LE(diff, total / 10);
}

TEST(Rotation, ZeroIsIdentity) {
  EXPECT_EQ(run("you are trash", MrId::Rotation, {{"degrees", 0.0}}).frames[0], baseline("you are trash").frames[0]);
}

TEST(Rotation, BoundingBoxAndInk) {
  TestCase base = baseline("kill all idiots");
  TestCase tc = run("kill all idiots", MrId::Rotation);
  const int w = base.frames[0].width(), h = base.frames[0].height();
  const double s = std::sqrt(0.5);
  EXPECT_EQ(tc.frames[0].width(), static_cast<int>(std::ceil(w * s + h * s - 1e-9)));
  EXPECT_EQ(tc.frames[0].height(), static_cast<int>(std::ceil(w * s + h * s - 1e-9)));
  double ink0 = static_cast<double>(testing::ink_count(base.frames[0]));
  double ink1 = static_cast<double>(testing::ink_count(tc.frames[0]));
  EXPECT_LE(std::abs(ink1 - ink0), 0.02 * ink0);
}

TEST(Rotation, LedgerBoxesContainGlyphInk) {
  TestCase tc = run("hi you", MrId::Rotation, {{"degrees", 30.0}});
  // Each glyph drawn alone, rotated the same way, inks only inside its box.
  for (std::size_t i = 0; i < tc.ledger.size(); ++i) {
    Rendering alone = render_line("hi you", FontProvider::bundled(), 24);
    Rect keep = alone.ledger[i].bbox;
    Canvas only(alone.canvas.width(), alone.canvas.height());
    for (int y = keep.y; y < keep.bottom(); ++y)
      for (int x = keep.x; x < keep.right(); ++x) only.set(x, y, alone.canvas.at(x, y));
    Canvas r = rotate_canvas(only, 30.0);
    const Rect& box = tc.ledger[i].bbox;
    for (int y = 0; y < r.height(); ++y)
      for (int x = 0; x < r.width(); ++x)
        if (r.at(x, y) != kWhite) {
          EXPECT_TRUE(x >= box.x && x < box.right() && y >= box.y && y < box.bottom());
        }
  }
}

TEST(Scribble, ZeroStrokesIsIdentity) {
  EXPECT_EQ(run("trash", MrId::Scribble, {{"stroke_count", 0}}).frames[0], baseline("trash").frames[0]);
}

TEST(Scribble, OnlyDarkens) {
  TestCase tc = run("trash", MrId::Scribble);
  Canvas b = baseline("trash").frames[0];
  std::size_t changed = 0;
  for (int y = 0; y < b.height(); ++y)
    for (int x = 0; x < b.width(); ++x) {
      Rgb p = tc.frames[0].at(x, y), q = b.at(x, y);
      EXPECT_LE(p.r, q.r);
      changed += p != q;
    }
  EXPECT_GT(changed, 0u);
}

TEST(Distort, IdentityParams) {
  EXPECT_EQ(run("trash", MrId::Distort, {{"sx", 1.0}, {"sy", 1.0}, {"bend_amp_frac", 0.0}}).frames[0],
            baseline("trash").frames[0]);
}

TEST(Distort, StretchAndBend) {
  Canvas b = baseline("trash").frames[0];
  TestCase tc = run("trash", MrId::Distort);
  const Canvas& c = tc.frames[0];
  const int w = static_cast<int>(std::lround(b.width() * 1.8)), h = static_cast<int>(std::lround(b.height() * 0.5));
  ASSERT_EQ(c.width(), w);
  ASSERT_EQ(c.height(), h);
  Canvas stretched = resize_nonuniform(b, 1.8, 0.5);
  for (int y = 0; y < h; ++y) {
    int shift = static_cast<int>(std::lround(0.05 * w * std::sin(2 * M_PI * y / h)));
    EXPECT_EQ(mr::bend_shift(y, w, h, 0.05), shift);
    for (int x = 0; x < w; ++x) {
      int sx = x - shift;
      Rgb expect = sx >= 0 && sx < w ? stretched.at(sx, y) : kWhite;
      ASSERT_EQ(c.at(x, y), expect) << x << "," << y;
    }
  }
}

TEST(Watermark, ZeroAlphaIsIdentity) {
  EXPECT_EQ(run("trash", MrId::Watermark, {{"alpha", 0.0}}).frames[0], baseline("trash").frames[0]);
}

TEST(Watermark, BlendsOnlyWatermarkInk) {
  TestCase tc = run("you are trash", MrId::Watermark);
  Canvas b = baseline("you are trash").frames[0];
  ASSERT_EQ(tc.frames[0].width(), b.width());
  std::size_t changed = 0;
  for (int y = 0; y < b.height(); ++y)
    for (int x = 0; x < b.width(); ++x) {
      Rgb p = tc.frames[0].at(x, y), q = b.at(x, y);
      if (p == q) continue;
      ++changed;
      // Blend toward gray (128) at alpha 0.35 from white or black.
      EXPECT_TRUE(p.r == 211 || p.r == 45) << int(p.r);
    }
  EXPECT_GT(changed, 0u);
}

TEST(ToGif, AlternatingGlyphs) {
  TestCase tc = run("abcd", MrId::ToGif);
  ASSERT_EQ(tc.frames.size(), 2u);
  EXPECT_TRUE(tc.is_gif());
  Canvas base = baseline("abcd").frames[0];
  auto has_ink = [](const Canvas& c, const Rect& r) {
    for (int y = r.y; y < r.bottom(); ++y)
      for (int x = r.x; x < r.right(); ++x)
        if (c.at(x, y) != kWhite) return true;
    return false;
  };
  for (int slot = 0; slot < 4; ++slot) {
    EXPECT_EQ(has_ink(tc.frames[0], tc.ledger[slot].bbox), slot % 2 == 0);
    EXPECT_EQ(has_ink(tc.frames[1], tc.ledger[slot].bbox), slot % 2 == 1);
  }
}

TEST(ToGif, UnionEqualsBaseline) {
  for (const char* text : {"abcd", "you are trash", "kill all the idiots"}) {
    TestCase tc = run(text, MrId::ToGif);
    Mask a = ink_mask(tc.frames[0]), b = ink_mask(tc.frames[1]);
    Mask u(a.width, a.height);
    for (std::size_t i = 0; i < u.bits.size(); ++i) u.bits[i] = a.bits[i] | b.bits[i];
    EXPECT_EQ(u, ink_mask(baseline(text).frames[0])) << text;
  }
}

TEST(ToGif, SingleCharLeavesSecondFrameBlank) {
  TestCase tc = run("x", MrId::ToGif);
  EXPECT_EQ(testing::ink_count(tc.frames[1]), 0u);
  EXPECT_GT(testing::ink_count(tc.frames[0]), 0u);
}

TEST(ToGif, EncodesAnimatedGif) {
  TestCase tc = run("abcd", MrId::ToGif);
  GifAnimation anim = decode_gif(encode_artifact(tc));
  ASSERT_EQ(anim.frames.size(), 2u);
  EXPECT_EQ(anim.frames[0], tc.frames[0]);
  EXPECT_EQ(anim.loop_count, 0);
  EXPECT_EQ(anim.delays_cs[0], 1);
}

TEST(BenignImage, MiddleBandIsToxicRender) {
  Canvas b = baseline("you are trash").frames[0];
  for (int n : {0, 1, 2, 3}) {
    TestCase tc = run("you are trash", MrId::BenignImage, {{"pad_images", n}});
    const Canvas& c = tc.frames[0];
    int off = tc.aux["benign-image"]["toxic_offset_y"].get<int>();
    auto heights = tc.aux["benign-image"]["benign_heights"].get<std::vector<int>>();
    ASSERT_EQ(heights.size(), static_cast<std::size_t>(n));
    int above = 0;
    for (int i = 0; i < (n + 1) / 2; ++i) above += heights[i];
    EXPECT_EQ(off, above);
    int total = b.height();
    for (int hh : heights) total += hh;
    EXPECT_EQ(c.height(), total);
    EXPECT_EQ(c.width(), b.width());
    EXPECT_EQ(crop_rect(c, {0, off, b.width(), b.height()}), b) << "n=" << n;
  }
}

TEST(BenignImage, UsesSuppliedImages) {
  Resources res = Resources::defaults();
  res.benign_images = {Canvas(10, 5, {0, 200, 0})};
  TestCase tc = run("trash", MrId::BenignImage, {{"pad_images", 1}}, res);
  EXPECT_EQ(tc.frames[0].at(0, 0), (Rgb{0, 200, 0}));
}

}  // namespace
}  // namespace mtmod
