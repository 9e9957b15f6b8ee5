#include "mtmod/mr_paragraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mtmod/error.hpp"
#include "mtmod/unicode.hpp"
#include "params.hpp"

namespace mtmod::mr {

using detail::color_json;
using detail::ParamReader;

namespace {

int advance_sum(const StyledText& doc, std::size_t begin, std::size_t end) {
  return measure_glyphs(doc, begin, end).width;
}

/// A unit drawn on its own padded canvas.
Rendering render_unit(const StyledText& doc, const TextUnit& u) {
  const Extent e = measure_glyphs(doc, u.begin, u.end);
  Rendering r{Canvas(2 * doc.padding + std::max(1, e.width), 2 * doc.padding + std::max(1, e.height), doc.bg), {}};
  draw_glyphs(r.canvas, r.ledger, doc, u.begin, u.end, doc.padding, doc.padding, e.height);
  return r;
}

}  // namespace

CircleParams CircleParams::from_json(const json& j) {
  ParamReader r("circle", j);
  CircleParams p;
  p.tangential = r.boolean("tangential", p.tangential);
  r.finish();
  return p;
}

json CircleParams::to_json() const { return {{"tangential", tangential}}; }

Rendering circle(const StyledText& doc, const CircleParams& p, json& aux) {
  const std::size_t n = doc.units.size();
  const int line_h = measure_glyphs(doc, 0, doc.glyphs.size()).height;
  std::vector<Extent> ext;
  double total_w = 0.0, half_diag = 0.0;
  for (const TextUnit& u : doc.units) {
    ext.push_back(measure_glyphs(doc, u.begin, u.end));
    total_w += ext.back().width;
    half_diag = std::max(half_diag, std::hypot(ext.back().width, ext.back().height) / 2.0);
  }
  const double radius = total_w / (2.0 * M_PI) + line_h;
  const int side = 2 * static_cast<int>(std::ceil(radius + half_diag)) + 2 * doc.padding;
  Rendering out{Canvas(side, side, doc.bg), {}};
  const double c = side / 2.0;
  json angles = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const double deg = -90.0 + 360.0 * static_cast<double>(i) / static_cast<double>(n);
    const double ux = c + radius * std::cos(deg * M_PI / 180.0);
    const double uy = c + radius * std::sin(deg * M_PI / 180.0);
    angles.push_back(deg);
    const TextUnit& u = doc.units[i];
    if (!p.tangential) {
      const int x = static_cast<int>(std::lround(ux - ext[i].width / 2.0));
      const int y = static_cast<int>(std::lround(uy - ext[i].height / 2.0));
      draw_glyphs(out.canvas, out.ledger, doc, u.begin, u.end, x, y, ext[i].height);
      continue;
    }
    // Tangential: draw the unit unpadded, turn it so its baseline follows the
    // circle, then darken it into place.
    Rendering sub{Canvas(std::max(1, ext[i].width), std::max(1, ext[i].height), doc.bg), {}};
    draw_glyphs(sub.canvas, sub.ledger, doc, u.begin, u.end, 0, 0, ext[i].height);
    const double turn = deg + 90.0;
    const Canvas rotated = rotate_canvas(sub.canvas, turn, doc.bg);
    const int x = static_cast<int>(std::lround(ux - rotated.width() / 2.0));
    const int y = static_cast<int>(std::lround(uy - rotated.height() / 2.0));
    out.canvas = composite(out.canvas, rotated, x, y, Darken{});
    for (GlyphPlacement& g : sub.ledger) {
      g.bbox = rotate_rect(g.bbox, sub.canvas.width(), sub.canvas.height(), turn);
      g.rotation_deg += turn;
    }
    append_ledger(out.ledger, sub.ledger, x, y);
  }
  clamp_ledger(out.ledger, side, side);
  aux["radius"] = radius;
  aux["angles"] = std::move(angles);
  return out;
}

Rendering vertical(const StyledText& doc) {
  std::vector<Rendering> parts;
  for (const TextUnit& u : doc.units) parts.push_back(render_unit(doc, u));
  std::vector<Canvas> canvases;
  int width = 0;
  for (const Rendering& r : parts) {
    canvases.push_back(r.canvas);
    width = std::max(width, r.canvas.width());
  }
  Rendering out{stack_vertical(canvases, doc.bg), {}};
  int y = 0;
  for (const Rendering& r : parts) {
    append_ledger(out.ledger, r.ledger, (width - r.canvas.width()) / 2, y);
    y += r.canvas.height();
  }
  return out;
}

StyledText reversed_units(const StyledText& doc) {
  StyledText out = doc;
  out.glyphs.clear();
  if (doc.language == Language::Chinese) {
    out.glyphs.assign(doc.glyphs.rbegin(), doc.glyphs.rend());
  } else {
    const auto space = std::find_if(doc.glyphs.begin(), doc.glyphs.end(), [](const StyledGlyph& g) { return g.is_space(); });
    for (std::size_t k = doc.units.size(); k-- > 0;) {
      const TextUnit& u = doc.units[k];
      out.glyphs.insert(out.glyphs.end(), doc.glyphs.begin() + static_cast<std::ptrdiff_t>(u.begin),
                        doc.glyphs.begin() + static_cast<std::ptrdiff_t>(u.end));
      if (k > 0 && space != doc.glyphs.end()) out.glyphs.push_back(*space);
    }
  }
  out.rebuild_units();
  return out;
}

Rendering right_to_left(const StyledText& doc) { return layout_line(reversed_units(doc)); }

Rendering align_alternate(const StyledText& doc) {
  std::vector<Extent> ext;
  int max_w = 1, total_h = 0;
  for (const TextUnit& u : doc.units) {
    ext.push_back(measure_glyphs(doc, u.begin, u.end));
    max_w = std::max(max_w, ext.back().width);
    total_h += ext.back().height;
  }
  const int width = 2 * doc.padding + max_w;
  Rendering out{Canvas(width, 2 * doc.padding + std::max(1, total_h), doc.bg), {}};
  int y = doc.padding;
  for (std::size_t i = 0; i < doc.units.size(); ++i) {
    const int x = i % 2 == 0 ? doc.padding : width - doc.padding - ext[i].width;
    draw_glyphs(out.canvas, out.ledger, doc, doc.units[i].begin, doc.units[i].end, x, y, ext[i].height);
    y += ext[i].height;
  }
  return out;
}

WordCloudParams WordCloudParams::from_json(const json& j) {
  ParamReader r("word-cloud", j);
  WordCloudParams p;
  p.min_coverage = r.number("min_coverage", p.min_coverage, 0.0, 1.0);
  p.mask_size = r.integer("mask_size", p.mask_size, 8, 512);
  p.word_sizes = r.int_list("word_sizes", p.word_sizes, 1, 256);
  if (p.word_sizes.empty()) r.fail("word_sizes", "must not be empty");
  r.finish();
  return p;
}

json WordCloudParams::to_json() const {
  return {{"min_coverage", min_coverage}, {"mask_size", mask_size}, {"word_sizes", word_sizes}};
}

WordCloud word_cloud(const StyledText& doc, const WordCloudParams& p, const std::vector<std::string>& benign_words,
                     Rng& rng) {
  StyledText big = doc;
  big.overlays.clear();
  for (StyledGlyph& g : big.glyphs) {
    g.style.size = p.mask_size;
    g.style.fg = kBlack;
  }
  WordCloud cloud{{Canvas(1, 1), {}}, ink_mask(layout_line(big).canvas), {}, {}, 0.0};
  const Mask& mask = cloud.mask;
  const int W = mask.width, H = mask.height;
  cloud.rendering.canvas = Canvas(W, H, doc.bg);

  // Summed-area table: a box lies inside the mask iff its sum equals its area.
  std::vector<std::uint32_t> sat(static_cast<std::size_t>(W + 1) * (H + 1), 0);
  auto S = [&](int x, int y) -> std::uint32_t& { return sat[static_cast<std::size_t>(y) * (W + 1) + x]; };
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) S(x + 1, y + 1) = mask.at(x, y) + S(x, y + 1) + S(x + 1, y) - S(x, y);
  auto inside = [&](int x, int y, int w, int h) {
    return S(x + w, y + h) + S(x, y) - S(x + w, y) - S(x, y + h) == static_cast<std::uint32_t>(w * h);
  };

  const std::size_t total = mask.count();
  if (total == 0) return cloud;  // nothing visible to fill, e.g. an empty GIF frame

  // Word queues by length, so one fit test serves every word of that length.
  const FontProvider& font = doc.fonts.at(0);
  std::map<std::size_t, std::vector<std::u32string>, std::greater<>> by_len;
  for (const std::string& w : benign_words) {
    std::u32string cps = unicode::decode_utf8(w);
    if (cps.empty() || !std::all_of(cps.begin(), cps.end(), [&](char32_t c) { return c != U' ' && font.covers(c); }))
      continue;
    by_len[cps.size()].push_back(std::move(cps));
  }
  for (auto& [len, words] : by_len) rng.shuffle(std::span<std::u32string>(words));
  std::map<std::size_t, std::size_t> cursor;

  std::vector<int> sizes = p.word_sizes;
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  Mask occupied(W, H);
  auto is_free = [&](int x, int y, int w, int h) {
    for (int yy = y; yy < y + h; ++yy)
      for (int xx = x; xx < x + w; ++xx)
        if (occupied.at(xx, yy)) return false;
    return true;
  };

  std::size_t covered = 0;
  const auto goal = static_cast<std::size_t>(std::ceil(p.min_coverage * static_cast<double>(total) - 1e-9));
  StyledText word;
  word.fonts = {font};
  word.bg = doc.bg;
  for (int s : sizes) {
    if (covered >= goal) break;
    const int cw = font.scaled_cell_width(s);
    for (int y = 0; y + s <= H && covered < goal; ++y) {
      for (int x = 0; x < W && covered < goal; ++x) {
        if (!mask.at(x, y) || occupied.at(x, y)) continue;
        for (auto& [len, words] : by_len) {
          const int w = cw * static_cast<int>(len);
          if (x + w > W || !inside(x, y, w, s) || !is_free(x, y, w, s)) continue;
          const std::u32string& text = words[cursor[len]++ % words.size()];
          word.glyphs.clear();
          for (char32_t c : text) word.glyphs.push_back({c, GlyphStyle{0, s, kBlack, 0.0, true}});
          draw_glyphs(cloud.rendering.canvas, cloud.rendering.ledger, word, 0, word.glyphs.size(), x, y, s);
          for (int yy = y; yy < y + s; ++yy)
            for (int xx = x; xx < x + w; ++xx) occupied.set(xx, yy);
          covered += static_cast<std::size_t>(w) * s;
          cloud.word_boxes.push_back({x, y, w, s});
          cloud.words.push_back(unicode::encode_utf8(text));
          x += w - 1;
          break;
        }
      }
    }
  }
  cloud.coverage = static_cast<double>(covered) / static_cast<double>(total);
  if (cloud.word_boxes.empty() && p.min_coverage > 0.0)
    throw CloudInfeasibleError("no benign word fits inside the text outline at size " + std::to_string(sizes.back()));
  return cloud;
}

OverlapParams OverlapParams::from_json(const json& j) {
  ParamReader r("overlap", j);
  OverlapParams p;
  p.overlap = r.number("overlap", p.overlap, 0.0, 0.999);
  r.finish();
  return p;
}

json OverlapParams::to_json() const { return {{"overlap", overlap}}; }

Rendering overlap(const StyledText& doc, const OverlapParams& p) {
  const int line_h = measure_glyphs(doc, 0, doc.glyphs.size()).height;
  std::vector<int> xs;
  int right = 0;
  for (std::size_t i = 0; i < doc.units.size(); ++i) {
    const TextUnit& u = doc.units[i];
    const int cum = advance_sum(doc, 0, u.begin);
    xs.push_back(doc.padding + static_cast<int>(std::lround((1.0 - p.overlap) * cum)));
    right = std::max(right, xs.back() + advance_sum(doc, u.begin, u.end));
  }
  Rendering out{Canvas(std::max(1, right + doc.padding), 2 * doc.padding + std::max(1, line_h), doc.bg), {}};
  for (std::size_t i = 0; i < doc.units.size(); ++i)
    draw_glyphs(out.canvas, out.ledger, doc, doc.units[i].begin, doc.units[i].end, xs[i], doc.padding, line_h);
  return out;
}

BenignTextParams BenignTextParams::from_json(const json& j) {
  ParamReader r("benign-text", j);
  BenignTextParams p;
  p.words_between = r.integer("words_between", p.words_between, 0, 64);
  p.stroke = r.integer("stroke", p.stroke, 1, 16);
  p.color = r.color("color", p.color);
  r.finish();
  return p;
}

json BenignTextParams::to_json() const {
  return {{"words_between", words_between}, {"stroke", stroke}, {"color", color_json(color)}};
}

BenignText benign_text(const StyledText& doc, const BenignTextParams& p, const std::vector<std::string>& benign_words,
                       Rng& rng) {
  const FontProvider& font = doc.fonts.at(0);
  std::vector<std::u32string> pool;
  for (const std::string& w : benign_words) {
    std::u32string cps = unicode::decode_utf8(w);
    if (!cps.empty() && std::all_of(cps.begin(), cps.end(), [&](char32_t c) { return c != U' ' && font.covers(c); }))
      pool.push_back(std::move(cps));
  }
  if (pool.empty() && p.words_between > 0 && doc.units.size() > 1)
    throw ConfigError("benign-text needs a non-empty benign lexicon");

  GlyphStyle plain;
  if (!doc.units.empty()) plain = doc.glyphs[doc.units.front().begin].style;
  plain.font = 0;
  plain.rotation_deg = 0.0;
  plain.visible = true;
  const StyledGlyph space{U' ', plain};

  BenignText out{{Canvas(1, 1), {}}, {}, {}, 0};
  StyledText mixed = doc;
  mixed.glyphs.clear();
  std::vector<TextUnit> originals;
  for (std::size_t i = 0; i < doc.units.size(); ++i) {
    const TextUnit& u = doc.units[i];
    const std::size_t start = mixed.glyphs.size();
    mixed.glyphs.insert(mixed.glyphs.end(), doc.glyphs.begin() + static_cast<std::ptrdiff_t>(u.begin),
                        doc.glyphs.begin() + static_cast<std::ptrdiff_t>(u.end));
    originals.push_back({start, mixed.glyphs.size()});
    if (i + 1 == doc.units.size()) break;
    for (int k = 0; k < p.words_between; ++k) {
      const std::u32string& w = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
      mixed.glyphs.push_back(space);
      for (char32_t c : w) mixed.glyphs.push_back({c, plain});
      out.inserted.push_back(unicode::encode_utf8(w));
    }
    mixed.glyphs.push_back(space);
  }
  mixed.rebuild_units();
  out.rendered_units = doc.language == Language::Chinese ? doc.units.size() + out.inserted.size() : mixed.units.size();
  out.rendering = layout_line(mixed);

  const int line_h = measure_glyphs(mixed, 0, mixed.glyphs.size()).height;
  for (const TextUnit& u : originals) {
    const Extent e = measure_glyphs(mixed, u.begin, u.end);
    const Rect box{doc.padding + advance_sum(mixed, 0, u.begin), doc.padding + line_h - e.height, e.width, e.height};
    out.original_units.push_back(box);
    draw_ellipse_ring(out.rendering.canvas,
                      {box.x - p.stroke, box.y - p.stroke, box.w + 2 * p.stroke, box.h + 2 * p.stroke}, p.stroke,
                      p.color);
  }
  return out;
}

Rect ledger_union(const GlyphLedger& ledger, std::size_t first, std::size_t count) {
  if (count == 0 || first >= ledger.size()) return {};
  Rect r = ledger[first].bbox;
  int x1 = r.right(), y1 = r.bottom();
  for (std::size_t i = first + 1; i < std::min(ledger.size(), first + count); ++i) {
    const Rect& b = ledger[i].bbox;
    r.x = std::min(r.x, b.x);
    r.y = std::min(r.y, b.y);
    x1 = std::max(x1, b.right());
    y1 = std::max(y1, b.bottom());
  }
  return {r.x, r.y, x1 - r.x, y1 - r.y};
}

}  // namespace mtmod::mr
