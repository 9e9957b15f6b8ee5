#include "mtmod/render.hpp"

#include <algorithm>
#include <cmath>

#include "mtmod/error.hpp"
#include "mtmod/unicode.hpp"

namespace mtmod {

StyledText StyledText::from_text(std::string_view utf8, Language lang, const RenderSettings& settings) {
  if (settings.size < 1) throw ParamError("text size must be positive");
  if (settings.padding < 0) throw ParamError("padding must be non-negative");
  const std::u32string cps = unicode::decode_utf8(utf8);
  const bool blank = std::all_of(cps.begin(), cps.end(), [](char32_t c) { return unicode::is_space(c); });
  if (cps.empty() || blank) throw InvalidTextError("text is empty");

  StyledText doc;
  doc.fonts.push_back(settings.font);
  doc.language = lang;
  doc.padding = settings.padding;
  doc.bg = settings.bg;
  GlyphStyle style;
  style.size = settings.size;
  style.fg = settings.fg;
  for (char32_t cp : cps) {
    if (unicode::is_space(cp)) cp = U' ';
    if (!settings.font.covers(cp)) throw GlyphCoverageError(cp);
    doc.glyphs.push_back({cp, style});
  }
  doc.rebuild_units();
  return doc;
}

void StyledText::rebuild_units() {
  units.clear();
  std::size_t i = 0;
  while (i < glyphs.size()) {
    if (glyphs[i].is_space()) {
      ++i;
      continue;
    }
    if (language == Language::Chinese) {
      units.push_back({i, i + 1});
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < glyphs.size() && !glyphs[j].is_space()) ++j;
    units.push_back({i, j});
    i = j;
  }
}

std::u32string StyledText::unit_text(const TextUnit& u) const {
  std::u32string s;
  for (std::size_t i = u.begin; i < u.end; ++i) s.push_back(glyphs[i].cp);
  return s;
}

std::vector<int> StyledText::glyph_ordinals() const {
  std::vector<int> ord(glyphs.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < glyphs.size(); ++i)
    if (!glyphs[i].is_space()) ord[i] = n++;
  return ord;
}

Extent measure_glyphs(const StyledText& doc, std::size_t begin, std::size_t end) {
  Extent e;
  for (std::size_t i = begin; i < end; ++i) {
    e.width += doc.advance(doc.glyphs[i]);
    e.height = std::max(e.height, doc.glyphs[i].style.size);
  }
  return e;
}

namespace {

Rect clamp_rect(Rect r, int width, int height) {
  const int x0 = std::clamp(r.x, 0, width), y0 = std::clamp(r.y, 0, height);
  const int x1 = std::clamp(r.right(), 0, width), y1 = std::clamp(r.bottom(), 0, height);
  return {x0, y0, std::max(0, x1 - x0), std::max(0, y1 - y0)};
}

void paint_mask(Canvas& canvas, const Mask& m, int x, int y, Rgb fg) {
  for (int my = 0; my < m.height; ++my) {
    const int cy = y + my;
    if (cy < 0 || cy >= canvas.height()) continue;
    for (int mx = 0; mx < m.width; ++mx) {
      if (!m.at(mx, my)) continue;
      const int cx = x + mx;
      if (cx < 0 || cx >= canvas.width()) continue;
      const Rgb d = canvas.at(cx, cy);
      canvas.set(cx, cy, {std::min(d.r, fg.r), std::min(d.g, fg.g), std::min(d.b, fg.b)});
    }
  }
}

Mask rotate_mask(const Mask& m, double degrees) {
  Canvas c(m.width, m.height, kWhite);
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.at(x, y)) c.set(x, y, kBlack);
  return ink_mask(rotate_canvas(c, degrees, kWhite));
}

}  // namespace

void draw_glyphs(Canvas& canvas, GlyphLedger& ledger, const StyledText& doc, std::size_t begin,
                 std::size_t end, int x, int y, int line_height) {
  for (std::size_t i = begin; i < end; ++i) {
    const StyledGlyph& g = doc.glyphs[i];
    const int adv = doc.advance(g);
    if (g.is_space() || !g.style.visible) {
      x += adv;
      continue;
    }
    const GlyphImage img = doc.font_of(g).rasterize(g.cp, g.style.size);
    const int top = y + line_height - g.style.size;
    Rect box{x, top, img.cell_width, img.cell_height};
    if (g.style.rotation_deg == 0.0) {
      paint_mask(canvas, img.mask, x + img.dx, top, g.style.fg);
    } else {
      // Rotate the full cell (including any shear overhang) about its center.
      const Mask rotated = rotate_mask(img.mask, g.style.rotation_deg);
      const double cx = x + img.dx + img.mask.width / 2.0;
      const double cy = top + img.mask.height / 2.0;
      const int rx = static_cast<int>(std::floor(cx - rotated.width / 2.0));
      const int ry = static_cast<int>(std::floor(cy - rotated.height / 2.0));
      paint_mask(canvas, rotated, rx, ry, g.style.fg);
      const auto [bw, bh] = rotated_size(img.cell_width, img.cell_height, g.style.rotation_deg);
      box = {static_cast<int>(std::floor(x + img.cell_width / 2.0 - bw / 2.0)),
             static_cast<int>(std::floor(top + img.cell_height / 2.0 - bh / 2.0)), bw, bh};
    }
    GlyphPlacement p;
    p.codepoint = g.cp;
    p.bbox = clamp_rect(box, canvas.width(), canvas.height());
    p.rotation_deg = g.style.rotation_deg;
    p.render_order = ledger.empty() ? 0 : ledger.back().render_order + 1;
    ledger.push_back(p);
    x += adv;
  }
}

Rendering layout_line(const StyledText& doc) {
  const Extent e = measure_glyphs(doc, 0, doc.glyphs.size());
  Rendering r{Canvas(2 * doc.padding + std::max(1, e.width), 2 * doc.padding + std::max(1, e.height), doc.bg), {}};
  draw_glyphs(r.canvas, r.ledger, doc, 0, doc.glyphs.size(), doc.padding, doc.padding, e.height);
  return r;
}

void apply_overlays(Canvas& canvas, const std::vector<StrikeOverlay>& overlays) {
  for (const StrikeOverlay& o : overlays) {
    for (double f : o.row_fractions) {
      const int row = std::clamp(static_cast<int>(std::floor(f * canvas.height() + 1e-9)), 0, canvas.height() - 1);
      canvas.fill_rect({0, row, canvas.width(), 1}, o.color);
    }
  }
}

Rendering render_line(std::string_view utf8, const FontProvider& font, int size, Rgb fg, Rgb bg, int padding) {
  RenderSettings s{font, size, padding, fg, bg};
  return layout_line(StyledText::from_text(utf8, Language::English, s));
}

void append_ledger(GlyphLedger& dst, const GlyphLedger& src, int dx, int dy) {
  int order = dst.empty() ? 0 : dst.back().render_order + 1;
  for (GlyphPlacement p : src) {
    p.bbox.x += dx;
    p.bbox.y += dy;
    p.render_order = order++;
    dst.push_back(p);
  }
}

void clamp_ledger(GlyphLedger& ledger, int width, int height) {
  for (GlyphPlacement& p : ledger) p.bbox = clamp_rect(p.bbox, width, height);
}

}  // namespace mtmod
