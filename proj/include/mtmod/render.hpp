#pragma once

#include <string_view>
#include <vector>

#include "mtmod/canvas.hpp"
#include "mtmod/corpus.hpp"
#include "mtmod/font.hpp"

namespace mtmod {

inline constexpr int kDefaultTextSize = 24;
inline constexpr int kDefaultPadding = 8;

struct RenderSettings {
  FontProvider font = FontProvider::bundled();
  int size = kDefaultTextSize;
  int padding = kDefaultPadding;
  Rgb fg = kBlack;
  Rgb bg = kWhite;
};

struct GlyphStyle {
  int font = 0;  // index into StyledText::fonts
  int size = kDefaultTextSize;
  Rgb fg = kBlack;
  double rotation_deg = 0.0;
  bool visible = true;
};

struct StyledGlyph {
  char32_t cp = 0;
  GlyphStyle style;
  bool is_space() const { return cp == U' '; }
};

/// Half-open range of glyph indices forming one layout unit: a word for
/// English, a single character for Chinese. Units never contain spaces.
struct TextUnit {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Horizontal lines drawn across the laid-out picture, at
/// floor(fraction * height).
struct StrikeOverlay {
  std::vector<double> row_fractions;
  Rgb color = kBlack;
};

/// Seed text after character-level styling and before layout.
struct StyledText {
  std::vector<FontProvider> fonts;
  std::vector<StyledGlyph> glyphs;  // spaces included, one glyph per codepoint
  std::vector<TextUnit> units;
  Language language = Language::English;
  int padding = kDefaultPadding;
  Rgb bg = kWhite;
  std::vector<StrikeOverlay> overlays;

  /// Throws InvalidTextError for empty text and GlyphCoverageError for
  /// codepoints missing from the font.
  static StyledText from_text(std::string_view utf8, Language lang, const RenderSettings& settings);

  std::u32string unit_text(const TextUnit& u) const;
  /// Ordinal of glyph `i` among non-space glyphs.
  std::vector<int> glyph_ordinals() const;
  const FontProvider& font_of(const StyledGlyph& g) const { return fonts.at(g.style.font); }
  int advance(const StyledGlyph& g) const {
    return font_of(g).scaled_cell_width(g.style.size);
  }

  /// Recomputes `units` from the glyph sequence and language.
  void rebuild_units();
};

struct Rendering {
  Canvas canvas;
  GlyphLedger ledger;
};

// ---------------------------------------------------------------------------
// Layout primitives shared by the perturbations.

struct Extent {
  int width = 0;
  int height = 0;
};

/// Width is the sum of advances, height the tallest glyph in [begin, end).
Extent measure_glyphs(const StyledText& doc, std::size_t begin, std::size_t end);

/// Draws glyphs [begin, end) left to right starting at (x, y), bottom-aligned
/// in a line of `line_height`. Ink is painted with Darken. Visible glyphs
/// are appended to `ledger` with clamped boxes.
void draw_glyphs(Canvas& canvas, GlyphLedger& ledger, const StyledText& doc, std::size_t begin,
                 std::size_t end, int x, int y, int line_height);

/// One-line layout of the whole glyph sequence with the document padding.
Rendering layout_line(const StyledText& doc);

/// Draws each overlay onto the canvas.
void apply_overlays(Canvas& canvas, const std::vector<StrikeOverlay>& overlays);

/// Plain one-line render: canvas width = 2*padding + n*scaled_cell_width,
/// height = 2*padding + size.
Rendering render_line(std::string_view utf8, const FontProvider& font, int size, Rgb fg = kBlack,
                      Rgb bg = kWhite, int padding = kDefaultPadding);

/// Appends `src` shifted by (dx, dy), continuing the render order of `dst`.
void append_ledger(GlyphLedger& dst, const GlyphLedger& src, int dx, int dy);

/// Clamps every box to the canvas; boxes that fall outside shrink to zero area
/// at the nearest edge.
void clamp_ledger(GlyphLedger& ledger, int width, int height);

}  // namespace mtmod
