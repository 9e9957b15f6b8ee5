#pragma once

// Paragraph-level relations: alternative layouts of unmodified glyphs.

#include <string>
#include <vector>

#include "mtmod/mr.hpp"
#include "mtmod/rng.hpp"

namespace mtmod::mr {

struct CircleParams {
  bool tangential = false;  // rotate units along the circle instead of upright

  static CircleParams from_json(const json& j);
  json to_json() const;
};

/// Unit i is centered at angle -90 + 360 * i / n degrees (clockwise from the
/// top) on a circle of radius sum(unit widths) / (2 pi) + line height.
Rendering circle(const StyledText& doc, const CircleParams& p, json& aux);

/// Each unit as its own padded line, stacked and horizontally centered.
Rendering vertical(const StyledText& doc);

/// Words in reverse order (English) or characters in reverse order (Chinese).
StyledText reversed_units(const StyledText& doc);
Rendering right_to_left(const StyledText& doc);

/// One unit per line, alternating left-aligned and right-aligned.
Rendering align_alternate(const StyledText& doc);

struct WordCloudParams {
  double min_coverage = 0.6;
  int mask_size = 192;
  std::vector<int> word_sizes{16, 12, 8, 6, 4};

  static WordCloudParams from_json(const json& j);
  json to_json() const;
};

struct WordCloud {
  Rendering rendering;
  Mask mask;                        // ink of the large seed text
  std::vector<Rect> word_boxes;     // placed benign words
  std::vector<std::string> words;
  double coverage = 0.0;            // mask pixels under a word box / mask pixels
};

/// Fills the outline of the seed text, rasterized at `mask_size`, with small
/// benign words. Throws CloudInfeasibleError when min_coverage > 0 and no
/// word fits at all.
WordCloud word_cloud(const StyledText& doc, const WordCloudParams& p,
                     const std::vector<std::string>& benign_words, Rng& rng);

struct OverlapParams {
  double overlap = 0.3;

  static OverlapParams from_json(const json& j);
  json to_json() const;
};

/// Unit i starts at padding + round((1 - overlap) * sum of earlier advances),
/// where a unit's advance includes its trailing space.
Rendering overlap(const StyledText& doc, const OverlapParams& p);

struct BenignTextParams {
  int words_between = 2;
  int stroke = 2;
  Rgb color{255, 0, 0};

  static BenignTextParams from_json(const json& j);
  json to_json() const;
};

struct BenignText {
  Rendering rendering;
  std::vector<Rect> original_units;
  std::vector<std::string> inserted;
  std::size_t rendered_units = 0;
};

/// Inserts benign words between consecutive units and circles the original
/// units with an elliptical ring.
BenignText benign_text(const StyledText& doc, const BenignTextParams& p,
                       const std::vector<std::string>& benign_words, Rng& rng);

/// Union of the ledger boxes of glyphs in [first, first + count).
Rect ledger_union(const GlyphLedger& ledger, std::size_t first, std::size_t count);

}  // namespace mtmod::mr
