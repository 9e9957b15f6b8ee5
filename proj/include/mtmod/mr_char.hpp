#pragma once

// Character-level relations: perturbations applied while the text is typed.
// Each step restyles a StyledText in place; layout happens later.

#include <vector>

#include "mtmod/mr.hpp"
#include "mtmod/rng.hpp"

namespace mtmod::mr {

struct FontChangeParams {
  double shear_deg = 20.0;  // oblique shear of the synthesized alternate font

  static FontChangeParams from_json(const json& j);
  json to_json() const;
};

/// Switches every glyph to the alternate font: `alternate` when given,
/// otherwise the base font sheared by `shear_deg`.
void font_change(StyledText& doc, const FontChangeParams& p, const FontProvider* alternate,
                 json& aux);

enum class ColorScope { All, Lexicon };

struct FontColorParams {
  Rgb fg{240, 240, 240};
  ColorScope scope = ColorScope::All;

  static FontColorParams from_json(const json& j);
  json to_json() const;
};

void font_color(StyledText& doc, const FontColorParams& p,
                const std::vector<std::string>& lexicon, json& aux);

/// WCAG 2.x relative-luminance contrast ratio, in [1, 21].
double contrast_ratio(Rgb a, Rgb b);

struct FontSizeParams {
  int base_size = 24;
  int small_size = 4;
  /// Explicit unit indices to shrink; empty means lexicon matches, falling
  /// back to one random unit.
  std::vector<int> targets;

  static FontSizeParams from_json(const json& j);
  json to_json() const;
};

void font_size(StyledText& doc, const FontSizeParams& p, const std::vector<std::string>& lexicon,
               Rng& rng, json& aux);

/// Units whose text matches a lexicon word. English compares whole words
/// case-insensitively with surrounding ASCII punctuation stripped; Chinese
/// marks every character of each substring occurrence.
std::vector<std::size_t> lexicon_units(const StyledText& doc,
                                       const std::vector<std::string>& lexicon);

struct StrikethroughParams {
  double first_row = 0.33;
  double second_row = 0.66;

  static StrikethroughParams from_json(const json& j);
  json to_json() const;
};

void strikethrough(StyledText& doc, const StrikethroughParams& p);

/// floor(fraction * height), robust to binary representation error.
int strike_row(double fraction, int height);

struct CharRotationParams {
  double min_deg = -45.0;
  double max_deg = 45.0;

  static CharRotationParams from_json(const json& j);
  json to_json() const;
};

void char_rotation(StyledText& doc, const CharRotationParams& p, Rng& rng, json& aux);

}  // namespace mtmod::mr
