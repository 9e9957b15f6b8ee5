#include "mtmod/mr_char.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "mtmod/error.hpp"
#include "mtmod/unicode.hpp"
#include "params.hpp"

namespace mtmod::mr {

using detail::color_json;
using detail::ParamReader;

FontChangeParams FontChangeParams::from_json(const json& j) {
  ParamReader r("font-change", j);
  FontChangeParams p;
  p.shear_deg = r.number("shear_deg", p.shear_deg, -60.0, 60.0);
  r.finish();
  return p;
}

json FontChangeParams::to_json() const { return {{"shear_deg", shear_deg}}; }

void font_change(StyledText& doc, const FontChangeParams& p, const FontProvider* alternate, json& aux) {
  const FontProvider font = alternate != nullptr ? *alternate : doc.fonts.at(0).oblique(p.shear_deg);
  for (const StyledGlyph& g : doc.glyphs)
    if (!font.covers(g.cp)) throw GlyphCoverageError(g.cp);
  doc.fonts.push_back(font);
  const int index = static_cast<int>(doc.fonts.size()) - 1;
  for (StyledGlyph& g : doc.glyphs) g.style.font = index;
  aux["font"] = font.name();
}

FontColorParams FontColorParams::from_json(const json& j) {
  ParamReader r("font-color", j);
  FontColorParams p;
  p.fg = r.color("fg", p.fg);
  p.scope = r.choice("scope", "all", {"all", "lexicon"}) == "all" ? ColorScope::All : ColorScope::Lexicon;
  r.finish();
  return p;
}

json FontColorParams::to_json() const {
  return {{"fg", color_json(fg)}, {"scope", scope == ColorScope::All ? "all" : "lexicon"}};
}

namespace {

double luminance(Rgb c) {
  auto lin = [](std::uint8_t v) {
    const double s = v / 255.0;
    return s <= 0.03928 ? s / 12.92 : std::pow((s + 0.055) / 1.055, 2.4);
  };
  return 0.2126 * lin(c.r) + 0.7152 * lin(c.g) + 0.0722 * lin(c.b);
}

}  // namespace

double contrast_ratio(Rgb a, Rgb b) {
  const double la = luminance(a), lb = luminance(b);
  return (std::max(la, lb) + 0.05) / (std::min(la, lb) + 0.05);
}

void font_color(StyledText& doc, const FontColorParams& p, const std::vector<std::string>& lexicon, json& aux) {
  std::size_t recolored = 0;
  auto paint = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      doc.glyphs[i].style.fg = p.fg;
      if (!doc.glyphs[i].is_space()) ++recolored;
    }
  };
  std::vector<std::size_t> targets;
  if (p.scope == ColorScope::Lexicon) targets = lexicon_units(doc, lexicon);
  if (targets.empty()) {
    // No lexicon hit: the whole text is the only sensible target.
    paint(0, doc.glyphs.size());
  } else {
    for (std::size_t u : targets) paint(doc.units[u].begin, doc.units[u].end);
  }
  aux["fg"] = color_json(p.fg);
  aux["contrast_ratio"] = contrast_ratio(p.fg, doc.bg);
  aux["glyphs"] = recolored;
}

FontSizeParams FontSizeParams::from_json(const json& j) {
  ParamReader r("font-size", j);
  FontSizeParams p;
  p.base_size = r.integer("base_size", p.base_size, 1, 512);
  p.small_size = r.integer("small_size", p.small_size, 1, 512);
  p.targets = r.int_list("targets", p.targets, 0, 1 << 20);
  r.finish();
  return p;
}

json FontSizeParams::to_json() const {
  return {{"base_size", base_size}, {"small_size", small_size}, {"targets", targets}};
}

std::vector<std::size_t> lexicon_units(const StyledText& doc, const std::vector<std::string>& lexicon) {
  auto lower = [](std::u32string s) {
    for (char32_t& c : s)
      if (c >= U'A' && c <= U'Z') c += 32;
    return s;
  };
  std::vector<std::u32string> words;
  for (const std::string& w : lexicon) {
    std::u32string d = lower(unicode::decode_utf8(w));
    if (!d.empty()) words.push_back(std::move(d));
  }
  std::vector<std::size_t> out;
  if (doc.language == Language::English) {
    const std::set<std::u32string> set(words.begin(), words.end());
    auto punct = [](char32_t c) { return c < 128 && std::ispunct(static_cast<int>(c)); };
    for (std::size_t u = 0; u < doc.units.size(); ++u) {
      std::u32string t = lower(doc.unit_text(doc.units[u]));
      std::size_t a = 0, b = t.size();
      while (a < b && punct(t[a])) ++a;
      while (b > a && punct(t[b - 1])) --b;
      if (a < b && set.contains(t.substr(a, b - a))) out.push_back(u);
    }
    return out;
  }
  // Chinese: every unit is one glyph; match lexicon words as substrings of the
  // non-space glyph sequence.
  std::u32string seq;
  for (const TextUnit& u : doc.units) seq.push_back(doc.glyphs[u.begin].cp);
  seq = lower(seq);
  std::vector<bool> hit(seq.size(), false);
  for (const std::u32string& w : words)
    for (std::size_t pos = seq.find(w); pos != std::u32string::npos; pos = seq.find(w, pos + 1))
      std::fill(hit.begin() + pos, hit.begin() + pos + w.size(), true);
  for (std::size_t u = 0; u < hit.size(); ++u)
    if (hit[u]) out.push_back(u);
  return out;
}

void font_size(StyledText& doc, const FontSizeParams& p, const std::vector<std::string>& lexicon, Rng& rng,
               json& aux) {
  std::vector<std::size_t> targets;
  for (int t : p.targets) {
    if (static_cast<std::size_t>(t) >= doc.units.size())
      throw ParamError("font-size.targets: unit index " + std::to_string(t) + " out of range");
    targets.push_back(static_cast<std::size_t>(t));
  }
  if (p.targets.empty()) targets = lexicon_units(doc, lexicon);
  if (targets.empty() && !doc.units.empty())
    targets.push_back(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(doc.units.size()) - 1)));
  for (StyledGlyph& g : doc.glyphs) g.style.size = p.base_size;
  for (std::size_t u : targets)
    for (std::size_t i = doc.units[u].begin; i < doc.units[u].end; ++i) doc.glyphs[i].style.size = p.small_size;
  aux["targets"] = targets;
  aux["base_size"] = p.base_size;
  aux["small_size"] = p.small_size;
}

StrikethroughParams StrikethroughParams::from_json(const json& j) {
  ParamReader r("strikethrough", j);
  StrikethroughParams p;
  p.first_row = r.number("first_row", p.first_row, 0.0, 0.999999);
  p.second_row = r.number("second_row", p.second_row, 0.0, 0.999999);
  r.finish();
  return p;
}

json StrikethroughParams::to_json() const { return {{"first_row", first_row}, {"second_row", second_row}}; }

int strike_row(double fraction, int height) {
  return std::clamp(static_cast<int>(std::floor(fraction * height + 1e-9)), 0, std::max(0, height - 1));
}

void strikethrough(StyledText& doc, const StrikethroughParams& p) {
  doc.overlays.push_back({{p.first_row, p.second_row}, kBlack});
}

CharRotationParams CharRotationParams::from_json(const json& j) {
  ParamReader r("char-rotation", j);
  CharRotationParams p;
  p.min_deg = r.number("min_deg", p.min_deg, -180.0, 180.0);
  p.max_deg = r.number("max_deg", p.max_deg, -180.0, 180.0);
  if (p.min_deg > p.max_deg) r.fail("min_deg", "must not exceed max_deg");
  r.finish();
  return p;
}

json CharRotationParams::to_json() const { return {{"min_deg", min_deg}, {"max_deg", max_deg}}; }

void char_rotation(StyledText& doc, const CharRotationParams& p, Rng& rng, json& aux) {
  json angles = json::array();
  for (StyledGlyph& g : doc.glyphs) {
    if (g.is_space()) continue;
    g.style.rotation_deg = rng.uniform(p.min_deg, p.max_deg);
    angles.push_back(g.style.rotation_deg);
  }
  aux["angles"] = std::move(angles);
}

}  // namespace mtmod::mr
