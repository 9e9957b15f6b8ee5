#include "mtmod/font.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mtmod/error.hpp"

namespace mtmod {

namespace {

constexpr const char* kBundledHex =
#include "font_data.inc"
    ;

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

BitmapFont::BitmapFont(std::string name, int cell_width, int cell_height,
                       std::map<char32_t, std::vector<std::uint8_t>> glyphs)
    : name_(std::move(name)), cell_width_(cell_width), cell_height_(cell_height), glyphs_(std::move(glyphs)) {
  if (cell_width < 1 || cell_height < 1) throw ParamError("font cell must be at least 1x1");
  for (const auto& [cp, bits] : glyphs_)
    if (bits.size() != static_cast<std::size_t>(cell_width) * cell_height)
      throw ParamError("glyph bitmap does not match the font cell");
}

BitmapFont BitmapFont::from_hex(std::string name, std::string_view hex) {
  struct Raw {
    int width;
    std::vector<std::uint8_t> bits;  // width x 16
  };
  std::map<char32_t, Raw> raw;
  int cell_w = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < hex.size()) {
    std::size_t nl = hex.find('\n', pos);
    if (nl == std::string_view::npos) nl = hex.size();
    std::string_view line = hex.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos || colon == 0)
      throw ConfigError("font line " + std::to_string(line_no) + ": expected CODEPOINT:BITMAP");
    char32_t cp = 0;
    for (char c : line.substr(0, colon)) {
      const int v = hex_value(c);
      if (v < 0) throw ConfigError("font line " + std::to_string(line_no) + ": bad codepoint");
      cp = cp * 16 + static_cast<char32_t>(v);
    }
    const std::string_view digits = line.substr(colon + 1);
    int width;
    if (digits.size() == 32) {
      width = 8;
    } else if (digits.size() == 64) {
      width = 16;
    } else {
      throw ConfigError("font line " + std::to_string(line_no) + ": bitmap must have 32 or 64 hex digits");
    }
    Raw g{width, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * 16)};
    const int per_row = width / 4;
    for (int y = 0; y < 16; ++y) {
      for (int d = 0; d < per_row; ++d) {
        const int v = hex_value(digits[static_cast<std::size_t>(y * per_row + d)]);
        if (v < 0) throw ConfigError("font line " + std::to_string(line_no) + ": bad hex digit");
        for (int b = 0; b < 4; ++b)
          g.bits[static_cast<std::size_t>(y) * width + d * 4 + b] = (v >> (3 - b)) & 1;
      }
    }
    cell_w = std::max(cell_w, width);
    raw[cp] = std::move(g);
  }
  if (raw.empty()) throw ConfigError("font '" + name + "' has no glyphs");

  std::map<char32_t, std::vector<std::uint8_t>> glyphs;
  for (auto& [cp, g] : raw) {
    std::vector<std::uint8_t> cell(static_cast<std::size_t>(cell_w) * 16, 0);
    const int off = (cell_w - g.width) / 2;
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < g.width; ++x)
        cell[static_cast<std::size_t>(y) * cell_w + off + x] = g.bits[static_cast<std::size_t>(y) * g.width + x];
    glyphs.emplace(cp, std::move(cell));
  }
  return BitmapFont(std::move(name), cell_w, 16, std::move(glyphs));
}

BitmapFont BitmapFont::load_hex_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read font file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_hex(path.stem().string(), buf.str());
}

std::shared_ptr<const BitmapFont> BitmapFont::bundled() {
  static const auto font = std::make_shared<const BitmapFont>(from_hex("bundled-mono-8x16", kBundledHex));
  return font;
}

const std::vector<std::uint8_t>& BitmapFont::bitmap(char32_t cp) const {
  auto it = glyphs_.find(cp);
  if (it == glyphs_.end()) throw GlyphCoverageError(cp);
  return it->second;
}

FontProvider::FontProvider(std::shared_ptr<const BitmapFont> font, FontStyle style, double shear_deg)
    : font_(std::move(font)), style_(style), shear_deg_(style == FontStyle::Oblique ? shear_deg : 0.0) {
  if (!font_) throw ParamError("font provider needs a font");
  if (!(std::abs(shear_deg_) < 80.0)) throw ParamError("oblique shear must be within (-80, 80) degrees");
}

FontProvider FontProvider::bundled() { return FontProvider(BitmapFont::bundled()); }

FontProvider FontProvider::oblique(double shear_deg) const {
  return FontProvider(font_, FontStyle::Oblique, shear_deg);
}

std::string FontProvider::name() const {
  if (style_ == FontStyle::Regular) return font_->name();
  std::ostringstream s;
  s << font_->name() << " oblique " << shear_deg_;
  return s.str();
}

int FontProvider::scaled_cell_width(int size) const {
  const long cw = font_->cell_width(), ch = font_->cell_height();
  return std::max(1, static_cast<int>((2 * cw * size + ch) / (2 * ch)));
}

GlyphImage FontProvider::rasterize(char32_t cp, int size) const {
  if (size < 1) throw ParamError("glyph size must be positive");
  const int w = scaled_cell_width(size), h = size;
  GlyphImage out;
  out.cell_width = w;
  out.cell_height = h;
  if (cp == U' ') {
    out.mask = Mask(w, h);
    return out;
  }
  const auto& src = font_->bitmap(cp);
  const int cw = font_->cell_width(), ch = font_->cell_height();
  Mask scaled(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = static_cast<int>((2L * y + 1) * ch / (2L * h));
    for (int x = 0; x < w; ++x) {
      const int sx = static_cast<int>((2L * x + 1) * cw / (2L * w));
      scaled.set(x, y, src[static_cast<std::size_t>(sy) * cw + sx] != 0);
    }
  }
  if (shear_deg_ == 0.0) {
    out.mask = std::move(scaled);
    return out;
  }
  const double t = std::tan(shear_deg_ * M_PI / 180.0);
  auto shift = [&](int y) { return static_cast<int>(std::lround((h / 2.0 - (y + 0.5)) * t)); };
  int max_shift = 0;
  for (int y = 0; y < h; ++y) max_shift = std::max(max_shift, std::abs(shift(y)));
  Mask sheared(w + 2 * max_shift, h);
  for (int y = 0; y < h; ++y) {
    const int s = shift(y) + max_shift;
    for (int x = 0; x < w; ++x)
      if (scaled.at(x, y)) sheared.set(x + s, y);
  }
  out.mask = std::move(sheared);
  out.dx = -max_shift;
  return out;
}

}  // namespace mtmod
