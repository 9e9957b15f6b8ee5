#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mtmod/canvas.hpp"

namespace mtmod {

/// Monospaced bitmap font. Every glyph occupies a cell of cell_width by
/// cell_height bits; narrower source glyphs are centered in the cell.
class BitmapFont {
 public:
  BitmapFont(std::string name, int cell_width, int cell_height,
             std::map<char32_t, std::vector<std::uint8_t>> glyphs);

  /// Parses GNU Unifont ".hex" text: `XXXX:` followed by 32 (8x16) or 64
  /// (16x16) hex digits per line.
  static BitmapFont from_hex(std::string name, std::string_view hex);
  static BitmapFont load_hex_file(const std::filesystem::path& path);

  /// 8x16 printable ASCII, compiled into the binary.
  static std::shared_ptr<const BitmapFont> bundled();

  const std::string& name() const { return name_; }
  int cell_width() const { return cell_width_; }
  int cell_height() const { return cell_height_; }
  bool covers(char32_t cp) const { return glyphs_.contains(cp); }

  /// cell_width * cell_height bytes, 1 for ink. Throws GlyphCoverageError.
  const std::vector<std::uint8_t>& bitmap(char32_t cp) const;

 private:
  std::string name_;
  int cell_width_;
  int cell_height_;
  std::map<char32_t, std::vector<std::uint8_t>> glyphs_;
};

enum class FontStyle { Regular, Oblique };

/// A rasterized glyph: `mask` drawn with its left edge `dx` pixels from the
/// cell's left edge (negative when oblique shear leans past the cell).
struct GlyphImage {
  Mask mask;
  int dx = 0;
  int cell_width = 0;
  int cell_height = 0;
};

/// A font plus the style transform applied when rasterizing.
class FontProvider {
 public:
  explicit FontProvider(std::shared_ptr<const BitmapFont> font, FontStyle style = FontStyle::Regular,
                        double shear_deg = 0.0);

  static FontProvider bundled();
  FontProvider oblique(double shear_deg) const;

  std::string name() const;
  FontStyle style() const { return style_; }
  double shear_deg() const { return shear_deg_; }
  int cell_width() const { return font_->cell_width(); }
  int cell_height() const { return font_->cell_height(); }
  bool covers(char32_t cp) const { return cp == U' ' || font_->covers(cp); }

  /// Cell dimensions after scaling to a cell height of `size` pixels.
  int scaled_cell_width(int size) const;
  int scaled_cell_height(int size) const { return size; }

  /// Nearest-neighbor scaled glyph, sheared when oblique. Throws
  /// GlyphCoverageError for uncovered codepoints.
  GlyphImage rasterize(char32_t cp, int size) const;

  bool operator==(const FontProvider& o) const {
    return font_ == o.font_ && style_ == o.style_ && shear_deg_ == o.shear_deg_;
  }

 private:
  std::shared_ptr<const BitmapFont> font_;
  FontStyle style_;
  double shear_deg_;
};

}  // namespace mtmod
