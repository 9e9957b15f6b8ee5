#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace mtmod {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kWhite{255, 255, 255};
inline constexpr Rgb kBlack{0, 0, 0};

struct Rect {
  int x = 0, y = 0, w = 0, h = 0;
  bool operator==(const Rect&) const = default;
  int right() const { return x + w; }
  int bottom() const { return y + h; }
  bool intersects(const Rect& o) const {
    return x < o.right() && o.x < right() && y < o.bottom() && o.y < bottom();
  }
};

/// Row-major interleaved RGB raster with a top-left origin.
class Canvas {
 public:
  Canvas(int width, int height, Rgb fill = kWhite);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  Rgb at(int x, int y) const {
    const std::uint8_t* p = &data_[offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) {
    std::uint8_t* p = &data_[offset(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::span<std::uint8_t> row(int y) {
    return {data_.data() + offset(0, y), static_cast<std::size_t>(width_) * 3};
  }
  std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + offset(0, y), static_cast<std::size_t>(width_) * 3};
  }
  std::span<const std::uint8_t> bytes() const { return data_; }
  std::span<std::uint8_t> bytes() { return data_; }

  void fill_rect(Rect r, Rgb c);

  bool operator==(const Canvas&) const = default;

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

/// One drawn glyph as recorded by layout. Spaces are never recorded.
struct GlyphPlacement {
  char32_t codepoint = 0;
  Rect bbox;
  double rotation_deg = 0.0;
  int render_order = 0;
  bool operator==(const GlyphPlacement&) const = default;
};

using GlyphLedger = std::vector<GlyphPlacement>;

/// Binary mask, one byte per pixel (0 or 1).
struct Mask {
  int width = 0, height = 0;
  std::vector<std::uint8_t> bits;

  Mask() = default;
  Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}
  std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
  void set(int x, int y, bool v = true) {
    bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;
  bool operator==(const Mask&) const = default;
};

inline constexpr int kInkThreshold = 128;

/// Ink where the brightest channel is below `threshold`.
Mask ink_mask(const Canvas& c, int threshold = kInkThreshold);

// ---------------------------------------------------------------------------
// Raster operations. All are pure: inputs are never modified.

struct Replace {};
struct Darken {};
struct AlphaBlend {
  double alpha = 1.0;
};
using CompositeMode = std::variant<Replace, Darken, AlphaBlend>;

/// Places `overlay` with its top-left at (x, y); out-of-range parts are
/// clipped. AlphaBlend alpha must be in [0, 1].
Canvas composite(const Canvas& base, const Canvas& overlay, int x, int y, CompositeMode mode);

/// AlphaBlend restricted to pixels where `where` is set; `where` has the
/// overlay's dimensions.
Canvas composite_masked(const Canvas& base, const Canvas& overlay, const Mask& where, int x, int y,
                        double alpha);

/// Positive degrees turn the picture clockwise as displayed. Multiples of
/// 90 degrees are exact permutations; other angles resample nearest-neighbor
/// into a bounding box of ceil(W|cos| + H|sin|) by ceil(W|sin| + H|cos|),
/// filling uncovered pixels with `fill`.
Canvas rotate_canvas(const Canvas& c, double degrees, Rgb fill = kWhite);

/// Output size of rotate_canvas for a given input size.
std::pair<int, int> rotated_size(int width, int height, double degrees);

/// Where a box of a width x height canvas lands after rotate_canvas: the
/// exact image for quarter turns, else the bounding box of its corners.
Rect rotate_rect(Rect r, int width, int height, double degrees);

Canvas mirror_canvas(const Canvas& c);

/// Rounded mean over a k-by-k window with clamp-to-edge borders; k odd, >= 1.
Canvas blur_mean(const Canvas& c, int k);

Canvas crop_rect(const Canvas& c, Rect r);

/// Nearest-neighbor scale to max(1, round(W*sx)) by max(1, round(H*sy)).
Canvas resize_nonuniform(const Canvas& c, double sx, double sy);
Canvas resize_to(const Canvas& c, int width, int height);

/// Stacks canvases top to bottom; narrower ones are centered on `fill`.
Canvas stack_vertical(std::span<const Canvas> parts, Rgb fill = kWhite);

void draw_line(Canvas& c, int x0, int y0, int x1, int y1, int thickness, Rgb color);

/// Elliptical ring inscribed in `box`, `stroke` pixels thick, painted with
/// Replace.
void draw_ellipse_ring(Canvas& c, Rect box, int stroke, Rgb color);

}  // namespace mtmod
