#include "mtmod/mr_picture.hpp"

#include <algorithm>
#include <cmath>

#include "mtmod/error.hpp"
#include "mtmod/unicode.hpp"
#include "params.hpp"

namespace mtmod::mr {

using detail::color_json;
using detail::ParamReader;

BlurParams BlurParams::from_json(const json& j) {
  ParamReader r("blur", j);
  BlurParams p;
  p.k = r.integer("k", p.k, 1, 99);
  if (p.k % 2 == 0) r.fail("k", "must be odd");
  r.finish();
  return p;
}
json BlurParams::to_json() const { return {{"k", k}}; }

Rendering blurring(Rendering in, const BlurParams& p) {
  in.canvas = blur_mean(in.canvas, p.k);
  return in;
}

CropParams CropParams::from_json(const json& j) {
  ParamReader r("crop", j);
  CropParams p;
  p.keep_top_fraction = r.number("keep_top_fraction", p.keep_top_fraction, 0.0, 1.0);
  if (p.keep_top_fraction <= 0.0) r.fail("keep_top_fraction", "must be greater than 0");
  r.finish();
  return p;
}
json CropParams::to_json() const { return {{"keep_top_fraction", keep_top_fraction}}; }

int kept_rows(double fraction, int height) {
  return std::clamp(static_cast<int>(std::ceil(fraction * height - 1e-9)), 0, height);
}

Rendering crop_chars(Rendering in, const CropParams& p, Rgb bg) {
  for (const GlyphPlacement& g : in.ledger) {
    const int keep = kept_rows(p.keep_top_fraction, g.bbox.h);
    in.canvas.fill_rect({g.bbox.x, g.bbox.y + keep, g.bbox.w, g.bbox.h - keep}, bg);
  }
  return in;
}

Rendering mirror(Rendering in) {
  in.canvas = mirror_canvas(in.canvas);
  for (GlyphPlacement& g : in.ledger) g.bbox.x = in.canvas.width() - g.bbox.right();
  return in;
}

RotationParams RotationParams::from_json(const json& j) {
  ParamReader r("rotation", j);
  RotationParams p;
  p.degrees = r.number("degrees", p.degrees, -3600.0, 3600.0);
  r.finish();
  return p;
}
json RotationParams::to_json() const { return {{"degrees", degrees}}; }

Rendering rotation(Rendering in, const RotationParams& p) {
  const int w = in.canvas.width(), h = in.canvas.height();
  in.canvas = rotate_canvas(in.canvas, p.degrees, kWhite);
  for (GlyphPlacement& g : in.ledger) {
    g.bbox = rotate_rect(g.bbox, w, h, p.degrees);
    g.rotation_deg += p.degrees;
  }
  clamp_ledger(in.ledger, in.canvas.width(), in.canvas.height());
  return in;
}

ScribbleParams ScribbleParams::from_json(const json& j) {
  ParamReader r("scribble", j);
  ScribbleParams p;
  p.stroke_count = r.integer("stroke_count", p.stroke_count, 0, 1000);
  p.thickness = r.integer("thickness", p.thickness, 1, 32);
  r.finish();
  return p;
}
json ScribbleParams::to_json() const { return {{"stroke_count", stroke_count}, {"thickness", thickness}}; }

Rendering scribble(Rendering in, const ScribbleParams& p, Rng& rng) {
  if (p.stroke_count == 0) return in;
  const int w = in.canvas.width(), h = in.canvas.height();
  Canvas marks(w, h, kWhite);
  for (int s = 0; s < p.stroke_count; ++s) {
    const int points = static_cast<int>(rng.uniform_int(4, 8));
    int px = static_cast<int>(rng.uniform_int(0, w - 1)), py = static_cast<int>(rng.uniform_int(0, h - 1));
    for (int i = 1; i < points; ++i) {
      const int nx = static_cast<int>(rng.uniform_int(0, w - 1)), ny = static_cast<int>(rng.uniform_int(0, h - 1));
      draw_line(marks, px, py, nx, ny, p.thickness, kBlack);
      px = nx;
      py = ny;
    }
  }
  in.canvas = composite(in.canvas, marks, 0, 0, Darken{});
  return in;
}

DistortParams DistortParams::from_json(const json& j) {
  ParamReader r("distort", j);
  DistortParams p;
  p.sx = r.number("sx", p.sx, 0.01, 16.0);
  p.sy = r.number("sy", p.sy, 0.01, 16.0);
  p.bend_amp_frac = r.number("bend_amp_frac", p.bend_amp_frac, 0.0, 1.0);
  r.finish();
  return p;
}
json DistortParams::to_json() const { return {{"sx", sx}, {"sy", sy}, {"bend_amp_frac", bend_amp_frac}}; }

int bend_shift(int y, int width, int height, double amp) {
  return static_cast<int>(std::lround(amp * width * std::sin(2.0 * M_PI * y / height)));
}

Rendering distort(Rendering in, const DistortParams& p) {
  const int w0 = in.canvas.width(), h0 = in.canvas.height();
  const Canvas stretched = resize_nonuniform(in.canvas, p.sx, p.sy);
  const int w = stretched.width(), h = stretched.height();
  Canvas out(w, h, kWhite);
  for (int y = 0; y < h; ++y) {
    const int shift = bend_shift(y, w, h, p.bend_amp_frac);
    for (int x = std::max(0, shift); x < std::min(w, w + shift); ++x) out.set(x, y, stretched.at(x - shift, y));
  }
  in.canvas = std::move(out);
  // Boxes follow the stretch; the bend moves them by at most amp * W.
  for (GlyphPlacement& g : in.ledger) {
    const int x0 = static_cast<int>(std::floor(static_cast<double>(g.bbox.x) * w / w0));
    const int y0 = static_cast<int>(std::floor(static_cast<double>(g.bbox.y) * h / h0));
    const int x1 = static_cast<int>(std::ceil(static_cast<double>(g.bbox.right()) * w / w0));
    const int y1 = static_cast<int>(std::ceil(static_cast<double>(g.bbox.bottom()) * h / h0));
    g.bbox = {x0, y0, x1 - x0, y1 - y0};
  }
  clamp_ledger(in.ledger, w, h);
  return in;
}

WatermarkParams WatermarkParams::from_json(const json& j) {
  ParamReader r("watermark", j);
  WatermarkParams p;
  p.angle_deg = r.number("angle_deg", p.angle_deg, -360.0, 360.0);
  p.alpha = r.number("alpha", p.alpha, 0.0, 1.0);
  p.color = r.color("color", p.color);
  p.text_size = r.integer("text_size", p.text_size, 4, 128);
  r.finish();
  return p;
}
json WatermarkParams::to_json() const {
  return {{"angle_deg", angle_deg}, {"alpha", alpha}, {"color", color_json(color)}, {"text_size", text_size}};
}

Rendering watermark(Rendering in, const WatermarkParams& p, const std::vector<std::string>& benign_words, Rng& rng) {
  if (p.alpha == 0.0) return in;
  const int w = in.canvas.width(), h = in.canvas.height();
  const FontProvider font = FontProvider::bundled();
  std::vector<std::u32string> pool;
  for (const std::string& word : benign_words) {
    std::u32string cps = unicode::decode_utf8(word);
    if (!cps.empty() && std::all_of(cps.begin(), cps.end(), [&](char32_t c) { return c != U' ' && font.covers(c); }))
      pool.push_back(std::move(cps));
  }
  if (pool.empty()) throw ConfigError("watermark needs a non-empty benign lexicon");

  // A square layer large enough to cover the picture at any angle, filled
  // with rows of words, turned, then cut back to the picture's size.
  const int side = static_cast<int>(std::ceil(std::hypot(w, h))) + 2 * p.text_size;
  const int cw = font.scaled_cell_width(p.text_size);
  StyledText line;
  line.fonts = {font};
  Canvas layer(side, side, kWhite);
  GlyphLedger unused;
  for (int y = 0; y + p.text_size <= side; y += 2 * p.text_size) {
    line.glyphs.clear();
    int x = -static_cast<int>(rng.uniform_int(0, 4LL * cw));
    const int start = x;
    while (x < side) {
      const std::u32string& word = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
      for (char32_t c : word) line.glyphs.push_back({c, GlyphStyle{0, p.text_size, p.color, 0.0, true}});
      line.glyphs.push_back({U' ', GlyphStyle{0, p.text_size, p.color, 0.0, true}});
      x += cw * static_cast<int>(word.size() + 1);
    }
    draw_glyphs(layer, unused, line, 0, line.glyphs.size(), start, y, p.text_size);
  }
  const Canvas turned = rotate_canvas(layer, p.angle_deg, kWhite);
  const Canvas tile = crop_rect(turned, {(turned.width() - w) / 2, (turned.height() - h) / 2, w, h});
  Mask where(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) where.set(x, y, tile.at(x, y) != kWhite);
  in.canvas = composite_masked(in.canvas, tile, where, 0, 0, p.alpha);
  return in;
}

ToGifParams ToGifParams::from_json(const json& j) {
  ParamReader r("to-gif", j);
  ToGifParams p;
  p.frame_delay_ms = r.integer("frame_delay_ms", p.frame_delay_ms, 0, 655350);
  r.finish();
  return p;
}
json ToGifParams::to_json() const { return {{"frame_delay_ms", frame_delay_ms}}; }

BenignImageParams BenignImageParams::from_json(const json& j) {
  ParamReader r("benign-image", j);
  BenignImageParams p;
  p.pad_images = r.integer("pad_images", p.pad_images, 0, 16);
  r.finish();
  return p;
}
json BenignImageParams::to_json() const { return {{"pad_images", pad_images}}; }

Canvas gradient_image(int width, int height, Rng& rng) {
  auto light = [&] {
    return Rgb{static_cast<std::uint8_t>(rng.uniform_int(128, 255)), static_cast<std::uint8_t>(rng.uniform_int(128, 255)),
               static_cast<std::uint8_t>(rng.uniform_int(128, 255))};
  };
  const Rgb top = light(), bottom = light(), side = light();
  auto mix = [](double a, double b, double t) { return a + (b - a) * t; };
  Canvas c(width, height);
  for (int y = 0; y < height; ++y) {
    const double ty = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
    for (int x = 0; x < width; ++x) {
      const double tx = width > 1 ? 0.3 * x / (width - 1) : 0.0;
      auto ch = [&](std::uint8_t a, std::uint8_t b, std::uint8_t s) {
        return static_cast<std::uint8_t>(std::lround(mix(mix(a, b, ty), s, tx)));
      };
      c.set(x, y, {ch(top.r, bottom.r, side.r), ch(top.g, bottom.g, side.g), ch(top.b, bottom.b, side.b)});
    }
  }
  return c;
}

BenignImageResult benign_image(Rendering in, const BenignImageParams& p, const std::vector<Canvas>& supplied,
                               Rng& rng) {
  BenignImageResult out{std::move(in), 0, {}};
  if (p.pad_images == 0) return out;
  const int w = out.rendering.canvas.width();
  auto make = [&] {
    if (!supplied.empty()) {
      const Canvas& src = supplied[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(supplied.size()) - 1))];
      const int h = std::max(1, static_cast<int>(std::lround(static_cast<double>(src.height()) * w / src.width())));
      return resize_to(src, w, h);
    }
    const int lo = std::max(16, w / 4), hi = std::max(16, w / 2);
    return gradient_image(w, static_cast<int>(rng.uniform_int(lo, hi)), rng);
  };
  const int above = (p.pad_images + 1) / 2, below = p.pad_images / 2;
  std::vector<Canvas> parts;
  for (int i = 0; i < above; ++i) {
    parts.push_back(make());
    out.toxic_offset_y += parts.back().height();
  }
  parts.push_back(out.rendering.canvas);
  for (int i = 0; i < below; ++i) parts.push_back(make());
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (static_cast<int>(i) != above) out.benign_heights.push_back(parts[i].height());
  out.rendering.canvas = stack_vertical(parts, kWhite);
  for (GlyphPlacement& g : out.rendering.ledger) g.bbox.y += out.toxic_offset_y;
  return out;
}

}  // namespace mtmod::mr
