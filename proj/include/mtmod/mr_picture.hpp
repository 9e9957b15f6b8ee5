#pragma once

// Picture-level relations: transforms of an already rendered screenshot.
// The glyph ledger follows each geometric change.

#include <vector>

#include "mtmod/mr.hpp"
#include "mtmod/rng.hpp"

namespace mtmod::mr {

struct BlurParams {
  int k = 5;
  static BlurParams from_json(const json& j);
  json to_json() const;
};
Rendering blurring(Rendering in, const BlurParams& p);

struct CropParams {
  double keep_top_fraction = 0.7;
  static CropParams from_json(const json& j);
  json to_json() const;
};
/// ceil(fraction * height), robust to binary representation error.
int kept_rows(double fraction, int height);
/// Blanks the bottom of every glyph box, keeping kept_rows() rows.
Rendering crop_chars(Rendering in, const CropParams& p, Rgb bg);

Rendering mirror(Rendering in);

struct RotationParams {
  double degrees = 45.0;
  static RotationParams from_json(const json& j);
  json to_json() const;
};
Rendering rotation(Rendering in, const RotationParams& p);

struct ScribbleParams {
  int stroke_count = 6;
  int thickness = 2;
  static ScribbleParams from_json(const json& j);
  json to_json() const;
};
Rendering scribble(Rendering in, const ScribbleParams& p, Rng& rng);

struct DistortParams {
  double sx = 1.8;
  double sy = 0.5;
  double bend_amp_frac = 0.05;
  static DistortParams from_json(const json& j);
  json to_json() const;
};
/// Row shift applied by distort: round(amp * width * sin(2 pi y / height)).
int bend_shift(int y, int width, int height, double amp);
Rendering distort(Rendering in, const DistortParams& p);

struct WatermarkParams {
  double angle_deg = 30.0;
  double alpha = 0.35;
  Rgb color{128, 128, 128};
  int text_size = 16;
  static WatermarkParams from_json(const json& j);
  json to_json() const;
};
Rendering watermark(Rendering in, const WatermarkParams& p,
                    const std::vector<std::string>& benign_words, Rng& rng);

struct ToGifParams {
  int frame_delay_ms = 10;
  static ToGifParams from_json(const json& j);
  json to_json() const;
};

struct BenignImageParams {
  int pad_images = 2;
  static BenignImageParams from_json(const json& j);
  json to_json() const;
};

struct BenignImageResult {
  Rendering rendering;
  int toxic_offset_y = 0;
  std::vector<int> benign_heights;
};

/// ceil(n/2) benign pictures above the render and floor(n/2) below, each
/// scaled to the render's width. Supplied images are used in rng order;
/// without any, smooth gradients are synthesized.
BenignImageResult benign_image(Rendering in, const BenignImageParams& p,
                               const std::vector<Canvas>& supplied, Rng& rng);

/// Smooth light gradient of the given size.
Canvas gradient_image(int width, int height, Rng& rng);

}  // namespace mtmod::mr
