#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mtmod/canvas.hpp"

namespace mtmod {

using Bytes = std::vector<std::uint8_t>;

Bytes encode_png(const Canvas& c);
Canvas decode_png(std::span<const std::uint8_t> bytes);

inline constexpr int kDefaultGifDelayMs = 10;

struct GifEncoding {
  Bytes bytes;
  /// True when the frames held more than 256 distinct colors and were
  /// snapped to a fixed 6x7x6 color cube.
  bool quantized = false;
};

/// Animated GIF89a with a NETSCAPE2.0 infinite loop. Delays are stored in
/// hundredths of a second, rounded, minimum 1.
GifEncoding encode_gif(std::span<const Canvas> frames, int frame_delay_ms = kDefaultGifDelayMs);

struct GifAnimation {
  std::vector<Canvas> frames;
  std::vector<int> delays_cs;
  int loop_count = -1;  // -1: no NETSCAPE extension, 0: forever
};

GifAnimation decode_gif(std::span<const std::uint8_t> bytes);

enum class ImageFormat { Png, Gif };
std::string_view to_string(ImageFormat f);

/// Sniffs the signature. Throws DecodeError for anything else.
ImageFormat sniff_format(std::span<const std::uint8_t> bytes);

/// Every frame of a PNG (one) or GIF (one or more).
std::vector<Canvas> decode_frames(std::span<const std::uint8_t> bytes);

}  // namespace mtmod
