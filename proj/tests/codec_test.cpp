#include "mtmod/codec.hpp"

#include <random>

#include <gtest/gtest.h>

#include "mtmod/error.hpp"

namespace mtmod {
namespace {

Canvas random_canvas(int w, int h, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Canvas c(w, h);
  for (auto& b : c.bytes()) b = static_cast<std::uint8_t>(gen());
  return c;
}

Canvas palette_canvas(int w, int h, int colors, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Rgb> pal;
  for (int i = 0; i < colors; ++i)
    pal.push_back({static_cast<std::uint8_t>(gen()), static_cast<std::uint8_t>(gen()),
                   static_cast<std::uint8_t>(gen())});
  Canvas c(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) c.set(x, y, pal[gen() % pal.size()]);
  return c;
}

TEST(Png, RoundTrip) {
  Canvas c = random_canvas(37, 19, 1);
  Bytes png = encode_png(c);
  EXPECT_EQ(sniff_format(png), ImageFormat::Png);
  EXPECT_EQ(decode_png(png), c);
}

TEST(Png, EncodingIsDeterministic) {
  Canvas c = random_canvas(20, 20, 2);
  EXPECT_EQ(encode_png(c), encode_png(c));
}

TEST(Png, GarbageIsDecodeError) {
  Bytes junk{1, 2, 3, 4, 5};
  EXPECT_THROW(decode_png(junk), DecodeError);
  EXPECT_THROW(sniff_format(junk), DecodeError);
}

TEST(Gif, TwoFramesLoopForever) {
  std::vector<Canvas> frames{palette_canvas(30, 12, 5, 3), palette_canvas(30, 12, 7, 4)};
  GifEncoding enc = encode_gif(frames, 10);
  EXPECT_FALSE(enc.quantized);
  EXPECT_EQ(sniff_format(enc.bytes), ImageFormat::Gif);
  GifAnimation anim = decode_gif(enc.bytes);
  ASSERT_EQ(anim.frames.size(), 2u);
  EXPECT_EQ(anim.frames[0], frames[0]);
  EXPECT_EQ(anim.frames[1], frames[1]);
  EXPECT_EQ(anim.loop_count, 0);
  EXPECT_EQ(anim.delays_cs, (std::vector<int>{1, 1}));
}

TEST(Gif, ExactFor256Colors) {
  std::vector<Canvas> frames{palette_canvas(64, 64, 256, 5)};
  GifEncoding enc = encode_gif(frames, 40);
  EXPECT_FALSE(enc.quantized);
  GifAnimation anim = decode_gif(enc.bytes);
  EXPECT_EQ(anim.frames[0], frames[0]);
  EXPECT_EQ(anim.delays_cs[0], 4);
}

TEST(Gif, QuantizesBeyond256Colors) {
  std::vector<Canvas> frames{random_canvas(40, 40, 6)};
  GifEncoding enc = encode_gif(frames, 10);
  EXPECT_TRUE(enc.quantized);
  GifAnimation anim = decode_gif(enc.bytes);
  ASSERT_EQ(anim.frames.size(), 1u);
  // Snapped to a 6x7x6 cube: each channel within half a step.
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x) {
      Rgb a = frames[0].at(x, y), b = anim.frames[0].at(x, y);
      EXPECT_LE(std::abs(a.r - b.r), 26);
      EXPECT_LE(std::abs(a.g - b.g), 22);
      EXPECT_LE(std::abs(a.b - b.b), 26);
    }
}

TEST(Gif, DelayRoundsToCentiseconds) {
  std::vector<Canvas> frames{Canvas(2, 2)};
  EXPECT_EQ(decode_gif(encode_gif(frames, 0).bytes).delays_cs[0], 1);
  EXPECT_EQ(decode_gif(encode_gif(frames, 14).bytes).delays_cs[0], 1);
  EXPECT_EQ(decode_gif(encode_gif(frames, 15).bytes).delays_cs[0], 2);
  EXPECT_EQ(decode_gif(encode_gif(frames, 1000).bytes).delays_cs[0], 100);
}

TEST(Gif, LargeFrameLzwRoundTrip) {
  // Long runs and many distinct codes exercise code-size growth and resets.
  Canvas c = palette_canvas(300, 200, 200, 7);
  for (int x = 0; x < 300; ++x) c.set(x, 5, kBlack);
  std::vector<Canvas> frames{c};
  EXPECT_EQ(decode_gif(encode_gif(frames).bytes).frames[0], c);
}

TEST(Gif, RejectsNoFrames) {
  std::vector<Canvas> none;
  EXPECT_THROW(encode_gif(none), ParamError);
}

TEST(Gif, RejectsMismatchedFrames) {
  std::vector<Canvas> frames{Canvas(2, 2), Canvas(3, 2)};
  EXPECT_THROW(encode_gif(frames), ParamError);
}

TEST(Gif, TruncatedIsDecodeError) {
  std::vector<Canvas> frames{palette_canvas(20, 20, 9, 8)};
  Bytes b = encode_gif(frames).bytes;
  b.resize(b.size() / 2);
  EXPECT_THROW(decode_gif(b), DecodeError);
}

TEST(Codec, DecodeFramesDispatches) {
  Canvas c = palette_canvas(6, 4, 3, 9);
  EXPECT_EQ(decode_frames(encode_png(c)).size(), 1u);
  std::vector<Canvas> frames{c, c, c};
  EXPECT_EQ(decode_frames(encode_gif(frames).bytes).size(), 3u);
}

}  // namespace
}  // namespace mtmod
