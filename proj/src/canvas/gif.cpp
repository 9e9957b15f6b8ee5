#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "mtmod/codec.hpp"
#include "mtmod/error.hpp"

namespace mtmod {

namespace {

constexpr int kMaxCode = 4095;

std::uint32_t pack(Rgb c) { return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b; }

// 6x7x6 cube used when frames exceed 256 colors.
int cube_index(Rgb c) {
  const int r = (c.r * 5 + 127) / 255, g = (c.g * 6 + 127) / 255, b = (c.b * 5 + 127) / 255;
  return (r * 7 + g) * 6 + b;
}

Rgb cube_color(int i) {
  const int b = i % 6, g = (i / 6) % 7, r = i / 42;
  return {static_cast<std::uint8_t>((r * 255 + 2) / 5), static_cast<std::uint8_t>((g * 255 + 3) / 6),
          static_cast<std::uint8_t>((b * 255 + 2) / 5)};
}

class BitWriter {
 public:
  explicit BitWriter(Bytes& out) : out_(out) {}
  void write(int code, int width) {
    acc_ |= static_cast<std::uint32_t>(code) << nbits_;
    nbits_ += width;
    while (nbits_ >= 8) {
      push(static_cast<std::uint8_t>(acc_ & 0xff));
      acc_ >>= 8;
      nbits_ -= 8;
    }
  }
  void finish() {
    if (nbits_ > 0) push(static_cast<std::uint8_t>(acc_ & 0xff));
    acc_ = 0;
    nbits_ = 0;
    flush_block();
    out_.push_back(0);
  }

 private:
  void push(std::uint8_t b) {
    block_.push_back(b);
    if (block_.size() == 255) flush_block();
  }
  void flush_block() {
    if (block_.empty()) return;
    out_.push_back(static_cast<std::uint8_t>(block_.size()));
    out_.insert(out_.end(), block_.begin(), block_.end());
    block_.clear();
  }

  Bytes& out_;
  Bytes block_;
  std::uint32_t acc_ = 0;
  int nbits_ = 0;
};

void lzw_encode(const std::vector<std::uint8_t>& indices, int min_code_size, Bytes& out) {
  out.push_back(static_cast<std::uint8_t>(min_code_size));
  BitWriter bw(out);
  const int clear = 1 << min_code_size, eoi = clear + 1;
  int size = min_code_size + 1;
  int next = clear + 2;
  std::unordered_map<std::uint32_t, int> dict;
  bw.write(clear, size);
  int prefix = indices.front();
  for (std::size_t i = 1; i < indices.size(); ++i) {
    const int k = indices[i];
    const std::uint32_t key = (static_cast<std::uint32_t>(prefix) << 8) | static_cast<std::uint32_t>(k);
    auto it = dict.find(key);
    if (it != dict.end()) {
      prefix = it->second;
      continue;
    }
    bw.write(prefix, size);
    const int code = next++;
    dict.emplace(key, code);
    if (code >= (1 << size) && size < 12) ++size;
    if (code == kMaxCode) {
      bw.write(clear, size);
      dict.clear();
      size = min_code_size + 1;
      next = clear + 2;
    }
    prefix = k;
  }
  bw.write(prefix, size);
  bw.write(eoi, size);
  bw.finish();
}

void put16(Bytes& out, int v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

}  // namespace

GifEncoding encode_gif(std::span<const Canvas> frames, int frame_delay_ms) {
  if (frames.empty()) throw ParamError("GIF needs at least one frame");
  if (frame_delay_ms < 0) throw ParamError("GIF frame delay must be non-negative");
  const int w = frames.front().width(), h = frames.front().height();
  if (w > 0xffff || h > 0xffff) throw ParamError("GIF dimensions exceed 65535");
  for (const Canvas& f : frames)
    if (f.width() != w || f.height() != h) throw ParamError("GIF frames differ in size");

  std::map<std::uint32_t, int> colors;
  bool quantized = false;
  for (const Canvas& f : frames) {
    for (int y = 0; y < h && !quantized; ++y)
      for (int x = 0; x < w; ++x) {
        colors.emplace(pack(f.at(x, y)), 0);
        if (colors.size() > 256) {
          quantized = true;
          break;
        }
      }
  }

  std::vector<Rgb> palette;
  if (!quantized) {
    for (auto& [key, index] : colors) {
      index = static_cast<int>(palette.size());
      palette.push_back({static_cast<std::uint8_t>(key >> 16), static_cast<std::uint8_t>(key >> 8),
                         static_cast<std::uint8_t>(key)});
    }
  } else {
    for (int i = 0; i < 6 * 7 * 6; ++i) palette.push_back(cube_color(i));
  }
  int bits = 1;
  while ((1 << bits) < static_cast<int>(palette.size())) ++bits;
  palette.resize(std::size_t{1} << bits, kBlack);

  GifEncoding enc;
  enc.quantized = quantized;
  Bytes& out = enc.bytes;
  const char* sig = "GIF89a";
  out.insert(out.end(), sig, sig + 6);
  put16(out, w);
  put16(out, h);
  out.push_back(static_cast<std::uint8_t>(0x80 | (7 << 4) | (bits - 1)));
  out.push_back(0);
  out.push_back(0);
  for (Rgb c : palette) {
    out.push_back(c.r);
    out.push_back(c.g);
    out.push_back(c.b);
  }
  // NETSCAPE2.0 looping extension, loop count 0 = forever
  const std::uint8_t netscape[] = {0x21, 0xFF, 0x0B, 'N', 'E', 'T', 'S', 'C', 'A', 'P', 'E',
                                   '2',  '.',  '0',  0x03, 0x01, 0x00, 0x00, 0x00};
  out.insert(out.end(), std::begin(netscape), std::end(netscape));

  const int delay_cs = std::max(1, static_cast<int>(std::lround(frame_delay_ms / 10.0)));
  const int min_code_size = std::max(2, bits);
  std::vector<std::uint8_t> indices(static_cast<std::size_t>(w) * h);
  for (const Canvas& f : frames) {
    out.insert(out.end(), {0x21, 0xF9, 0x04, 0x04});  // disposal: leave in place
    put16(out, delay_cs);
    out.push_back(0);
    out.push_back(0);

    out.push_back(0x2C);
    put16(out, 0);
    put16(out, 0);
    put16(out, w);
    put16(out, h);
    out.push_back(0);

    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const Rgb c = f.at(x, y);
        indices[static_cast<std::size_t>(y) * w + x] =
            static_cast<std::uint8_t>(quantized ? cube_index(c) : colors.at(pack(c)));
      }
    lzw_encode(indices, min_code_size, out);
  }
  out.push_back(0x3B);
  return enc;
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::uint8_t u8() {
    if (pos_ >= b_.size()) throw DecodeError("truncated GIF");
    return b_[pos_++];
  }
  int u16() {
    const int lo = u8();
    return lo | (u8() << 8);
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    if (pos_ + n > b_.size()) throw DecodeError("truncated GIF");
    auto s = b_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  Bytes sub_blocks() {
    Bytes data;
    for (std::uint8_t n = u8(); n != 0; n = u8()) {
      auto s = take(n);
      data.insert(data.end(), s.begin(), s.end());
    }
    return data;
  }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> lzw_decode(const Bytes& data, int min_code_size, std::size_t pixel_count) {
  if (min_code_size < 2 || min_code_size > 11) throw DecodeError("bad LZW code size");
  const int clear = 1 << min_code_size, eoi = clear + 1;
  std::vector<int> prefix(4096, -1);
  std::vector<std::uint8_t> suffix(4096, 0), first(4096, 0);
  for (int i = 0; i < clear; ++i) {
    suffix[i] = static_cast<std::uint8_t>(i);
    first[i] = static_cast<std::uint8_t>(i);
  }
  std::vector<std::uint8_t> out;
  out.reserve(pixel_count);
  std::vector<std::uint8_t> stack;

  int size = min_code_size + 1, next = clear + 2, prev = -1;
  std::size_t bitpos = 0;
  const std::size_t total_bits = data.size() * 8;
  while (out.size() < pixel_count) {
    if (bitpos + static_cast<std::size_t>(size) > total_bits) break;
    int code = 0;
    for (int i = 0; i < size; ++i, ++bitpos)
      code |= ((data[bitpos >> 3] >> (bitpos & 7)) & 1) << i;
    if (code == clear) {
      size = min_code_size + 1;
      next = clear + 2;
      prev = -1;
      continue;
    }
    if (code == eoi) break;
    int cur = code;
    std::uint8_t head;
    if (code < next && (code < clear || code > eoi)) {
      head = first[code];
    } else if (code == next && prev >= 0) {
      head = first[prev];
    } else {
      throw DecodeError("corrupt LZW stream");
    }
    if (prev >= 0 && next < 4096) {
      prefix[next] = prev;
      suffix[next] = head;
      first[next] = first[prev];
      ++next;
      if (next == (1 << size) && size < 12) ++size;
    }
    stack.clear();
    while (cur >= 0) {
      if (cur < clear) {
        stack.push_back(static_cast<std::uint8_t>(cur));
        break;
      }
      stack.push_back(suffix[cur]);
      cur = prefix[cur];
    }
    out.insert(out.end(), stack.rbegin(), stack.rend());
    prev = code;
  }
  out.resize(pixel_count, 0);
  return out;
}

}  // namespace

GifAnimation decode_gif(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  auto sig = r.take(6);
  if (!std::equal(sig.begin(), sig.begin() + 3, "GIF")) throw DecodeError("not a GIF");
  const int w = r.u16(), h = r.u16();
  if (w < 1 || h < 1) throw DecodeError("GIF has empty logical screen");
  const std::uint8_t flags = r.u8();
  const int bg_index = r.u8();
  r.u8();
  std::vector<Rgb> global;
  if (flags & 0x80) {
    const int n = 1 << ((flags & 7) + 1);
    for (int i = 0; i < n; ++i) {
      auto c = r.take(3);
      global.push_back({c[0], c[1], c[2]});
    }
  }
  const Rgb background = bg_index < static_cast<int>(global.size()) ? global[bg_index] : kWhite;

  GifAnimation anim;
  Canvas screen(w, h, background);
  int delay = 0, transparent = -1, disposal = 0;
  for (;;) {
    const std::uint8_t block = r.u8();
    if (block == 0x3B) break;
    if (block == 0x21) {
      const std::uint8_t label = r.u8();
      Bytes data = r.sub_blocks();
      if (label == 0xF9 && data.size() >= 4) {
        disposal = (data[0] >> 2) & 7;
        delay = data[1] | (data[2] << 8);
        transparent = (data[0] & 1) ? data[3] : -1;
      } else if (label == 0xFF && data.size() >= 14 && std::equal(data.begin(), data.begin() + 11, "NETSCAPE2.0")) {
        anim.loop_count = data[12] | (data[13] << 8);
      }
      continue;
    }
    if (block != 0x2C) throw DecodeError("unknown GIF block");
    const int fx = r.u16(), fy = r.u16(), fw = r.u16(), fh = r.u16();
    const std::uint8_t iflags = r.u8();
    std::vector<Rgb> local;
    if (iflags & 0x80) {
      const int n = 1 << ((iflags & 7) + 1);
      for (int i = 0; i < n; ++i) {
        auto c = r.take(3);
        local.push_back({c[0], c[1], c[2]});
      }
    }
    const auto& palette = local.empty() ? global : local;
    if (palette.empty()) throw DecodeError("GIF frame without a color table");
    const int min_code = r.u8();
    const Bytes data = r.sub_blocks();
    const auto indices = lzw_decode(data, min_code, static_cast<std::size_t>(fw) * fh);

    std::vector<int> rows(fh);
    if (iflags & 0x40) {
      int i = 0;
      for (int y = 0; y < fh; y += 8) rows[i++] = y;
      for (int y = 4; y < fh; y += 8) rows[i++] = y;
      for (int y = 2; y < fh; y += 4) rows[i++] = y;
      for (int y = 1; y < fh; y += 2) rows[i++] = y;
    } else {
      for (int y = 0; y < fh; ++y) rows[y] = y;
    }
    const Canvas before = screen;
    for (int i = 0; i < fh; ++i) {
      for (int x = 0; x < fw; ++x) {
        const int idx = indices[static_cast<std::size_t>(i) * fw + x];
        if (idx == transparent) continue;
        if (idx >= static_cast<int>(palette.size())) throw DecodeError("GIF color index out of range");
        const int px = fx + x, py = fy + rows[i];
        if (screen.contains(px, py)) screen.set(px, py, palette[idx]);
      }
    }
    anim.frames.push_back(screen);
    anim.delays_cs.push_back(delay);
    if (disposal == 2) screen.fill_rect({fx, fy, fw, fh}, background);
    if (disposal == 3) screen = before;
    delay = 0;
    transparent = -1;
    disposal = 0;
  }
  if (anim.frames.empty()) throw DecodeError("GIF has no frames");
  return anim;
}

std::string_view to_string(ImageFormat f) { return f == ImageFormat::Png ? "png" : "gif"; }

ImageFormat sniff_format(std::span<const std::uint8_t> bytes) {
  static const std::uint8_t png_sig[] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= 8 && std::equal(std::begin(png_sig), std::end(png_sig), bytes.begin()))
    return ImageFormat::Png;
  if (bytes.size() >= 6 && bytes[0] == 'G' && bytes[1] == 'I' && bytes[2] == 'F') return ImageFormat::Gif;
  throw DecodeError("unrecognized image format");
}

std::vector<Canvas> decode_frames(std::span<const std::uint8_t> bytes) {
  if (sniff_format(bytes) == ImageFormat::Png) return {decode_png(bytes)};
  return decode_gif(bytes).frames;
}

}  // namespace mtmod
