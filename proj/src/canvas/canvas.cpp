#include "mtmod/canvas.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mtmod/error.hpp"
#include "mtmod/simd/kernels.hpp"

namespace mtmod {

Canvas::Canvas(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw ParamError("canvas dimensions must be at least 1x1, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  data_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < data_.size(); i += 3) {
    data_[i] = fill.r;
    data_[i + 1] = fill.g;
    data_[i + 2] = fill.b;
  }
}

void Canvas::fill_rect(Rect r, Rgb c) {
  const int x0 = std::max(0, r.x), y0 = std::max(0, r.y);
  const int x1 = std::min(width_, r.right()), y1 = std::min(height_, r.bottom());
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) set(x, y, c);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Mask ink_mask(const Canvas& c, int threshold) {
  Mask m(c.width(), c.height());
  for (int y = 0; y < c.height(); ++y) {
    auto row = c.row(y);
    for (int x = 0; x < c.width(); ++x) {
      const std::uint8_t* p = &row[static_cast<std::size_t>(x) * 3];
      const int brightest = std::max({p[0], p[1], p[2]});
      m.bits[static_cast<std::size_t>(y) * c.width() + x] = brightest < threshold ? 1 : 0;
    }
  }
  return m;
}

namespace {

struct Overlap {
  int bx, by, ox, oy, w, h;
  bool empty() const { return w <= 0 || h <= 0; }
};

Overlap clip(const Canvas& base, int ow, int oh, int x, int y) {
  Overlap o;
  o.bx = std::max(0, x);
  o.by = std::max(0, y);
  o.ox = o.bx - x;
  o.oy = o.by - y;
  o.w = std::min(base.width(), x + ow) - o.bx;
  o.h = std::min(base.height(), y + oh) - o.by;
  return o;
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ParamError("alpha must be within [0, 1], got " + std::to_string(alpha));
}

}  // namespace

Canvas composite(const Canvas& base, const Canvas& overlay, int x, int y, CompositeMode mode) {
  if (const auto* blend = std::get_if<AlphaBlend>(&mode)) check_alpha(blend->alpha);
  Canvas out = base;
  const Overlap o = clip(base, overlay.width(), overlay.height(), x, y);
  if (o.empty()) return out;
  const auto& k = simd::active_kernels();
  const std::size_t n = static_cast<std::size_t>(o.w) * 3;
  for (int r = 0; r < o.h; ++r) {
    std::uint8_t* dst = out.row(o.by + r).data() + static_cast<std::size_t>(o.bx) * 3;
    const std::uint8_t* src = overlay.row(o.oy + r).data() + static_cast<std::size_t>(o.ox) * 3;
    std::visit(
        [&](const auto& m) {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, Replace>) {
            std::memcpy(dst, src, n);
          } else if constexpr (std::is_same_v<M, Darken>) {
            k.min_u8(dst, src, n);
          } else {
            k.blend_u8(dst, src, n, static_cast<float>(m.alpha));
          }
        },
        mode);
  }
  return out;
}

Canvas composite_masked(const Canvas& base, const Canvas& overlay, const Mask& where, int x, int y,
                        double alpha) {
  check_alpha(alpha);
  if (where.width != overlay.width() || where.height != overlay.height())
    throw ParamError("composite mask does not match overlay size");
  Canvas out = base;
  const Overlap o = clip(base, overlay.width(), overlay.height(), x, y);
  if (o.empty()) return out;
  const auto& k = simd::active_kernels();
  std::vector<std::uint8_t> blended(static_cast<std::size_t>(o.w) * 3);
  for (int r = 0; r < o.h; ++r) {
    std::uint8_t* dst = out.row(o.by + r).data() + static_cast<std::size_t>(o.bx) * 3;
    const std::uint8_t* src = overlay.row(o.oy + r).data() + static_cast<std::size_t>(o.ox) * 3;
    std::memcpy(blended.data(), dst, blended.size());
    k.blend_u8(blended.data(), src, blended.size(), static_cast<float>(alpha));
    for (int i = 0; i < o.w; ++i) {
      if (!where.at(o.ox + i, o.oy + r)) continue;
      std::memcpy(dst + static_cast<std::size_t>(i) * 3, blended.data() + static_cast<std::size_t>(i) * 3, 3);
    }
  }
  return out;
}

namespace {

// Quarter turns for angles that are multiples of 90 degrees, else -1.
int quarter_turns(double degrees) {
  double d = std::fmod(degrees, 360.0);
  if (d < 0) d += 360.0;
  const double q = d / 90.0;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) > 1e-9) return -1;
  return static_cast<int>(nearest) % 4;
}

int ceil_tolerant(double v) { return static_cast<int>(std::ceil(v - 1e-9)); }

}  // namespace

std::pair<int, int> rotated_size(int width, int height, double degrees) {
  const int q = quarter_turns(degrees);
  if (q == 0 || q == 2) return {width, height};
  if (q == 1 || q == 3) return {height, width};
  const double rad = degrees * M_PI / 180.0;
  const double c = std::abs(std::cos(rad)), s = std::abs(std::sin(rad));
  return {std::max(1, ceil_tolerant(width * c + height * s)),
          std::max(1, ceil_tolerant(width * s + height * c))};
}

Canvas rotate_canvas(const Canvas& c, double degrees, Rgb fill) {
  const int w = c.width(), h = c.height();
  switch (quarter_turns(degrees)) {
    case 0:
      return c;
    case 1: {
      Canvas out(h, w);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.set(h - 1 - y, x, c.at(x, y));
      return out;
    }
    case 2: {
      Canvas out(w, h);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.set(w - 1 - x, h - 1 - y, c.at(x, y));
      return out;
    }
    case 3: {
      Canvas out(h, w);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.set(y, w - 1 - x, c.at(x, y));
      return out;
    }
    default:
      break;
  }
  // The residual angle (within 45 degrees of the nearest quarter turn) is
  // applied as three integer shears, x then y then x. Each shear slides whole
  // rows or columns, so the result is a permutation of the source pixels and
  // ink is never created or lost; sampling a rotated grid instead aliases the
  // thin, row-aligned strokes of rendered text by several percent.
  double d = std::fmod(degrees, 360.0);
  if (d < 0) d += 360.0;
  const double turns = std::round(d / 90.0);
  const Canvas base = rotate_canvas(c, 90.0 * turns, fill);
  const double rad = (d - 90.0 * turns) * M_PI / 180.0;
  const double a = -std::tan(rad / 2.0), b = std::sin(rad);
  const auto [ow, oh] = rotated_size(w, h, degrees);
  Canvas out(ow, oh, fill);
  // Coordinates are doubled and centered so odd and even sizes share one rule.
  auto shear = [](double k, long v) { return 2 * std::lround(k * static_cast<double>(v) / 2.0); };
  const int bw = base.width(), bh = base.height();
  for (int y = 0; y < bh; ++y) {
    const long Y = 2L * y + 1 - bh;
    for (int x = 0; x < bw; ++x) {
      const long X = 2L * x + 1 - bw;
      const long X1 = X + shear(a, Y);
      const long Y1 = Y + shear(b, X1);
      const long X2 = X1 + shear(a, Y1);
      const int ox = static_cast<int>((X2 + ow - 1) >> 1), oy = static_cast<int>((Y1 + oh - 1) >> 1);
      if (out.contains(ox, oy)) out.set(ox, oy, base.at(x, y));
    }
  }
  return out;
}

Rect rotate_rect(Rect r, int width, int height, double degrees) {
  switch (quarter_turns(degrees)) {
    case 0: return r;
    case 1: return {height - r.bottom(), r.x, r.h, r.w};
    case 2: return {width - r.right(), height - r.bottom(), r.w, r.h};
    case 3: return {r.y, width - r.right(), r.h, r.w};
    default: break;
  }
  const auto [ow, oh] = rotated_size(width, height, degrees);
  const double rad = degrees * M_PI / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
  for (int corner = 0; corner < 4; ++corner) {
    const double u = (corner & 1 ? r.right() : r.x) - width / 2.0;
    const double v = (corner & 2 ? r.bottom() : r.y) - height / 2.0;
    const double px = u * cs - v * sn + ow / 2.0;
    const double py = u * sn + v * cs + oh / 2.0;
    x0 = std::min(x0, px);
    x1 = std::max(x1, px);
    y0 = std::min(y0, py);
    y1 = std::max(y1, py);
  }
  const int ix = static_cast<int>(std::floor(x0)), iy = static_cast<int>(std::floor(y0));
  return {ix, iy, static_cast<int>(std::ceil(x1)) - ix, static_cast<int>(std::ceil(y1)) - iy};
}

Canvas mirror_canvas(const Canvas& c) {
  Canvas out(c.width(), c.height());
  for (int y = 0; y < c.height(); ++y)
    for (int x = 0; x < c.width(); ++x) out.set(x, y, c.at(c.width() - 1 - x, y));
  return out;
}

Canvas blur_mean(const Canvas& c, int k) {
  if (k < 1 || k % 2 == 0) throw ParamError("blur kernel must be odd and positive, got " + std::to_string(k));
  if (k == 1) return c;
  const int w = c.width(), h = c.height(), r = k / 2;
  const std::size_t stride = static_cast<std::size_t>(w) * 3;

  // Horizontal window sums per row, clamp-to-edge.
  std::vector<std::uint32_t> hsum(stride * h);
  for (int y = 0; y < h; ++y) {
    auto row = c.row(y);
    std::uint32_t* out = &hsum[stride * y];
    for (int ch = 0; ch < 3; ++ch) {
      auto px = [&](int x) -> std::uint32_t {
        return row[static_cast<std::size_t>(std::clamp(x, 0, w - 1)) * 3 + ch];
      };
      std::uint32_t s = 0;
      for (int dx = -r; dx <= r; ++dx) s += px(dx);
      for (int x = 0; x < w; ++x) {
        out[static_cast<std::size_t>(x) * 3 + ch] = s;
        s += px(x + r + 1);
        s -= px(x - r);
      }
    }
  }

  const auto& kern = simd::active_kernels();
  std::vector<std::uint32_t> col(stride, 0);
  auto hrow = [&](int y) { return &hsum[stride * std::clamp(y, 0, h - 1)]; };
  for (int dy = -r; dy <= r; ++dy) {
    const std::uint32_t* src = hrow(dy);
    for (std::size_t i = 0; i < stride; ++i) col[i] += src[i];
  }
  const std::uint32_t area2 = static_cast<std::uint32_t>(k) * k * 2;
  const std::uint32_t area = static_cast<std::uint32_t>(k) * k;
  Canvas out(w, h);
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    for (std::size_t i = 0; i < stride; ++i)
      dst[i] = static_cast<std::uint8_t>((2 * col[i] + area) / area2);
    kern.accumulate_u32(col.data(), hrow(y + r + 1), hrow(y - r), stride);
  }
  return out;
}

Canvas crop_rect(const Canvas& c, Rect r) {
  if (r.w < 1 || r.h < 1 || r.x < 0 || r.y < 0 || r.right() > c.width() || r.bottom() > c.height())
    throw ParamError("crop rectangle outside canvas");
  Canvas out(r.w, r.h);
  for (int y = 0; y < r.h; ++y) {
    auto src = c.row(r.y + y).subspan(static_cast<std::size_t>(r.x) * 3, static_cast<std::size_t>(r.w) * 3);
    std::copy(src.begin(), src.end(), out.row(y).begin());
  }
  return out;
}

Canvas resize_to(const Canvas& c, int width, int height) {
  if (width < 1 || height < 1) throw ParamError("resize target must be at least 1x1");
  if (width == c.width() && height == c.height()) return c;
  std::vector<int> sx(width), sy(height);
  for (int x = 0; x < width; ++x)
    sx[x] = static_cast<int>((2LL * x + 1) * c.width() / (2LL * width));
  for (int y = 0; y < height; ++y)
    sy[y] = static_cast<int>((2LL * y + 1) * c.height() / (2LL * height));
  Canvas out(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out.set(x, y, c.at(sx[x], sy[y]));
  return out;
}

Canvas resize_nonuniform(const Canvas& c, double sx, double sy) {
  if (!(sx > 0.0) || !(sy > 0.0)) throw ParamError("scale factors must be positive");
  const int w = std::max(1, static_cast<int>(std::lround(c.width() * sx)));
  const int h = std::max(1, static_cast<int>(std::lround(c.height() * sy)));
  return resize_to(c, w, h);
}

Canvas stack_vertical(std::span<const Canvas> parts, Rgb fill) {
  if (parts.empty()) throw ParamError("nothing to stack");
  int w = 0, h = 0;
  for (const Canvas& p : parts) {
    w = std::max(w, p.width());
    h += p.height();
  }
  Canvas out(w, h, fill);
  int y = 0;
  for (const Canvas& p : parts) {
    out = composite(out, p, (w - p.width()) / 2, y, Replace{});
    y += p.height();
  }
  return out;
}

void draw_line(Canvas& c, int x0, int y0, int x1, int y1, int thickness, Rgb color) {
  const int lo = -(thickness - 1) / 2, hi = thickness / 2;
  auto plot = [&](int x, int y) {
    for (int dy = lo; dy <= hi; ++dy)
      for (int dx = lo; dx <= hi; ++dx)
        if (c.contains(x + dx, y + dy)) c.set(x + dx, y + dy, color);
  };
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    plot(x0, y0);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void draw_ellipse_ring(Canvas& c, Rect box, int stroke, Rgb color) {
  if (box.w < 1 || box.h < 1) return;
  const double cx = box.x + box.w / 2.0, cy = box.y + box.h / 2.0;
  const double a = box.w / 2.0, b = box.h / 2.0;
  const double ia = a - stroke, ib = b - stroke;
  for (int y = std::max(0, box.y); y < std::min(c.height(), box.bottom()); ++y) {
    for (int x = std::max(0, box.x); x < std::min(c.width(), box.right()); ++x) {
      const double u = x + 0.5 - cx, v = y + 0.5 - cy;
      if ((u * u) / (a * a) + (v * v) / (b * b) > 1.0) continue;
      if (ia > 0 && ib > 0 && (u * u) / (ia * ia) + (v * v) / (ib * ib) < 1.0) continue;
      c.set(x, y, color);
    }
  }
}

}  // namespace mtmod
