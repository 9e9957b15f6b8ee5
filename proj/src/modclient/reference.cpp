#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "mtmod/error.hpp"
#include "mtmod/modclient.hpp"
#include "mtmod/simd/kernels.hpp"
#include "mtmod/unicode.hpp"

namespace mtmod {

// A template column of up to 64 rows is one word; taller templates use
// `blocks` words per column, stored block-major so each block's columns are
// contiguous.
struct ReferenceModerator::Template {
  std::string word;
  Mask mask;
  int width = 0, height = 0, blocks = 0;
  std::size_t ink = 0;
  std::vector<std::uint64_t> words;       // blocks * width
  std::vector<std::size_t> ink_prefix;    // ink in columns [0, x) of all blocks
};

namespace {

constexpr int kChunk = 16;  // columns matched between pruning checks

Mask binarize(const Canvas& c, int threshold) { return ink_mask(c, threshold); }

Mask crop_to_ink(const Mask& m) {
  int x0 = m.width, y0 = m.height, x1 = -1, y1 = -1;
  for (int y = 0; y < m.height; ++y)
    for (int x = 0; x < m.width; ++x)
      if (m.at(x, y)) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return {};
  Mask out(x1 - x0 + 1, y1 - y0 + 1);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) out.set(x - x0, y - y0, m.at(x, y));
  return out;
}

std::vector<std::string> variants(const std::string& w, bool enabled) {
  std::vector<std::string> out{w};
  if (!enabled) return out;
  std::string cap = unicode::ascii_lower(w), upper = w;
  if (!cap.empty() && cap[0] >= 'a' && cap[0] <= 'z') cap[0] = static_cast<char>(cap[0] - 32);
  for (char& c : upper)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
  for (const std::string& v : {cap, upper})
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

/// Every vertical 64-row window of the image, for every start row: plane
/// (s, q) holds, per column x, rows 64q + s .. 64q + s + 63 as one word.
class ShiftedPlanes {
 public:
  explicit ShiftedPlanes(const Mask& m) : width_(m.width), qs_((m.height + 63) / 64 + 1) {
    const int col_words = qs_ + 1;
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(col_words) * width_, 0);
    for (int y = 0; y < m.height; ++y)
      for (int x = 0; x < m.width; ++x)
        if (m.at(x, y)) cols[static_cast<std::size_t>(x) * col_words + y / 64] |= std::uint64_t{1} << (y % 64);
    data_.resize(static_cast<std::size_t>(64) * qs_ * width_);
    for (int s = 0; s < 64; ++s)
      for (int q = 0; q < qs_; ++q) {
        std::uint64_t* plane = &data_[(static_cast<std::size_t>(s) * qs_ + q) * width_];
        for (int x = 0; x < width_; ++x) {
          const std::uint64_t* c = &cols[static_cast<std::size_t>(x) * col_words];
          plane[x] = s == 0 ? c[q] : (c[q] >> s) | (c[q + 1] << (64 - s));
        }
      }
  }
  const std::uint64_t* row_window(int y, int block) const {
    const int s = y % 64, q = y / 64 + block;
    return &data_[(static_cast<std::size_t>(s) * qs_ + q) * width_];
  }

 private:
  int width_;
  int qs_;
  std::vector<std::uint64_t> data_;
};

}  // namespace

ReferenceModerator::ReferenceModerator(ReferenceModeratorConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.lexicon.empty()) throw ConfigError("reference moderator lexicon is empty");
  if (!(cfg_.theta > 0.0 && cfg_.theta <= 1.0)) throw ConfigError("theta must be within (0, 1]");
  std::set<std::string> seen;
  for (const std::string& entry : cfg_.lexicon) {
    for (const std::string& w : variants(entry, cfg_.case_variants)) {
      if (w.empty() || !seen.insert(w).second) continue;
      const std::u32string cps = unicode::decode_utf8(w);
      if (!std::all_of(cps.begin(), cps.end(), [&](char32_t c) { return cfg_.render.font.covers(c); })) continue;
      const Rendering r = render_line(w, cfg_.render.font, cfg_.render.size, kBlack, kWhite, 0);
      Template t;
      t.word = w;
      t.mask = crop_to_ink(binarize(r.canvas, cfg_.ink_threshold));
      if (t.mask.width == 0) continue;
      t.width = t.mask.width;
      t.height = t.mask.height;
      t.blocks = (t.height + 63) / 64;
      t.words.assign(static_cast<std::size_t>(t.blocks) * t.width, 0);
      t.ink_prefix.assign(static_cast<std::size_t>(t.width) + 1, 0);
      for (int x = 0; x < t.width; ++x) {
        std::size_t col_ink = 0;
        for (int y = 0; y < t.height; ++y)
          if (t.mask.at(x, y)) {
            t.words[static_cast<std::size_t>(y / 64) * t.width + x] |= std::uint64_t{1} << (y % 64);
            ++col_ink;
          }
        t.ink_prefix[x + 1] = t.ink_prefix[x] + col_ink;
      }
      t.ink = t.ink_prefix.back();
      templates_.push_back(std::move(t));
    }
  }
  if (templates_.empty()) throw ConfigError("no lexicon word can be drawn with the template font");
}

ReferenceModerator::~ReferenceModerator() = default;

std::string ReferenceModerator::version() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "template-1 theta=%g size=%d words=%zu", cfg_.theta, cfg_.render.size,
                cfg_.lexicon.size());
  return buf;
}

MatchResult ReferenceModerator::best_match(const Canvas& frame, bool exhaustive) const {
  const Mask image = binarize(frame, cfg_.ink_threshold);
  const std::size_t image_ink = image.count();
  const ShiftedPlanes planes(image);
  const auto& k = simd::active_kernels();
  MatchResult best;
  for (const Template& t : templates_) {
    if (t.width > image.width || t.height > image.height) continue;
    // Fewest hits that still reach theta.
    auto need = static_cast<std::size_t>(std::ceil(cfg_.theta * static_cast<double>(t.ink) - 1e-9));
    while (need > 0 && static_cast<double>(need - 1) / static_cast<double>(t.ink) >= cfg_.theta) --need;
    while (static_cast<double>(need) / static_cast<double>(t.ink) < cfg_.theta) ++need;
    if (!exhaustive && image_ink < need) continue;
    const std::size_t budget = t.ink - need;  // misses allowed before an offset is hopeless
    for (int y = 0; y + t.height <= image.height; ++y) {
      for (int x = 0; x + t.width <= image.width; ++x) {
        std::size_t hits = 0;
        bool pruned = false;
        for (int c0 = 0; c0 < t.width && !pruned; c0 += kChunk) {
          const int n = std::min(kChunk, t.width - c0);
          for (int b = 0; b < t.blocks; ++b)
            hits += k.and_popcount_u64(&t.words[static_cast<std::size_t>(b) * t.width + c0],
                                       planes.row_window(y, b) + x + c0, static_cast<std::size_t>(n));
          if (!exhaustive && t.ink_prefix[c0 + n] - hits > budget) pruned = true;
        }
        if (pruned) continue;
        const double score = static_cast<double>(hits) / static_cast<double>(t.ink);
        if (score > best.score) best = {score, t.word, x, y, 0};
        if (!exhaustive && score >= cfg_.theta) return best;
      }
    }
  }
  return best;
}

Verdict ReferenceModerator::moderate(const ModerationRequest& request) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<Canvas> frames = decode_frames(request.artifact);
  MatchResult best;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    MatchResult m = best_match(frames[i]);
    if (m.score > best.score || best.frame < 0) {
      best = m;
      best.frame = static_cast<int>(i);
    }
    if (best.score >= cfg_.theta) break;
  }
  Verdict v;
  v.case_id = request.case_id;
  v.target = name();
  v.label = best.score >= cfg_.theta ? Label::Toxic : Label::NonToxic;
  v.raw = {{"score", best.score}, {"word", best.word}, {"x", best.x}, {"y", best.y}, {"frame", best.frame}};
  v.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

Verdict reference_moderate(const ReferenceModeratorConfig& cfg, std::span<const std::uint8_t> artifact) {
  ReferenceModerator m(cfg);
  return m.moderate({"", artifact, sniff_format(artifact), ""});
}

double template_score_naive(const Mask& tmpl, const Mask& image, int x, int y) {
  std::size_t ink = 0, hits = 0;
  for (int ty = 0; ty < tmpl.height; ++ty)
    for (int tx = 0; tx < tmpl.width; ++tx) {
      if (!tmpl.at(tx, ty)) continue;
      ++ink;
      const int ix = x + tx, iy = y + ty;
      if (ix >= 0 && iy >= 0 && ix < image.width && iy < image.height && image.at(ix, iy)) ++hits;
    }
  return ink == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(ink);
}

}  // namespace mtmod
