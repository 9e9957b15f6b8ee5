#include <array>

#include "mtmod/error.hpp"
#include "mtmod/mr.hpp"
#include "mtmod/mr_char.hpp"
#include "mtmod/mr_paragraph.hpp"
#include "mtmod/mr_picture.hpp"

namespace mtmod {

namespace {

constexpr std::array<MrInfo, 22> kInfos{{
    {MrId::FontChange, "font-change", "Font Change", "MR1-1", MrLevel::Char},
    {MrId::FontColor, "font-color", "Font Color Change", "MR1-2", MrLevel::Char},
    {MrId::FontSize, "font-size", "Font Size Changing", "MR1-3", MrLevel::Char},
    {MrId::Strikethrough, "strikethrough", "Strikethrough", "MR1-4", MrLevel::Char},
    {MrId::CharRotation, "char-rotation", "Character Rotation", "MR1-5", MrLevel::Char},
    {MrId::Circle, "circle", "Circle", "MR2-1", MrLevel::Paragraph},
    {MrId::Vertical, "vertical", "Vertical Direction", "MR2-2", MrLevel::Paragraph},
    {MrId::RightToLeft, "right-to-left", "Right-to-left", "MR2-3", MrLevel::Paragraph},
    {MrId::AlignAlternate, "align-alternate", "Align-left-then-right", "MR2-4", MrLevel::Paragraph},
    {MrId::WordCloud, "word-cloud", "Word Cloud", "MR2-5", MrLevel::Paragraph},
    {MrId::Overlap, "overlap", "Overlap", "MR2-6", MrLevel::Paragraph},
    {MrId::BenignText, "benign-text", "Benign Text Camouflage", "MR2-7", MrLevel::Paragraph},
    {MrId::Blur, "blur", "Blurring", "MR3-1", MrLevel::Picture},
    {MrId::Crop, "crop", "Crop", "MR3-2", MrLevel::Picture},
    {MrId::Mirror, "mirror", "Mirror", "MR3-3", MrLevel::Picture},
    {MrId::Rotation, "rotation", "Rotation", "MR3-4", MrLevel::Picture},
    {MrId::Scribble, "scribble", "Scribbling", "MR3-5", MrLevel::Picture},
    {MrId::Distort, "distort", "Distort", "MR3-6", MrLevel::Picture},
    {MrId::Watermark, "watermark", "Watermark", "MR3-7", MrLevel::Picture},
    {MrId::ToGif, "to-gif", "To Gif", "MR3-8", MrLevel::Picture},
    {MrId::BenignImage, "benign-image", "Benign Image Camouflage", "MR3-9", MrLevel::Picture},
    {MrId::Baseline, "baseline", "Baseline", "-", MrLevel::Baseline},
}};

template <typename P>
json roundtrip(const json& j) {
  return P::from_json(j).to_json();
}

}  // namespace

std::span<const MrInfo> all_mrs() { return std::span<const MrInfo>(kInfos.data(), 21); }

const MrInfo& mr_info(MrId id) { return kInfos.at(static_cast<std::size_t>(id)); }

MrId parse_mr(std::string_view slug) {
  for (const MrInfo& i : kInfos)
    if (i.slug == slug) return i.id;
  throw ConfigError("unknown metamorphic relation '" + std::string(slug) + "'");
}

std::string_view to_string(MrLevel level) {
  switch (level) {
    case MrLevel::Baseline: return "Baseline";
    case MrLevel::Char: return "Char";
    case MrLevel::Paragraph: return "Paragraph";
    case MrLevel::Picture: return "Picture";
  }
  return "?";
}

json resolve_params(MrId mr, const json& overrides) {
  using namespace mtmod::mr;
  const json& o = overrides.is_null() ? json::object() : overrides;
  switch (mr) {
    case MrId::FontChange: return roundtrip<FontChangeParams>(o);
    case MrId::FontColor: return roundtrip<FontColorParams>(o);
    case MrId::FontSize: return roundtrip<FontSizeParams>(o);
    case MrId::Strikethrough: return roundtrip<StrikethroughParams>(o);
    case MrId::CharRotation: return roundtrip<CharRotationParams>(o);
    case MrId::Circle: return roundtrip<CircleParams>(o);
    case MrId::WordCloud: return roundtrip<WordCloudParams>(o);
    case MrId::Overlap: return roundtrip<OverlapParams>(o);
    case MrId::BenignText: return roundtrip<BenignTextParams>(o);
    case MrId::Blur: return roundtrip<BlurParams>(o);
    case MrId::Crop: return roundtrip<CropParams>(o);
    case MrId::Rotation: return roundtrip<RotationParams>(o);
    case MrId::Scribble: return roundtrip<ScribbleParams>(o);
    case MrId::Distort: return roundtrip<DistortParams>(o);
    case MrId::Watermark: return roundtrip<WatermarkParams>(o);
    case MrId::ToGif: return roundtrip<ToGifParams>(o);
    case MrId::BenignImage: return roundtrip<BenignImageParams>(o);
    case MrId::Vertical:
    case MrId::RightToLeft:
    case MrId::AlignAlternate:
    case MrId::Mirror:
    case MrId::Baseline:
      if (!o.is_object()) throw ParamError(std::string(mr_info(mr).slug) + ": parameters must be a JSON object");
      if (!o.empty())
        throw ParamError(std::string(mr_info(mr).slug) + ": unknown parameter '" + o.begin().key() + "'");
      return json::object();
  }
  return json::object();
}

PerturbationSpec make_spec(MrId mr, const json& overrides, std::uint64_t rng_seed) {
  return {mr, resolve_params(mr, overrides), rng_seed};
}

bool is_valid_chain(std::span<const MrId> ids) {
  if (ids.empty()) return false;
  bool seen[22] = {};
  int layouts = 0;
  MrLevel prev = MrLevel::Char;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const MrInfo& info = mr_info(ids[i]);
    if (info.level == MrLevel::Baseline) {
      if (ids.size() != 1) return false;
      continue;
    }
    if (seen[static_cast<int>(ids[i])]) return false;
    seen[static_cast<int>(ids[i])] = true;
    if (info.level < prev) return false;
    prev = info.level;
    if (info.level == MrLevel::Paragraph && ++layouts > 1) return false;
    if (ids[i] == MrId::ToGif && i + 1 != ids.size()) return false;
  }
  return true;
}

MrChain compose(std::span<const PerturbationSpec> specs) {
  std::vector<MrId> ids;
  for (const auto& s : specs) ids.push_back(s.mr);
  if (!is_valid_chain(ids)) {
    std::string names;
    for (const auto& s : specs) names += (names.empty() ? "" : "+") + std::string(mr_info(s.mr).slug);
    if (specs.empty()) throw CompositionError("empty relation chain");
    throw CompositionError(
        "invalid relation chain '" + names +
        "': relations must run character, then layout, then picture, with at most one layout "
        "relation, no repeats, baseline alone and to-gif last");
  }
  return MrChain(specs.begin(), specs.end());
}

std::string chain_id(std::span<const PerturbationSpec> chain) {
  std::string id;
  for (const auto& s : chain) {
    if (!id.empty()) id += '+';
    id += mr_info(s.mr).slug;
  }
  return id;
}

std::string chain_level(std::string_view id) {
  if (id.find('+') != std::string_view::npos) return "Multi";
  return std::string(to_string(mr_info(parse_mr(id)).level));
}

json chain_to_json(std::span<const PerturbationSpec> chain) {
  json arr = json::array();
  for (const auto& s : chain)
    arr.push_back({{"mr", std::string(mr_info(s.mr).slug)}, {"params", s.params}, {"rng_seed", s.rng_seed}});
  return arr;
}

MrChain chain_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("relation chain must be a JSON array");
  MrChain chain;
  for (const json& e : j) {
    if (!e.is_object() || !e.contains("mr") || !e["mr"].is_string())
      throw SchemaError("relation chain entry needs an \"mr\" string");
    PerturbationSpec s;
    s.mr = parse_mr(e["mr"].get<std::string>());
    s.params = resolve_params(s.mr, e.value("params", json::object()));
    if (e.contains("rng_seed")) {
      if (!e["rng_seed"].is_number_unsigned() && !e["rng_seed"].is_number_integer())
        throw SchemaError("rng_seed must be an unsigned integer");
      s.rng_seed = e["rng_seed"].get<std::uint64_t>();
    }
    chain.push_back(std::move(s));
  }
  return compose(chain);
}

}  // namespace mtmod
