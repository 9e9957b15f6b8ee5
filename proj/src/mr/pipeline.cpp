#include <algorithm>

#include "mtmod/codec.hpp"
#include "mtmod/error.hpp"
#include "mtmod/lexicon.hpp"
#include "mtmod/mr.hpp"
#include "mtmod/mr_char.hpp"
#include "mtmod/mr_paragraph.hpp"
#include "mtmod/mr_picture.hpp"

namespace mtmod {

Resources Resources::defaults() {
  Resources r;
  r.benign_words = bundled_benign_words();
  return r;
}

namespace {

json& aux_for(json& aux, MrId id) { return aux[std::string(mr_info(id).slug)]; }

void apply_char_step(StyledText& doc, const PerturbationSpec& s, const Resources& res, json& aux) {
  Rng rng(s.rng_seed);
  json& a = aux_for(aux, s.mr);
  a = json::object();
  switch (s.mr) {
    case MrId::FontChange:
      mr::font_change(doc, mr::FontChangeParams::from_json(s.params),
                      res.alternate_font ? &*res.alternate_font : nullptr, a);
      break;
    case MrId::FontColor:
      mr::font_color(doc, mr::FontColorParams::from_json(s.params), res.toxic_lexicon, a);
      break;
    case MrId::FontSize:
      mr::font_size(doc, mr::FontSizeParams::from_json(s.params), res.toxic_lexicon, rng, a);
      break;
    case MrId::Strikethrough:
      mr::strikethrough(doc, mr::StrikethroughParams::from_json(s.params));
      break;
    case MrId::CharRotation:
      mr::char_rotation(doc, mr::CharRotationParams::from_json(s.params), rng, a);
      break;
    default:
      throw CompositionError(std::string(mr_info(s.mr).slug) + " is not a character-level relation");
  }
}

Rendering run_layout(const StyledText& doc, const PerturbationSpec* s, const Resources& res, json* aux) {
  if (s == nullptr) return layout_line(doc);
  Rng rng(s->rng_seed);
  json scratch = json::object();
  json& a = aux != nullptr ? aux_for(*aux, s->mr) : scratch;
  a = json::object();
  switch (s->mr) {
    case MrId::Circle: return mr::circle(doc, mr::CircleParams::from_json(s->params), a);
    case MrId::Vertical: return mr::vertical(doc);
    case MrId::RightToLeft: return mr::right_to_left(doc);
    case MrId::AlignAlternate: return mr::align_alternate(doc);
    case MrId::WordCloud: {
      mr::WordCloud wc = mr::word_cloud(doc, mr::WordCloudParams::from_json(s->params), res.benign_words, rng);
      a["coverage"] = wc.coverage;
      a["placed_words"] = wc.words.size();
      return std::move(wc.rendering);
    }
    case MrId::Overlap: return mr::overlap(doc, mr::OverlapParams::from_json(s->params));
    case MrId::BenignText: {
      mr::BenignText bt = mr::benign_text(doc, mr::BenignTextParams::from_json(s->params), res.benign_words, rng);
      json boxes = json::array();
      for (const Rect& r : bt.original_units) boxes.push_back({r.x, r.y, r.w, r.h});
      a["original_units"] = std::move(boxes);
      a["inserted"] = bt.inserted;
      a["rendered_units"] = bt.rendered_units;
      return std::move(bt.rendering);
    }
    default:
      throw CompositionError(std::string(mr_info(s->mr).slug) + " is not a layout relation");
  }
}

Rendering run_picture(Rendering in, const PerturbationSpec& s, const Resources& res, json* aux) {
  Rng rng(s.rng_seed);
  switch (s.mr) {
    case MrId::Blur: return mr::blurring(std::move(in), mr::BlurParams::from_json(s.params));
    case MrId::Crop: return mr::crop_chars(std::move(in), mr::CropParams::from_json(s.params), res.render.bg);
    case MrId::Mirror: return mr::mirror(std::move(in));
    case MrId::Rotation: return mr::rotation(std::move(in), mr::RotationParams::from_json(s.params));
    case MrId::Scribble: return mr::scribble(std::move(in), mr::ScribbleParams::from_json(s.params), rng);
    case MrId::Distort: return mr::distort(std::move(in), mr::DistortParams::from_json(s.params));
    case MrId::Watermark:
      return mr::watermark(std::move(in), mr::WatermarkParams::from_json(s.params), res.benign_words, rng);
    case MrId::BenignImage: {
      mr::BenignImageResult b =
          mr::benign_image(std::move(in), mr::BenignImageParams::from_json(s.params), res.benign_images, rng);
      if (aux != nullptr) aux_for(*aux, s.mr) = {{"toxic_offset_y", b.toxic_offset_y}, {"benign_heights", b.benign_heights}};
      return std::move(b.rendering);
    }
    default:
      throw CompositionError(std::string(mr_info(s.mr).slug) + " is not a picture relation");
  }
}

}  // namespace

TestCase apply_chain(const SeedRecord& seed, std::span<const PerturbationSpec> specs, const Resources& res) {
  const MrChain chain = compose(specs);
  TestCase tc;
  tc.seed_id = seed.seed_id;
  tc.case_id = seed.seed_id + "." + chain_id(chain);
  tc.chain = chain;
  tc.ground_truth = seed.text;

  StyledText doc = StyledText::from_text(seed.text, seed.language, res.render);
  std::size_t i = 0;
  while (i < chain.size() && mr_info(chain[i].mr).level == MrLevel::Baseline) ++i;
  for (; i < chain.size() && mr_info(chain[i].mr).level == MrLevel::Char; ++i)
    apply_char_step(doc, chain[i], res, tc.aux);
  const PerturbationSpec* layout = nullptr;
  if (i < chain.size() && mr_info(chain[i].mr).level == MrLevel::Paragraph) layout = &chain[i++];
  std::vector<const PerturbationSpec*> pictures;
  const PerturbationSpec* gif = nullptr;
  for (; i < chain.size(); ++i) {
    if (chain[i].mr == MrId::ToGif)
      gif = &chain[i];
    else
      pictures.push_back(&chain[i]);
  }

  auto render = [&](const StyledText& d, json* aux) {
    Rendering r = run_layout(d, layout, res, aux);
    apply_overlays(r.canvas, d.overlays);
    for (const PerturbationSpec* s : pictures) r = run_picture(std::move(r), *s, res, aux);
    return r;
  };

  Rendering full = render(doc, &tc.aux);
  tc.ledger = std::move(full.ledger);
  if (gif == nullptr) {
    tc.frames.push_back(std::move(full.canvas));
    return tc;
  }
  // Frame A keeps glyphs at even ordinals, frame B odd ones; every step
  // replays with the same seed so the frames align.
  const mr::ToGifParams gp = mr::ToGifParams::from_json(gif->params);
  const std::vector<int> ordinals = doc.glyph_ordinals();
  for (int parity = 0; parity < 2; ++parity) {
    StyledText half = doc;
    for (std::size_t g = 0; g < half.glyphs.size(); ++g)
      if (ordinals[g] >= 0 && ordinals[g] % 2 != parity) half.glyphs[g].style.visible = false;
    tc.frames.push_back(render(half, nullptr).canvas);
  }
  tc.frame_delay_ms = gp.frame_delay_ms;
  tc.aux["to-gif"] = {{"frame_delay_ms", gp.frame_delay_ms}, {"frames", 2}};
  return tc;
}

TestCase apply_mr(const SeedRecord& seed, const PerturbationSpec& spec, const Resources& resources) {
  return apply_chain(seed, std::span<const PerturbationSpec>(&spec, 1), resources);
}

std::vector<std::uint8_t> encode_artifact(const TestCase& tc, bool* quantized) {
  if (quantized != nullptr) *quantized = false;
  if (tc.frames.empty()) throw ParamError("test case has no frames");
  if (!tc.is_gif()) return encode_png(tc.frames.front());
  GifEncoding g = encode_gif(tc.frames, tc.frame_delay_ms);
  if (quantized != nullptr) *quantized = g.quantized;
  return std::move(g.bytes);
}

}  // namespace mtmod
