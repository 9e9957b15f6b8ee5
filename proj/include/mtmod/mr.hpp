#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtmod/canvas.hpp"
#include "mtmod/corpus.hpp"
#include "mtmod/render.hpp"

namespace mtmod {

using json = nlohmann::json;

/// The 21 metamorphic relations in canonical order, plus the unperturbed
/// baseline render used for seed filtering.
enum class MrId {
  FontChange,
  FontColor,
  FontSize,
  Strikethrough,
  CharRotation,
  Circle,
  Vertical,
  RightToLeft,
  AlignAlternate,
  WordCloud,
  Overlap,
  BenignText,
  Blur,
  Crop,
  Mirror,
  Rotation,
  Scribble,
  Distort,
  Watermark,
  ToGif,
  BenignImage,
  Baseline,
};

enum class MrLevel { Baseline, Char, Paragraph, Picture };

struct MrInfo {
  MrId id;
  std::string_view slug;   // stable CLI / manifest name
  std::string_view title;  // human-readable report name
  std::string_view number; // catalogue number, e.g. "MR3-4"
  MrLevel level;
};

/// The 21 relations, excluding Baseline.
std::span<const MrInfo> all_mrs();
const MrInfo& mr_info(MrId id);
/// Throws ConfigError for unknown slugs.
MrId parse_mr(std::string_view slug);
std::string_view to_string(MrLevel level);

/// One relation with fully resolved parameters.
struct PerturbationSpec {
  MrId mr = MrId::Baseline;
  json params = json::object();
  std::uint64_t rng_seed = 0;

  bool operator==(const PerturbationSpec&) const = default;
};

using MrChain = std::vector<PerturbationSpec>;

/// Fills defaults for every parameter of `mr` and validates the result.
/// Unknown keys and out-of-range values throw ParamError.
json resolve_params(MrId mr, const json& overrides = json::object());

PerturbationSpec make_spec(MrId mr, const json& overrides = json::object(),
                           std::uint64_t rng_seed = 0);

/// Validates member order and returns the chain. Rules: Baseline only
/// alone; levels never decrease (character, then layout, then picture); at
/// most one layout relation; no relation twice; to-gif only last.
/// Throws CompositionError.
MrChain compose(std::span<const PerturbationSpec> specs);
bool is_valid_chain(std::span<const MrId> ids);

/// "mirror", "font-color+mirror", ...
std::string chain_id(std::span<const PerturbationSpec> chain);
/// Report level of a chain id: its relation's level, or "Multi" for chains.
std::string chain_level(std::string_view id);

json chain_to_json(std::span<const PerturbationSpec> chain);
MrChain chain_from_json(const json& j);

/// Shared inputs of the perturbations beyond the seed and parameters.
struct Resources {
  RenderSettings render;
  /// Replaces the synthesized oblique for font-change when set.
  std::optional<FontProvider> alternate_font;
  /// Words whose glyphs font-size shrinks (and font-color may target).
  std::vector<std::string> toxic_lexicon;
  std::vector<std::string> benign_words;
  std::vector<Canvas> benign_images;

  static Resources defaults();
};

struct TestCase {
  std::string case_id;
  std::string seed_id;
  MrChain chain;
  std::string ground_truth;
  /// One frame for a PNG artifact, several for a GIF.
  std::vector<Canvas> frames;
  int frame_delay_ms = 0;
  GlyphLedger ledger;
  json aux = json::object();

  bool is_gif() const { return frames.size() > 1 || frame_delay_ms > 0; }
};

/// Renders `seed` through the chain: character steps restyle the text, the
/// layout step (single line by default) draws it, picture steps transform
/// the picture and to-gif splits it into frames. Throws CompositionError for
/// invalid chains, InvalidTextError, GlyphCoverageError and ParamError.
TestCase apply_chain(const SeedRecord& seed, std::span<const PerturbationSpec> chain,
                     const Resources& resources);

TestCase apply_mr(const SeedRecord& seed, const PerturbationSpec& spec, const Resources& resources);

/// Encoded artifact bytes of a test case; GIF quantization is reported
/// through `quantized` when non-null.
std::vector<std::uint8_t> encode_artifact(const TestCase& tc, bool* quantized = nullptr);

}  // namespace mtmod
