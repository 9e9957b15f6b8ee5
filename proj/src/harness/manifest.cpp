#include <fstream>
#include <sstream>

#include "mtmod/error.hpp"
#include "mtmod/harness.hpp"

namespace mtmod {

json ManifestEntry::to_json() const {
  json j = {{"case_id", case_id},
            {"seed_id", seed_id},
            {"text", text},
            {"lang", std::string(mtmod::to_string(language))},
            {"category", std::string(mtmod::to_string(category))},
            {"mr_id", mr_id},
            {"mr_chain", chain_to_json(chain)},
            {"rng_seed", rng_seed},
            {"artifact_path", artifact_path},
            {"artifact_format", artifact_format},
            {"aux", aux}};
  if (skipped_reason) j["skipped_reason"] = *skipped_reason;
  return j;
}

ManifestEntry ManifestEntry::from_json(const json& j) {
  try {
    ManifestEntry e;
    e.case_id = j.at("case_id").get<std::string>();
    e.seed_id = j.at("seed_id").get<std::string>();
    e.text = j.at("text").get<std::string>();
    e.language = parse_language(j.at("lang").get<std::string>());
    e.category = parse_category(j.at("category").get<std::string>());
    e.chain = chain_from_json(j.at("mr_chain"));
    e.mr_id = j.contains("mr_id") ? j["mr_id"].get<std::string>() : chain_id(e.chain);
    e.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    e.artifact_path = j.value("artifact_path", "");
    e.artifact_format = j.value("artifact_format", "");
    e.aux = j.value("aux", json::object());
    if (j.contains("skipped_reason") && !j["skipped_reason"].is_null())
      e.skipped_reason = j["skipped_reason"].get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("bad manifest entry: ") + ex.what());
  }
}

std::string Manifest::to_jsonl() const {
  std::string out;
  for (const ManifestEntry& e : entries) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

Manifest Manifest::parse(std::string_view jsonl, std::filesystem::path dir) {
  Manifest m;
  m.dir = std::move(dir);
  std::istringstream in{std::string(jsonl)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& ex) {
      throw SchemaError("manifest line " + std::to_string(line_no) + ": " + ex.what());
    }
    m.entries.push_back(ManifestEntry::from_json(j));
  }
  return m;
}

Manifest Manifest::load(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read manifest " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), file.parent_path());
}

const ManifestEntry* Manifest::find(std::string_view case_id) const {
  for (const ManifestEntry& e : entries)
    if (e.case_id == case_id) return &e;
  return nullptr;
}

}  // namespace mtmod
