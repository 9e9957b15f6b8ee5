#include "mtmod/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mtmod/error.hpp"
#include "mtmod/unicode.hpp"

namespace mtmod {

using nlohmann::json;

std::string_view to_string(Language lang) {
  return lang == Language::English ? "en" : "zh";
}

std::string_view to_string(Category cat) {
  switch (cat) {
    case Category::Abuse: return "abuse";
    case Category::Spam: return "spam";
    case Category::Porn: return "porn";
  }
  return "abuse";
}

std::string_view to_string(Label label) {
  return label == Label::Toxic ? "toxic" : "non_toxic";
}

Language parse_language(std::string_view s) {
  const std::string v = unicode::ascii_lower(s);
  if (v == "en" || v == "english" || v == "en-us") return Language::English;
  if (v == "zh" || v == "chinese" || v == "zh-cn" || v == "cn") return Language::Chinese;
  throw SchemaError("unknown language '" + std::string(s) + "'");
}

Category parse_category(std::string_view s) {
  const std::string v = unicode::ascii_lower(s);
  if (v == "abuse") return Category::Abuse;
  if (v == "spam") return Category::Spam;
  if (v == "porn" || v == "pornography") return Category::Porn;
  throw SchemaError("unknown category '" + std::string(s) + "'");
}

Label parse_label(std::string_view s) {
  const std::string v = unicode::ascii_lower(s);
  if (v == "toxic") return Label::Toxic;
  if (v == "non_toxic" || v == "non-toxic" || v == "nontoxic") return Label::NonToxic;
  throw SchemaError("unknown label '" + std::string(s) + "'");
}

CorpusFormat parse_corpus_format(std::string_view s) {
  const std::string v = unicode::ascii_lower(s);
  if (v == "csv") return CorpusFormat::Csv;
  if (v == "tsv") return CorpusFormat::Tsv;
  if (v == "jsonl") return CorpusFormat::Jsonl;
  throw ConfigError("unknown corpus format '" + std::string(s) + "'");
}

CorpusFormat corpus_format_for(const std::filesystem::path& path) {
  const std::string ext = unicode::ascii_lower(path.extension().string());
  if (ext == ".csv") return CorpusFormat::Csv;
  if (ext == ".tsv" || ext == ".tab") return CorpusFormat::Tsv;
  return CorpusFormat::Jsonl;
}

namespace {

struct RawRow {
  std::string id, text, lang, category, source;
  bool has_lang = false, has_category = false, has_source = false;
};

SeedCorpus build(std::vector<RawRow> rows, const FieldMapping& mapping,
                 std::string_view source_name) {
  SeedCorpus corpus;
  std::set<std::string> ids;
  std::size_t row_no = 0;
  for (RawRow& row : rows) {
    ++row_no;
    std::string text = unicode::normalize_seed_text(row.text);
    if (text.empty()) {
      ++corpus.dropped_count;
      continue;
    }
    SeedRecord rec;
    rec.seed_id = row.id.empty() ? "s" + std::to_string(row_no) : row.id;
    if (!ids.insert(rec.seed_id).second)
      throw SchemaError("duplicate seed_id '" + rec.seed_id + "'");
    rec.text = std::move(text);
    rec.language = row.has_lang && !row.lang.empty() ? parse_language(row.lang)
                                                     : mapping.default_language;
    rec.category = row.has_category && !row.category.empty() ? parse_category(row.category)
                                                             : mapping.default_category;
    rec.source = row.has_source ? row.source : std::string(source_name);
    corpus.seeds.push_back(std::move(rec));
  }
  return corpus;
}

std::vector<RawRow> rows_from_table(std::string_view content, char sep, const FieldMapping& m) {
  auto records = csv::parse(content, sep);
  if (records.empty()) throw SchemaError("missing header row");
  const auto& header = records.front();
  auto column = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int text_col = column(m.text);
  if (m.text.empty() || text_col < 0)
    throw SchemaError("text field '" + m.text + "' not found in header");
  const int id_col = m.id.empty() ? -1 : column(m.id);
  const int lang_col = m.language.empty() ? -1 : column(m.language);
  const int cat_col = m.category.empty() ? -1 : column(m.category);
  const int src_col = m.source.empty() ? -1 : column(m.source);

  std::vector<RawRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() == 1 && rec[0].empty()) continue;  // blank line
    auto get = [&](int col) -> std::string {
      return col >= 0 && static_cast<std::size_t>(col) < rec.size() ? rec[col] : std::string();
    };
    RawRow row;
    row.text = get(text_col);
    row.id = get(id_col);
    row.lang = get(lang_col);
    row.category = get(cat_col);
    row.source = get(src_col);
    row.has_lang = lang_col >= 0;
    row.has_category = cat_col >= 0;
    row.has_source = src_col >= 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RawRow> rows_from_jsonl(std::string_view content, const FieldMapping& m) {
  std::vector<RawRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) nl = content.size();
    std::string_view line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (nl == content.size()) break;
      continue;
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) throw SchemaError("line " + std::to_string(line_no) + ": not an object");
    auto field = [&](const std::string& key, bool& present) -> std::string {
      present = false;
      if (key.empty() || !obj.contains(key) || obj[key].is_null()) return {};
      present = true;
      const json& v = obj[key];
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      throw SchemaError("line " + std::to_string(line_no) + ": field '" + key + "' is not a string");
    };
    RawRow row;
    bool has_text = false, has_id = false;
    row.text = field(m.text, has_text);
    if (!has_text)
      throw SchemaError("line " + std::to_string(line_no) + ": missing text field '" + m.text + "'");
    row.id = field(m.id, has_id);
    row.lang = field(m.language, row.has_lang);
    row.category = field(m.category, row.has_category);
    row.source = field(m.source, row.has_source);
    rows.push_back(std::move(row));
    if (nl == content.size()) break;
  }
  return rows;
}

}  // namespace

SeedCorpus parse_seeds(std::string_view content, CorpusFormat format, const FieldMapping& mapping,
                       std::string_view source_name) {
  std::vector<RawRow> rows;
  switch (format) {
    case CorpusFormat::Csv: rows = rows_from_table(content, ',', mapping); break;
    case CorpusFormat::Tsv: rows = rows_from_table(content, '\t', mapping); break;
    case CorpusFormat::Jsonl: rows = rows_from_jsonl(content, mapping); break;
  }
  return build(std::move(rows), mapping, source_name);
}

SeedCorpus load_seeds(const std::filesystem::path& path, CorpusFormat format,
                      const FieldMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading corpus file " + path.string());
  return parse_seeds(buf.str(), format, mapping, path.filename().string());
}

SeedCorpus filter_baseline(const SeedCorpus& corpus, const std::map<std::string, Label>& verdicts) {
  SeedCorpus out;
  out.format_version = corpus.format_version;
  for (const SeedRecord& seed : corpus.seeds) {
    auto it = verdicts.find(seed.seed_id);
    if (it == verdicts.end())
      throw MissingBaselineError("no baseline verdict for seed '" + seed.seed_id + "'");
    if (it->second == Label::Toxic) out.seeds.push_back(seed);
  }
  return out;
}

std::string write_seeds_jsonl(const SeedCorpus& corpus) {
  std::string out;
  for (const SeedRecord& s : corpus.seeds) {
    json j = {{"id", s.seed_id},
              {"text", s.text},
              {"lang", to_string(s.language)},
              {"category", to_string(s.category)},
              {"source", s.source}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace mtmod
