#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtmod {

enum class Language { English, Chinese };
enum class Category { Abuse, Spam, Porn };
enum class Label { Toxic, NonToxic };

std::string_view to_string(Language lang);
std::string_view to_string(Category cat);
std::string_view to_string(Label label);
Language parse_language(std::string_view s);
Category parse_category(std::string_view s);
Label parse_label(std::string_view s);

struct SeedRecord {
  std::string seed_id;
  std::string text;  // normalized UTF-8, never empty
  Language language = Language::English;
  Category category = Category::Abuse;
  std::string source;

  bool operator==(const SeedRecord&) const = default;
};

struct SeedCorpus {
  static constexpr int kFormatVersion = 1;

  std::vector<SeedRecord> seeds;
  int format_version = kFormatVersion;
  /// Rows dropped at load time because their text was empty.
  std::size_t dropped_count = 0;

  bool operator==(const SeedCorpus&) const = default;
};

enum class CorpusFormat { Csv, Tsv, Jsonl };

CorpusFormat parse_corpus_format(std::string_view s);
/// Guesses from the file extension; defaults to JSONL.
CorpusFormat corpus_format_for(const std::filesystem::path& path);

/// Which column (CSV/TSV header) or object key (JSONL) feeds each field.
/// Empty optional fields fall back to the defaults below.
struct FieldMapping {
  std::string text = "text";
  std::string id = "id";
  std::string language = "lang";
  std::string category = "category";
  std::string source = "source";

  Language default_language = Language::English;
  Category default_category = Category::Abuse;
};

SeedCorpus parse_seeds(std::string_view content, CorpusFormat format,
                       const FieldMapping& mapping = {},
                       std::string_view source_name = {});

SeedCorpus load_seeds(const std::filesystem::path& path, CorpusFormat format,
                      const FieldMapping& mapping = {});

/// Keeps only seeds whose baseline verdict is Toxic, in corpus order.
/// Throws MissingBaselineError when any seed lacks a verdict.
SeedCorpus filter_baseline(const SeedCorpus& corpus,
                           const std::map<std::string, Label>& verdicts);

/// Canonical JSONL form, loadable with the default mapping: one
/// {id, text, lang, category, source} object per line.
std::string write_seeds_jsonl(const SeedCorpus& corpus);

namespace csv {
/// RFC 4180 records: quoted fields may hold separators, doubled quotes and
/// newlines. A trailing newline does not produce an empty record.
std::vector<std::vector<std::string>> parse(std::string_view content, char sep);
}  // namespace csv

}  // namespace mtmod
