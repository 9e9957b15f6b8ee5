#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mtmod/harness.hpp"

namespace mtmod {

struct EfrRow {
  std::string mr_id;
  std::string level;  // Baseline, Char, Paragraph, Picture, Multi
  std::string target;
  std::size_t generated = 0;     // verdicts received
  std::size_t misclassified = 0; // NonToxic verdicts
  std::size_t transport_failures = 0;

  /// misclassified / generated * 100 rounded half-up to one decimal, as an
  /// integer count of tenths. Exact integer arithmetic.
  long efr_tenths() const;
  double efr_percent() const { return static_cast<double>(efr_tenths()) / 10.0; }

  bool operator==(const EfrRow&) const = default;
};

struct EfrReport {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  std::string generated_at;  // ISO-8601 UTC
  std::map<std::string, std::string> target_versions;
  std::vector<EfrRow> rows;
  std::vector<std::string> warnings;

  const EfrRow* find(std::string_view mr_id, std::string_view target) const;
  bool operator==(const EfrReport&) const = default;
};

/// Groups verdicts by (chain id, target). Transport failures count in
/// neither numerator nor denominator; groups with no verdicts are omitted
/// with a warning.
EfrReport compute_efr(const VerdictLog& log, const Manifest& manifest);

json report_to_json(const EfrReport& report);
EfrReport report_from_json(const json& j);

enum class ReportFormat { Json, Markdown };
ReportFormat parse_report_format(std::string_view s);

/// Markdown: one row per chain id, grouped Baseline / Char / Paragraph /
/// Picture / Multi, one EFR column per target plus transport failures.
std::string write_report(const EfrReport& report, ReportFormat format);

/// Copies the artifact of every case some target labeled NonToxic into
/// out_dir/images and writes out_dir/index.jsonl with {image, text,
/// label: "toxic", case_id, seed_id, mr_id}. Returns the number of cases.
std::size_t export_retraining_set(const Manifest& manifest, const VerdictLog& log,
                                  const std::filesystem::path& out_dir);

}  // namespace mtmod
