#include "mtmod/report.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <map>
#include <set>

#include "mtmod/error.hpp"

namespace mtmod {

long EfrRow::efr_tenths() const {
  if (generated == 0) return 0;
  // round(1000 m / g) with halves rounded up: floor((2000 m + g) / 2g)
  const auto m = static_cast<long long>(misclassified), g = static_cast<long long>(generated);
  return static_cast<long>((2000 * m + g) / (2 * g));
}

const EfrRow* EfrReport::find(std::string_view mr_id, std::string_view target) const {
  for (const EfrRow& r : rows)
    if (r.mr_id == mr_id && r.target == target) return &r;
  return nullptr;
}

namespace {

constexpr std::string_view kLevels[] = {"Baseline", "Char", "Paragraph", "Picture", "Multi"};

int level_rank(std::string_view level) {
  for (int i = 0; i < 5; ++i)
    if (kLevels[i] == level) return i;
  return 5;
}

std::string level_of(std::string_view mr_id) {
  try {
    return chain_level(mr_id);
  } catch (const ConfigError&) {
    return "Multi";
  }
}

// Canonical relation order inside a level; chains sort after by name.
int mr_rank(std::string_view mr_id) {
  if (mr_id.find('+') != std::string_view::npos) return 100;
  try {
    return static_cast<int>(parse_mr(mr_id));
  } catch (const ConfigError&) {
    return 100;
  }
}

bool row_less(const std::string& a_mr, const std::string& b_mr) {
  const int la = level_rank(level_of(a_mr)), lb = level_rank(level_of(b_mr));
  if (la != lb) return la < lb;
  const int ra = mr_rank(a_mr), rb = mr_rank(b_mr);
  if (ra != rb) return ra < rb;
  return a_mr < b_mr;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string title_of(std::string_view mr_id) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= mr_id.size()) {
    std::size_t plus = mr_id.find('+', pos);
    if (plus == std::string_view::npos) plus = mr_id.size();
    const std::string_view part = mr_id.substr(pos, plus - pos);
    if (!out.empty()) out += " + ";
    try {
      const MrInfo& info = mr_info(parse_mr(part));
      out += std::string(info.title);
      if (info.level != MrLevel::Baseline) out += " (" + std::string(info.number) + ")";
    } catch (const ConfigError&) {
      out += std::string(part);
    }
    pos = plus + 1;
  }
  return out;
}

std::string format_tenths(long t) { return std::to_string(t / 10) + "." + std::to_string(t % 10); }

}  // namespace

EfrReport compute_efr(const VerdictLog& log, const Manifest& manifest) {
  EfrReport report;
  report.generated_at = utc_now();
  report.target_versions = log.target_versions;
  std::map<std::string, std::string> mr_of;
  for (const ManifestEntry& e : manifest.entries) mr_of[e.case_id] = e.mr_id;

  std::map<std::pair<std::string, std::string>, EfrRow> groups;
  auto group = [&](const std::string& case_id, const std::string& target) -> EfrRow* {
    auto it = mr_of.find(case_id);
    if (it == mr_of.end()) {
      report.warnings.push_back("case '" + case_id + "' is not in the manifest; ignored");
      return nullptr;
    }
    EfrRow& row = groups[{it->second, target}];
    row.mr_id = it->second;
    row.level = level_of(it->second);
    row.target = target;
    return &row;
  };
  std::set<std::pair<std::string, std::string>> seen;
  for (const Verdict& v : log.verdicts) {
    if (!seen.insert({v.case_id, v.target}).second) {
      report.warnings.push_back("duplicate verdict for case '" + v.case_id + "' on target '" + v.target + "'; kept the first");
      continue;
    }
    if (EfrRow* row = group(v.case_id, v.target)) {
      ++row->generated;
      if (v.label == Label::NonToxic) ++row->misclassified;
    }
  }
  for (const CaseFailure& f : log.failures)
    if (EfrRow* row = group(f.case_id, f.target)) ++row->transport_failures;

  for (auto& [key, row] : groups) {
    if (row.generated == 0) {
      report.warnings.push_back("no verdicts for " + row.mr_id + " on " + row.target + " (" +
                                std::to_string(row.transport_failures) + " transport failures); row omitted");
      continue;
    }
    report.rows.push_back(row);
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const EfrRow& a, const EfrRow& b) {
    if (a.mr_id != b.mr_id) return row_less(a.mr_id, b.mr_id);
    return a.target < b.target;
  });
  return report;
}

json report_to_json(const EfrReport& report) {
  json rows = json::array();
  for (const EfrRow& r : report.rows)
    rows.push_back({{"mr_id", r.mr_id},
                    {"level", r.level},
                    {"target", r.target},
                    {"generated", r.generated},
                    {"misclassified", r.misclassified},
                    {"transport_failures", r.transport_failures},
                    {"efr_percent", r.efr_percent()}});
  return {{"schema_version", report.schema_version},
          {"generated_at", report.generated_at},
          {"target_versions", report.target_versions},
          {"rows", rows},
          {"warnings", report.warnings}};
}

EfrReport report_from_json(const json& j) {
  try {
    EfrReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != EfrReport::kSchemaVersion)
      throw SchemaError("unsupported report schema version " + std::to_string(r.schema_version));
    r.generated_at = j.at("generated_at").get<std::string>();
    r.target_versions = j.value("target_versions", std::map<std::string, std::string>{});
    for (const json& row : j.at("rows"))
      r.rows.push_back({row.at("mr_id").get<std::string>(), row.at("level").get<std::string>(),
                        row.at("target").get<std::string>(), row.at("generated").get<std::size_t>(),
                        row.at("misclassified").get<std::size_t>(), row.value("transport_failures", std::size_t{0})});
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("bad report: ") + ex.what());
  }
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw ConfigError("unknown report format '" + std::string(s) + "'");
}

std::string write_report(const EfrReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(report).dump(2) + "\n";

  std::vector<std::string> targets, mrs;
  for (const EfrRow& r : report.rows) {
    if (std::find(targets.begin(), targets.end(), r.target) == targets.end()) targets.push_back(r.target);
    if (std::find(mrs.begin(), mrs.end(), r.mr_id) == mrs.end()) mrs.push_back(r.mr_id);
  }
  std::sort(targets.begin(), targets.end());
  std::stable_sort(mrs.begin(), mrs.end(), row_less);

  std::string out = "| Level | MR | Perturbation |";
  std::string rule = "|---|---|---|";
  for (const std::string& t : targets) {
    out += " " + t + " EFR (%) |";
    rule += "---:|";
  }
  out += " Transport failures |\n" + rule + "---:|\n";
  std::string last_level;
  for (const std::string& mr : mrs) {
    const std::string level = level_of(mr);
    out += "| " + (level != last_level ? level : std::string()) + " | " + mr + " | " + title_of(mr) + " |";
    last_level = level;
    std::size_t failures = 0;
    for (const std::string& t : targets) {
      const EfrRow* r = report.find(mr, t);
      out += " " + (r != nullptr ? format_tenths(r->efr_tenths()) : std::string("-")) + " |";
      if (r != nullptr) failures += r->transport_failures;
    }
    out += " " + std::to_string(failures) + " |\n";
  }
  return out;
}

std::size_t export_retraining_set(const Manifest& manifest, const VerdictLog& log, const std::filesystem::path& out_dir) {
  std::set<std::string> missed;
  for (const Verdict& v : log.verdicts)
    if (v.label == Label::NonToxic) missed.insert(v.case_id);
  std::error_code ec;
  std::filesystem::create_directories(out_dir / kImagesDir, ec);
  if (ec) throw IoError("cannot create " + (out_dir / kImagesDir).string() + ": " + ec.message());
  std::ofstream index(out_dir / "index.jsonl", std::ios::binary | std::ios::trunc);
  if (!index) throw IoError("cannot write " + (out_dir / "index.jsonl").string());
  std::size_t count = 0;
  for (const ManifestEntry& e : manifest.entries) {
    if (!missed.contains(e.case_id) || e.skipped_reason) continue;
    const std::filesystem::path src = manifest.artifact(e);
    const std::string image = std::string(kImagesDir) + "/" + src.filename().string();
    std::filesystem::copy_file(src, out_dir / image, std::filesystem::copy_options::overwrite_existing, ec);
    if (ec) throw IoError("cannot copy " + src.string() + ": " + ec.message());
    const json line = {{"image", image}, {"text", e.text},     {"label", "toxic"},
                       {"case_id", e.case_id}, {"seed_id", e.seed_id}, {"mr_id", e.mr_id}};
    index << line.dump() << '\n';
    ++count;
  }
  if (!index) throw IoError("cannot write " + (out_dir / "index.jsonl").string());
  return count;
}

}  // namespace mtmod
