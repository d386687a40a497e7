#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/tem.hpp"
#include "semantic/backend.hpp"

namespace captem::harness {

struct PairError {
  std::string metric;  // "tem", "autodq", "judge", "align", ...
  std::string code;    // error_code_name()
  std::string message;
};

struct TemRecord {
  TemScore score;
  std::size_t generated_events = 0;
  std::size_t reference_events = 0;
};

struct PairRecord {
  std::string id;
  std::optional<TemRecord> tem;
  std::optional<double> autodq_f;
  std::optional<double> cider;
  std::optional<double> rouge_l;
  std::optional<semantic::JudgeScores> judge;
  std::vector<PairError> errors;
};

struct Aggregate {
  double mean = 0.0;
  std::size_t count = 0;
};

struct RunMetadata {
  std::string tool_version;
  std::string backend;
  std::string config_hash;
  std::vector<semantic::TemplateVersion> templates;
  std::vector<std::string> metrics;
  bool align = false;
  std::string timestamp;
};

/// Column order of the rendered table; also the aggregate keys.
inline const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> cols = {"correctness", "detail", "context", "temporal",
                                                "cider",       "rouge_l", "autodq", "tem"};
  return cols;
}

struct MetricReport {
  RunMetadata meta;
  std::vector<PairRecord> pairs;
  /// Unweighted means over the pairs where each metric succeeded.
  std::map<std::string, Aggregate> aggregates;

  std::size_t error_count() const;
  void recompute_aggregates();
};

/// Per-pair metric values keyed like the aggregates ("tem" is the combined
/// score), for metrics that are present.
std::map<std::string, double> flatten_metrics(const PairRecord& pair);

std::string report_to_json(const MetricReport& report);
/// Throws InputParseError on malformed reports.
MetricReport report_from_json(const std::string& text, const std::string& origin);
MetricReport load_report(const std::filesystem::path& path);

/// Fixed-width text table: one row per pair plus a mean row.
std::string render_table(const MetricReport& report);

/// Writes report.json and report.txt into `dir` (created if needed).
void write_report(const MetricReport& report, const std::filesystem::path& dir);

}  // namespace captem::harness
