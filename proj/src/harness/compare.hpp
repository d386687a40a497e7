#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harness/report.hpp"

namespace captem::harness {

struct MetricDelta {
  std::optional<double> a;
  std::optional<double> b;
  /// b - a when both sides have the metric.
  std::optional<double> delta() const {
    if (a && b) return *b - *a;
    return std::nullopt;
  }
};

struct PairDelta {
  std::string id;
  std::map<std::string, MetricDelta> metrics;
};

struct ReportComparison {
  std::map<std::string, MetricDelta> aggregates;
  std::vector<PairDelta> pairs;  // shared ids, in report_a order
  std::vector<std::string> only_in_a;
  std::vector<std::string> only_in_b;
};

/// Throws Error(kNoOverlap) when the reports share no pair id.
ReportComparison compare_reports(const MetricReport& a, const MetricReport& b);

std::string render_comparison(const ReportComparison& cmp);
std::string comparison_to_json(const ReportComparison& cmp);

}  // namespace captem::harness
