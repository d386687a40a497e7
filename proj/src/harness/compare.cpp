#include "harness/compare.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"

namespace captem::harness {

namespace {

std::map<std::string, MetricDelta> merge(const std::map<std::string, double>& a,
                                         const std::map<std::string, double>& b) {
  std::map<std::string, MetricDelta> out;
  for (const auto& [k, v] : a) out[k].a = v;
  for (const auto& [k, v] : b) out[k].b = v;
  return out;
}

std::map<std::string, double> means(const MetricReport& r) {
  std::map<std::string, double> m;
  for (const auto& [k, agg] : r.aggregates) m[k] = agg.mean;
  return m;
}

std::string cell(const std::optional<double>& v) {
  return v ? fmt::format("{:+.4f}", *v) : std::string("-");
}

nlohmann::json delta_json(const std::map<std::string, MetricDelta>& metrics) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, d] : metrics) {
    nlohmann::json e;
    e["a"] = d.a ? nlohmann::json(*d.a) : nlohmann::json(nullptr);
    e["b"] = d.b ? nlohmann::json(*d.b) : nlohmann::json(nullptr);
    const auto delta = d.delta();
    e["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
    j[k] = std::move(e);
  }
  return j;
}

}  // namespace

ReportComparison compare_reports(const MetricReport& a, const MetricReport& b) {
  std::map<std::string, const PairRecord*> b_by_id;
  for (const auto& p : b.pairs) b_by_id.emplace(p.id, &p);

  ReportComparison cmp;
  std::set<std::string> a_ids;
  for (const auto& p : a.pairs) {
    a_ids.insert(p.id);
    const auto it = b_by_id.find(p.id);
    if (it == b_by_id.end()) {
      cmp.only_in_a.push_back(p.id);
      continue;
    }
    cmp.pairs.push_back({p.id, merge(flatten_metrics(p), flatten_metrics(*it->second))});
  }
  for (const auto& p : b.pairs) {
    if (!a_ids.count(p.id)) cmp.only_in_b.push_back(p.id);
  }
  if (cmp.pairs.empty()) throw Error(ErrorCode::kNoOverlap, "reports share no pair id");
  cmp.aggregates = merge(means(a), means(b));
  return cmp;
}

std::string render_comparison(const ReportComparison& cmp) {
  std::size_t id_width = 4;
  for (const auto& p : cmp.pairs) id_width = std::max(id_width, p.id.size());

  std::string out = fmt::format("{:<{}}", "id", id_width);
  for (const auto& col : table_columns()) out += fmt::format(" {:>11}", col);
  out += "\n";
  const std::size_t rule_width = out.size() - 1;
  const auto row = [&](const std::string& label, const std::map<std::string, MetricDelta>& m) {
    std::string line = fmt::format("{:<{}}", label, id_width);
    for (const auto& col : table_columns()) {
      const auto it = m.find(col);
      line += fmt::format(" {:>11}", it == m.end() ? "-" : cell(it->second.delta()));
    }
    return line + "\n";
  };
  for (const auto& p : cmp.pairs) out += row(p.id, p.metrics);
  out += std::string(rule_width, '-') + "\n";
  out += row("mean", cmp.aggregates);
  if (!cmp.only_in_a.empty()) out += fmt::format("only in a: {}\n", cmp.only_in_a.size());
  if (!cmp.only_in_b.empty()) out += fmt::format("only in b: {}\n", cmp.only_in_b.size());
  return out;
}

std::string comparison_to_json(const ReportComparison& cmp) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : cmp.pairs) pairs.push_back({{"id", p.id}, {"metrics", delta_json(p.metrics)}});
  const nlohmann::json root = {{"aggregates", delta_json(cmp.aggregates)},
                               {"pairs", pairs},
                               {"only_in_a", cmp.only_in_a},
                               {"only_in_b", cmp.only_in_b}};
  return root.dump(2) + "\n";
}

}  // namespace captem::harness
