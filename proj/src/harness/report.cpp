#include "harness/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"

namespace captem::harness {

using nlohmann::json;

std::size_t MetricReport::error_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.errors.size();
  return n;
}

std::map<std::string, double> flatten_metrics(const PairRecord& p) {
  std::map<std::string, double> m;
  if (p.judge) {
    m["correctness"] = p.judge->correctness;
    m["detail"] = p.judge->detail;
    m["context"] = p.judge->context;
    m["temporal"] = p.judge->temporal;
  }
  if (p.cider) m["cider"] = *p.cider;
  if (p.rouge_l) m["rouge_l"] = *p.rouge_l;
  if (p.autodq_f) m["autodq"] = *p.autodq_f;
  if (p.tem) m["tem"] = p.tem->score.combined;
  return m;
}

void MetricReport::recompute_aggregates() {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& p : pairs) {
    for (const auto& [k, v] : flatten_metrics(p)) {
      acc[k].first += v;
      ++acc[k].second;
    }
  }
  aggregates.clear();
  for (const auto& [k, sc] : acc) {
    aggregates[k] = {sc.first / static_cast<double>(sc.second), sc.second};
  }
}

namespace {

json pair_to_json(const PairRecord& p) {
  json j = {{"id", p.id}};
  if (p.tem) {
    const auto& s = p.tem->score;
    j["tem"] = {{"lcs_length", s.lcs_length},
                {"lcs_score", s.lcs_score},
                {"precision", s.precision},
                {"recall", s.recall},
                {"f_measure", s.f_measure},
                {"combined", s.combined},
                {"generated_events", p.tem->generated_events},
                {"reference_events", p.tem->reference_events}};
  }
  if (p.autodq_f) j["autodq_f"] = *p.autodq_f;
  if (p.cider) j["cider"] = *p.cider;
  if (p.rouge_l) j["rouge_l"] = *p.rouge_l;
  if (p.judge) {
    j["judge"] = {{"correctness", p.judge->correctness},
                  {"detail", p.judge->detail},
                  {"context", p.judge->context},
                  {"temporal", p.judge->temporal}};
  }
  json errs = json::array();
  for (const auto& e : p.errors) {
    errs.push_back({{"metric", e.metric}, {"code", e.code}, {"message", e.message}});
  }
  j["errors"] = std::move(errs);
  return j;
}

PairRecord pair_from_json(const json& j) {
  PairRecord p;
  p.id = j.at("id").get<std::string>();
  if (j.contains("tem")) {
    const auto& t = j.at("tem");
    TemRecord r;
    r.score.lcs_length = t.at("lcs_length").get<std::size_t>();
    r.score.lcs_score = t.at("lcs_score").get<double>();
    r.score.precision = t.at("precision").get<double>();
    r.score.recall = t.at("recall").get<double>();
    r.score.f_measure = t.at("f_measure").get<double>();
    r.score.combined = t.at("combined").get<double>();
    r.generated_events = t.value("generated_events", std::size_t{0});
    r.reference_events = t.value("reference_events", std::size_t{0});
    p.tem = r;
  }
  if (j.contains("autodq_f")) p.autodq_f = j.at("autodq_f").get<double>();
  if (j.contains("cider")) p.cider = j.at("cider").get<double>();
  if (j.contains("rouge_l")) p.rouge_l = j.at("rouge_l").get<double>();
  if (j.contains("judge")) {
    const auto& s = j.at("judge");
    p.judge = semantic::JudgeScores{s.at("correctness").get<double>(), s.at("detail").get<double>(),
                                    s.at("context").get<double>(), s.at("temporal").get<double>()};
  }
  for (const auto& e : j.value("errors", json::array())) {
    p.errors.push_back({e.at("metric").get<std::string>(), e.at("code").get<std::string>(),
                        e.value("message", "")});
  }
  return p;
}

}  // namespace

std::string report_to_json(const MetricReport& r) {
  json templates = json::array();
  for (const auto& t : r.meta.templates) {
    templates.push_back({{"name", t.name}, {"version", t.version}});
  }
  json meta = {{"tool_version", r.meta.tool_version}, {"backend", r.meta.backend},
               {"config_hash", r.meta.config_hash},   {"templates", templates},
               {"metrics", r.meta.metrics},           {"align", r.meta.align},
               {"timestamp", r.meta.timestamp}};
  json pairs = json::array();
  for (const auto& p : r.pairs) pairs.push_back(pair_to_json(p));
  json aggs = json::object();
  for (const auto& [k, a] : r.aggregates) aggs[k] = {{"mean", a.mean}, {"count", a.count}};

  const json root = {{"meta", meta},
                     {"pairs", pairs},
                     {"aggregates", aggs},
                     {"error_count", r.error_count()}};
  return root.dump(2) + "\n";
}

MetricReport report_from_json(const std::string& text, const std::string& origin) {
  const json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    throw InputParseError(origin, 1, "report is not a JSON object");
  }
  MetricReport r;
  try {
    const auto& meta = root.at("meta");
    r.meta.tool_version = meta.value("tool_version", "");
    r.meta.backend = meta.value("backend", "");
    r.meta.config_hash = meta.value("config_hash", "");
    for (const auto& t : meta.value("templates", json::array())) {
      r.meta.templates.push_back({t.at("name").get<std::string>(), t.at("version").get<int>()});
    }
    r.meta.metrics = meta.value("metrics", std::vector<std::string>{});
    r.meta.align = meta.value("align", false);
    r.meta.timestamp = meta.value("timestamp", "");
    for (const auto& p : root.at("pairs")) r.pairs.push_back(pair_from_json(p));
    const json aggregates = root.value("aggregates", json::object());
    for (const auto& [k, a] : aggregates.items()) {
      r.aggregates[k] = {a.at("mean").get<double>(), a.at("count").get<std::size_t>()};
    }
  } catch (const json::exception& e) {
    throw InputParseError(origin, 1, std::string("malformed report: ") + e.what());
  }
  return r;
}

MetricReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open report " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str(), path.string());
}

std::string render_table(const MetricReport& report) {
  static const std::vector<std::string> headers = {"Correctness", "Detail",  "Context",
                                                   "Temporal",    "CIDEr",   "Rouge-L",
                                                   "AutoDQ",      "TEM"};
  std::size_t id_width = 4;
  for (const auto& p : report.pairs) id_width = std::max(id_width, p.id.size());

  std::string out = fmt::format("{:<{}}", "id", id_width);
  for (const auto& h : headers) out += fmt::format(" {:>11}", h);
  out += "  errors\n";
  const std::size_t rule_width = out.size() - 1;

  const auto row = [&](const std::string& label, const std::map<std::string, double>& values,
                       const std::string& tail) {
    std::string line = fmt::format("{:<{}}", label, id_width);
    for (const auto& col : table_columns()) {
      const auto it = values.find(col);
      line += it == values.end() ? fmt::format(" {:>11}", "-")
                                 : fmt::format(" {:>11.4f}", it->second);
    }
    return line + "  " + tail + "\n";
  };

  for (const auto& p : report.pairs) {
    out += row(p.id, flatten_metrics(p), std::to_string(p.errors.size()));
  }
  out += std::string(rule_width, '-') + "\n";
  std::map<std::string, double> means;
  for (const auto& [k, a] : report.aggregates) means[k] = a.mean;
  out += row("mean", means, std::to_string(report.error_count()));
  return out;
}

void write_report(const MetricReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output dir " + dir.string());
  for (const auto& [name, body] :
       {std::pair{"report.json", report_to_json(report)}, std::pair{"report.txt", render_table(report)}}) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + (dir / name).string());
  }
}

}  // namespace captem::harness
