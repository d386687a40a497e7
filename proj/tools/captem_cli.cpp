// captem command-line front end. Links only the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "captem.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitFatal = 2;

struct ConfigDeleter {
  void operator()(captem_config* c) const { captem_config_free(c); }
};
struct BackendDeleter {
  void operator()(captem_backend* b) const { captem_backend_free(b); }
};
struct ReportDeleter {
  void operator()(captem_report* r) const { captem_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { captem_string_free(s); }
};
using ConfigPtr = std::unique_ptr<captem_config, ConfigDeleter>;
using BackendPtr = std::unique_ptr<captem_backend, BackendDeleter>;
using ReportPtr = std::unique_ptr<captem_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

class Failure {
 public:
  explicit Failure(captem_status s) : status_(s), message_(captem_last_error_message()) {}
  captem_status status() const { return status_; }
  const std::string& message() const { return message_; }

 private:
  captem_status status_;
  std::string message_;
};

void check(captem_status s) {
  if (s != CAPTEM_OK) throw Failure(s);
}

ConfigPtr load_config(const std::string& path) {
  captem_config* raw = nullptr;
  check(captem_config_load(path.empty() ? nullptr : path.c_str(), &raw));
  return ConfigPtr(raw);
}

void write_file(const std::string& path, const char* text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(kExitFatal);
  }
}

// Accepts plain seconds or a number with an s/m/h/d suffix.
std::optional<double> parse_duration(std::string text) {
  if (text.empty()) return std::nullopt;
  double unit = 1.0;
  switch (text.back()) {
    case 's': unit = 1.0; text.pop_back(); break;
    case 'm': unit = 60.0; text.pop_back(); break;
    case 'h': unit = 3600.0; text.pop_back(); break;
    case 'd': unit = 86400.0; text.pop_back(); break;
    default: break;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || v < 0) return std::nullopt;
    return v * unit;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct EvalArgs {
  std::string predictions, references, metrics = "tem,autodq,cider,rougel", backend = "mock",
                                       config, out, timestamp;
  bool align = false;
};

int run_eval(const EvalArgs& a) {
  auto cfg = load_config(a.config);
  captem_backend* braw = nullptr;
  check(captem_backend_create(a.backend.c_str(), cfg.get(), &braw));
  BackendPtr backend(braw);
  captem_report* rraw = nullptr;
  check(captem_eval_run(a.predictions.c_str(), a.references.c_str(), a.metrics.c_str(),
                        backend.get(), cfg.get(), a.align ? 1 : 0,
                        a.timestamp.empty() ? nullptr : a.timestamp.c_str(), &rraw));
  ReportPtr report(rraw);
  check(captem_report_write(report.get(), a.out.c_str()));

  char* table = nullptr;
  check(captem_report_table(report.get(), &table));
  StringPtr table_owner(table);
  std::cout << table;
  const std::size_t errors = captem_report_error_count(report.get());
  if (errors) {
    std::cerr << "warning: " << errors << " per-pair error(s) recorded in " << a.out
              << "/report.json\n";
    return kExitPartial;
  }
  return kExitOk;
}

struct TrajectoryArgs {
  std::string detections, out, config;
  double fps = 16.0;
  std::size_t frames = 16;
  std::size_t frame_count = 0;
};

int run_trajectory(const TrajectoryArgs& a) {
  ConfigPtr cfg = load_config(a.config);
  char* json = nullptr;
  char* warnings = nullptr;
  check(captem_trajectory_run(a.detections.c_str(), a.fps, a.frames, a.frame_count, cfg.get(),
                              &json, &warnings));
  StringPtr json_owner(json), warn_owner(warnings);
  if (*warnings) {
    std::string w = warnings;
    std::size_t start = 0;
    for (auto nl = w.find('\n'); nl != std::string::npos; nl = w.find('\n', start)) {
      std::cerr << "warning: " << w.substr(start, nl - start) << "\n";
      start = nl + 1;
    }
  }
  if (a.out.empty() || a.out == "-") {
    std::cout << json;
  } else {
    write_file(a.out, json);
  }
  return kExitOk;
}

int run_compare(const std::string& pa, const std::string& pb, bool as_json) {
  captem_report* ra = nullptr;
  captem_report* rb = nullptr;
  check(captem_report_load(pa.c_str(), &ra));
  ReportPtr a(ra);
  check(captem_report_load(pb.c_str(), &rb));
  ReportPtr b(rb);
  char* out = nullptr;
  check(captem_compare_reports(a.get(), b.get(), as_json ? 1 : 0, &out));
  StringPtr owner(out);
  std::cout << out;
  return kExitOk;
}

int run_purge(const std::string& dir, const std::string& older_than) {
  const auto seconds = parse_duration(older_than);
  if (!seconds) {
    std::cerr << "error: --older-than expects e.g. 3600, 90m, 12h or 7d\n";
    return kExitFatal;
  }
  std::size_t removed = 0;
  check(captem_cache_purge(dir.c_str(), *seconds, &removed));
  std::cout << removed << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Caption metrics, event matching and face-aware frame selection"};
  app.set_version_flag("--version", captem_version());
  app.require_subcommand(1);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score predictions against references");
  eval->add_option("--predictions", ev.predictions, "JSONL of {id, prediction}")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--references", ev.references, "JSONL of {id, reference}")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--metrics", ev.metrics, "tem,autodq,cider,rougel[,judge]")
      ->capture_default_str();
  eval->add_option("--backend", ev.backend, "mock | gateway")
      ->check(CLI::IsMember({"mock", "gateway"}))
      ->capture_default_str();
  eval->add_option("--config", ev.config, "key = value config file")->check(CLI::ExistingFile);
  eval->add_option("--out", ev.out, "output directory")->required();
  eval->add_flag("--align", ev.align, "rewrite predictions into the reference style first");
  eval->add_option("--timestamp", ev.timestamp,
                   "timestamp recorded in the report (default: SOURCE_DATE_EPOCH or now)");

  TrajectoryArgs tr;
  auto* traj = app.add_subcommand("trajectory", "Select main-character frames from detections");
  traj->add_option("--detections", tr.detections, "JSONL of face detections")
      ->required()
      ->check(CLI::ExistingFile);
  traj->add_option("--frames", tr.frames, "frames to select")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  traj->add_option("--fps", tr.fps, "source frame rate")
      ->required()
      ->check(CLI::PositiveNumber);
  traj->add_option("--frame-count", tr.frame_count,
                   "source video length (default: last detection frame + 1)")
      ->check(CLI::PositiveNumber);
  traj->add_option("--config", tr.config, "config file (lambda, cost_gate, max_age)")
      ->check(CLI::ExistingFile);
  traj->add_option("--out", tr.out, "output JSON file (default: stdout)");

  std::string report_a, report_b;
  bool compare_json = false;
  auto* cmp = app.add_subcommand("compare", "Per-metric deltas between two reports (b - a)");
  cmp->add_option("report_a", report_a)->required()->check(CLI::ExistingFile);
  cmp->add_option("report_b", report_b)->required()->check(CLI::ExistingFile);
  cmp->add_flag("--json", compare_json, "emit JSON");

  std::string cache_dir = ".captem-cache", older_than;
  auto* purge = app.add_subcommand("purge-cache", "Remove cached replies older than a duration");
  purge->add_option("--dir", cache_dir, "cache directory")->capture_default_str();
  purge->add_option("--older-than", older_than, "age, e.g. 3600, 90m, 12h, 7d")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitFatal;
  }

  try {
    if (*eval) return run_eval(ev);
    if (*traj) return run_trajectory(tr);
    if (*cmp) return run_compare(report_a, report_b, compare_json);
    if (*purge) return run_purge(cache_dir, older_than);
  } catch (const Failure& f) {
    std::cerr << "error: " << captem_status_name(f.status()) << ": " << f.message() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
