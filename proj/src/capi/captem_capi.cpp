#include "captem.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/error.hpp"
#include "core/tem.hpp"
#include "gateway/response_cache.hpp"
#include "harness/compare.hpp"
#include "harness/config.hpp"
#include "harness/eval.hpp"
#include "harness/report.hpp"
#include "harness/trajectory_run.hpp"
#include "ngram/ngram.hpp"

struct captem_config {
  captem::harness::HarnessConfig value;
};

struct captem_backend {
  std::unique_ptr<captem::semantic::SemanticBackend> value;
};

struct captem_report {
  captem::harness::MetricReport value;
};

namespace {

thread_local std::string g_last_error;

captem_status fail(captem_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename Fn>
captem_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return CAPTEM_OK;
  } catch (const captem::Error& e) {
    return fail(static_cast<captem_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CAPTEM_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CAPTEM_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

#define CAPTEM_REQUIRE(cond, what)                                     \
  do {                                                                 \
    if (!(cond)) return fail(CAPTEM_INVALID_ARGUMENT, (what));         \
  } while (0)

}  // namespace

extern "C" {

const char* captem_version(void) { return "0.1.0"; }

const char* captem_status_name(captem_status status) {
  if (status < CAPTEM_OK || status > CAPTEM_INTERNAL) return "Unknown";
  return captem::error_code_name(static_cast<captem::ErrorCode>(status)).data();
}

const char* captem_last_error_message(void) { return g_last_error.c_str(); }

void captem_string_free(char* s) { std::free(s); }

captem_status captem_config_load(const char* path, captem_config** out) {
  CAPTEM_REQUIRE(out, "out is NULL");
  *out = nullptr;
  return guard([&] {
    auto cfg = std::make_unique<captem_config>();
    if (path) cfg->value = captem::harness::HarnessConfig::load(path);
    *out = cfg.release();
  });
}

captem_status captem_config_set(captem_config* cfg, const char* key, const char* value) {
  CAPTEM_REQUIRE(cfg && key && value, "NULL argument");
  return guard([&] { cfg->value.set(key, value); });
}

void captem_config_free(captem_config* cfg) { delete cfg; }

captem_status captem_backend_create(const char* kind, const captem_config* cfg,
                                    captem_backend** out) {
  CAPTEM_REQUIRE(kind && out, "NULL argument");
  *out = nullptr;
  return guard([&] {
    const captem::harness::HarnessConfig defaults;
    auto b = std::make_unique<captem_backend>();
    b->value = captem::harness::make_backend(kind, cfg ? cfg->value : defaults);
    *out = b.release();
  });
}

void captem_backend_free(captem_backend* backend) { delete backend; }

captem_status captem_eval_run(const char* predictions_path, const char* references_path,
                              const char* metrics, const captem_backend* backend,
                              const captem_config* cfg, int align, const char* timestamp,
                              captem_report** out) {
  CAPTEM_REQUIRE(predictions_path && references_path && backend && out, "NULL argument");
  *out = nullptr;
  return guard([&] {
    captem::harness::EvalOptions opts;
    if (metrics) opts.metrics = captem::harness::MetricSet::parse(metrics);
    opts.align = align != 0;
    if (timestamp) opts.timestamp = timestamp;
    const captem::harness::HarnessConfig defaults;
    auto r = std::make_unique<captem_report>();
    r->value = captem::harness::run_eval_files(predictions_path, references_path, *backend->value,
                                               cfg ? cfg->value : defaults, opts);
    *out = r.release();
  });
}

captem_status captem_report_load(const char* path, captem_report** out) {
  CAPTEM_REQUIRE(path && out, "NULL argument");
  *out = nullptr;
  return guard([&] {
    auto r = std::make_unique<captem_report>();
    r->value = captem::harness::load_report(path);
    *out = r.release();
  });
}

captem_status captem_report_json(const captem_report* report, char** out) {
  CAPTEM_REQUIRE(report && out, "NULL argument");
  return guard([&] { *out = dup_string(captem::harness::report_to_json(report->value)); });
}

captem_status captem_report_table(const captem_report* report, char** out) {
  CAPTEM_REQUIRE(report && out, "NULL argument");
  return guard([&] { *out = dup_string(captem::harness::render_table(report->value)); });
}

captem_status captem_report_write(const captem_report* report, const char* dir) {
  CAPTEM_REQUIRE(report && dir, "NULL argument");
  return guard([&] { captem::harness::write_report(report->value, dir); });
}

size_t captem_report_error_count(const captem_report* report) {
  return report ? report->value.error_count() : 0;
}

void captem_report_free(captem_report* report) { delete report; }

captem_status captem_compare_reports(const captem_report* a, const captem_report* b, int as_json,
                                     char** out) {
  CAPTEM_REQUIRE(a && b && out, "NULL argument");
  return guard([&] {
    const auto cmp = captem::harness::compare_reports(a->value, b->value);
    *out = dup_string(as_json ? captem::harness::comparison_to_json(cmp)
                              : captem::harness::render_comparison(cmp));
  });
}

captem_status captem_trajectory_run(const char* detections_path, double src_fps, size_t frames,
                                    size_t frame_count, const captem_config* cfg, char** out_json,
                                    char** warnings) {
  CAPTEM_REQUIRE(detections_path && out_json, "NULL argument");
  return guard([&] {
    captem::harness::TrajectoryOptions opts;
    opts.src_fps = src_fps;
    opts.frames = frames;
    if (frame_count) opts.frame_count = frame_count;
    if (cfg) opts.association = cfg->value.association;
    const auto result = captem::harness::run_trajectory_file(detections_path, opts);
    std::string json = captem::harness::trajectory_to_json(result);
    std::string warn;
    for (const auto& w : result.warnings) warn += w + "\n";
    char* json_c = dup_string(json);
    if (warnings) {
      try {
        *warnings = dup_string(warn);
      } catch (...) {
        std::free(json_c);
        throw;
      }
    }
    *out_json = json_c;
  });
}

captem_status captem_cache_purge(const char* cache_dir, double older_than_seconds,
                                 size_t* removed) {
  CAPTEM_REQUIRE(cache_dir && removed, "NULL argument");
  CAPTEM_REQUIRE(std::isfinite(older_than_seconds) && older_than_seconds >= 0,
                 "older_than must be a nonnegative number of seconds");
  return guard([&] {
    *removed = captem::gateway::purge_cache(
        cache_dir, std::chrono::seconds(static_cast<long long>(older_than_seconds)));
  });
}

captem_status captem_tem_score(const int* labels, size_t rows, size_t cols,
                               captem_tem_result* out) {
  CAPTEM_REQUIRE(out && (labels || rows * cols == 0), "NULL argument");
  for (size_t i = 0; i < rows * cols; ++i) {
    CAPTEM_REQUIRE(labels[i] >= CAPTEM_RELATION_NONE && labels[i] <= CAPTEM_RELATION_OPPOSITE,
                   "relation label out of range");
  }
  return guard([&] {
    captem::MatchMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) {
        m.set(i, j, static_cast<captem::RelationLabel>(labels[i * cols + j]));
      }
    }
    const auto s = captem::tem_score(m);
    *out = {s.lcs_length, s.lcs_score, s.precision, s.recall, s.f_measure, s.combined};
  });
}

captem_status captem_rouge_l(const char* prediction, const char* reference, double beta,
                             double* out) {
  CAPTEM_REQUIRE(prediction && reference && out, "NULL argument");
  return guard([&] {
    *out = captem::ngram::rouge_l(captem::ngram::tokenize(prediction),
                                  captem::ngram::tokenize(reference), beta);
  });
}

}  // extern "C"
