// Exercises the shared library through captem.h only.
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "captem.h"
#include "support/temp_dir.hpp"

namespace {

namespace fs = std::filesystem;
const fs::path kRoot = CAPTEM_SOURCE_DIR;

std::string take(char* s) {
  std::string out = s ? s : "";
  captem_string_free(s);
  return out;
}

struct Session {
  captem_config* cfg = nullptr;
  captem_backend* backend = nullptr;
  Session() {
    EXPECT_EQ(captem_config_load(nullptr, &cfg), CAPTEM_OK);
    EXPECT_EQ(captem_backend_create("mock", cfg, &backend), CAPTEM_OK);
  }
  ~Session() {
    captem_backend_free(backend);
    captem_config_free(cfg);
  }
};

captem_report* run_mini(const Session& s, const char* metrics = nullptr) {
  captem_report* report = nullptr;
  const auto preds = (kRoot / "data" / "mini_predictions.jsonl").string();
  const auto refs = (kRoot / "data" / "mini_references.jsonl").string();
  EXPECT_EQ(captem_eval_run(preds.c_str(), refs.c_str(), metrics, s.backend, s.cfg, 0,
                            "2024-01-01T00:00:00Z", &report),
            CAPTEM_OK)
      << captem_last_error_message();
  return report;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(captem_version(), "0.1.0");
  EXPECT_STREQ(captem_status_name(CAPTEM_OK), "Ok");
  EXPECT_STREQ(captem_status_name(CAPTEM_MISSING_REFERENCE), "MissingReference");
  EXPECT_STREQ(captem_status_name(CAPTEM_NO_OVERLAP), "NoOverlap");
}

TEST(CApi, TemScoreWorkedCase) {
  const int S = CAPTEM_RELATION_SAME, N = CAPTEM_RELATION_NONE;
  const int labels[] = {N, S, N, N,  //
                        S, N, N, N,  //
                        N, N, N, S};
  captem_tem_result r{};
  ASSERT_EQ(captem_tem_score(labels, 3, 4, &r), CAPTEM_OK);
  EXPECT_EQ(r.lcs_length, 2u);
  EXPECT_NEAR(r.combined, (2.0 / 3.0 + 6.0 / 7.0) / 2.0, 1e-12);
  const int bad[] = {7};
  EXPECT_EQ(captem_tem_score(bad, 1, 1, &r), CAPTEM_INVALID_ARGUMENT);
  EXPECT_EQ(captem_tem_score(nullptr, 1, 1, &r), CAPTEM_INVALID_ARGUMENT);
  EXPECT_EQ(captem_tem_score(nullptr, 0, 3, &r), CAPTEM_OK);
  EXPECT_EQ(r.combined, 0.0);
}

TEST(CApi, RougeL) {
  double f = 0;
  ASSERT_EQ(captem_rouge_l("the cat sat", "the cat sat down", 1.2, &f), CAPTEM_OK);
  EXPECT_NEAR(f, 0.8356, 1e-4);
  EXPECT_EQ(captem_rouge_l("a", "a", 0.0, &f), CAPTEM_INVALID_ARGUMENT);
  EXPECT_NE(std::string(captem_last_error_message()), "");
}

TEST(CApi, ConfigErrors) {
  captem_config* cfg = nullptr;
  ASSERT_EQ(captem_config_load(nullptr, &cfg), CAPTEM_OK);
  EXPECT_EQ(captem_config_set(cfg, "nope", "1"), CAPTEM_CONFIG);
  EXPECT_EQ(captem_config_set(cfg, "lambda", "2"), CAPTEM_CONFIG);
  EXPECT_EQ(captem_config_set(cfg, "lambda", "0.25"), CAPTEM_OK);
  captem_backend* b = nullptr;
  EXPECT_EQ(captem_backend_create("oracle", cfg, &b), CAPTEM_CONFIG);
  EXPECT_EQ(b, nullptr);
  captem_config_free(cfg);
  captem_config* missing = nullptr;
  EXPECT_EQ(captem_config_load("/nonexistent/captem.conf", &missing), CAPTEM_CONFIG);
  const auto sample = (kRoot / "data" / "sample.conf").string();
  EXPECT_EQ(captem_config_load(sample.c_str(), &missing), CAPTEM_OK);
  captem_config_free(missing);
}

TEST(CApi, EvalMatchesGolden) {
  Session s;
  captem_report* report = run_mini(s);
  ASSERT_NE(report, nullptr);
  char* json = nullptr;
  ASSERT_EQ(captem_report_json(report, &json), CAPTEM_OK);
  EXPECT_EQ(take(json), testutil::read_text(kRoot / "tests" / "golden" / "mini_report.json"));
  char* table = nullptr;
  ASSERT_EQ(captem_report_table(report, &table), CAPTEM_OK);
  EXPECT_EQ(take(table), testutil::read_text(kRoot / "tests" / "golden" / "mini_report.txt"));
  EXPECT_EQ(captem_report_error_count(report), 0u);

  testutil::TempDir dir;
  ASSERT_EQ(captem_report_write(report, dir.path().string().c_str()), CAPTEM_OK);
  captem_report* loaded = nullptr;
  ASSERT_EQ(captem_report_load((dir.path() / "report.json").string().c_str(), &loaded), CAPTEM_OK);
  char* cmp = nullptr;
  ASSERT_EQ(captem_compare_reports(report, loaded, 1, &cmp), CAPTEM_OK);
  EXPECT_NE(take(cmp).find("\"pairs\""), std::string::npos);
  captem_report_free(loaded);
  captem_report_free(report);
}

TEST(CApi, EvalInputErrors) {
  Session s;
  testutil::TempDir dir;
  const auto preds = dir.path() / "p.jsonl";
  const auto refs = dir.path() / "r.jsonl";
  testutil::write_text(preds, "{\"id\":\"a\",\"prediction\":\"x\"}\n{\"id\":\"b\",\"prediction\":\"y\"}\n");
  testutil::write_text(refs, "{\"id\":\"a\",\"reference\":\"x\"}\n");
  captem_report* report = nullptr;
  EXPECT_EQ(captem_eval_run(preds.c_str(), refs.c_str(), nullptr, s.backend, s.cfg, 0, nullptr,
                            &report),
            CAPTEM_MISSING_REFERENCE);
  EXPECT_NE(std::string(captem_last_error_message()).find("b"), std::string::npos);
  EXPECT_EQ(report, nullptr);
  testutil::write_text(refs, "{\"id\":\"a\",\"reference\":\"x\"}\nnot json\n");
  EXPECT_EQ(captem_eval_run(preds.c_str(), refs.c_str(), nullptr, s.backend, s.cfg, 0, nullptr,
                            &report),
            CAPTEM_INPUT_PARSE);
  EXPECT_EQ(captem_eval_run(preds.c_str(), refs.c_str(), "bleu", s.backend, s.cfg, 0, nullptr,
                            &report),
            CAPTEM_CONFIG);
}

TEST(CApi, CompareDisjoint) {
  Session s;
  testutil::TempDir dir;
  const auto write_pair = [&](const std::string& tag, const std::string& id) {
    testutil::write_text(dir.path() / (tag + "p.jsonl"), "{\"id\":\"" + id + "\",\"prediction\":\"x\"}\n");
    testutil::write_text(dir.path() / (tag + "r.jsonl"), "{\"id\":\"" + id + "\",\"reference\":\"x\"}\n");
  };
  write_pair("a", "one");
  write_pair("b", "two");
  captem_report *a = nullptr, *b = nullptr;
  ASSERT_EQ(captem_eval_run((dir.path() / "ap.jsonl").c_str(), (dir.path() / "ar.jsonl").c_str(),
                            "rougel", s.backend, s.cfg, 0, nullptr, &a),
            CAPTEM_OK);
  ASSERT_EQ(captem_eval_run((dir.path() / "bp.jsonl").c_str(), (dir.path() / "br.jsonl").c_str(),
                            "rougel", s.backend, s.cfg, 0, nullptr, &b),
            CAPTEM_OK);
  char* out = nullptr;
  EXPECT_EQ(captem_compare_reports(a, b, 0, &out), CAPTEM_NO_OVERLAP);
  EXPECT_EQ(out, nullptr);
  captem_report_free(a);
  captem_report_free(b);
}

TEST(CApi, Trajectory) {
  const auto path = (kRoot / "data" / "two_faces.jsonl").string();
  char* json = nullptr;
  char* warnings = nullptr;
  ASSERT_EQ(captem_trajectory_run(path.c_str(), 32.0, 16, 0, nullptr, &json, &warnings), CAPTEM_OK)
      << captem_last_error_message();
  const std::string j = take(json);
  EXPECT_NE(j.find("\"selected_frames\""), std::string::npos);
  EXPECT_NE(take(warnings).find("ignored"), std::string::npos);
  EXPECT_EQ(captem_trajectory_run("/nonexistent.jsonl", 16.0, 16, 0, nullptr, &json, nullptr),
            CAPTEM_IO);
  EXPECT_EQ(captem_trajectory_run(path.c_str(), 0.0, 16, 0, nullptr, &json, nullptr),
            CAPTEM_INVALID_ARGUMENT);
}

TEST(CApi, PurgeCache) {
  testutil::TempDir dir;
  size_t removed = 99;
  ASSERT_EQ(captem_cache_purge(dir.path().c_str(), 60.0, &removed), CAPTEM_OK);
  EXPECT_EQ(removed, 0u);
  EXPECT_EQ(captem_cache_purge((dir.path() / "missing").c_str(), 60.0, &removed), CAPTEM_IO);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(captem_config_load(nullptr, nullptr), CAPTEM_INVALID_ARGUMENT);
  EXPECT_EQ(captem_report_json(nullptr, nullptr), CAPTEM_INVALID_ARGUMENT);
  EXPECT_EQ(captem_report_error_count(nullptr), 0u);
  captem_report_free(nullptr);
  captem_string_free(nullptr);
}

}  // namespace
