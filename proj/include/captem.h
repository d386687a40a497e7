/* captem C API: caption metrics, LLM-backed event matching and face-aware
 * frame selection behind opaque handles.
 *
 * Every function returns a captem_status. On failure a human-readable message
 * for the calling thread is available from captem_last_error_message(). Strings
 * returned through `char**` out-parameters are owned by the caller and must be
 * released with captem_string_free().
 */
#ifndef CAPTEM_H
#define CAPTEM_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(CAPTEM_BUILDING_DLL)
#define CAPTEM_API __declspec(dllexport)
#else
#define CAPTEM_API __declspec(dllimport)
#endif
#else
#define CAPTEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum captem_status {
  CAPTEM_OK = 0,
  CAPTEM_INVALID_ARGUMENT = 1,
  CAPTEM_INPUT_PARSE = 2,
  CAPTEM_MISSING_REFERENCE = 3,
  CAPTEM_EMPTY_CORPUS = 4,
  CAPTEM_BACKEND_UNAVAILABLE = 5,
  CAPTEM_MALFORMED_BACKEND_REPLY = 6,
  CAPTEM_OUT_OF_RANGE_SCORE = 7,
  CAPTEM_AUTH = 8,
  CAPTEM_RATE_LIMITED = 9,
  CAPTEM_SERVER = 10,
  CAPTEM_TIMEOUT = 11,
  CAPTEM_CLIENT_REQUEST = 12,
  CAPTEM_MALFORMED_REPLY = 13,
  CAPTEM_IO = 14,
  CAPTEM_DIMENSION_MISMATCH = 15,
  CAPTEM_EMPTY_TRACK = 16,
  CAPTEM_NO_OVERLAP = 17,
  CAPTEM_CONFIG = 18,
  CAPTEM_INTERNAL = 19
} captem_status;

/* Relation labels for captem_tem_score. */
enum {
  CAPTEM_RELATION_NONE = 0,
  CAPTEM_RELATION_SAME = 1,
  CAPTEM_RELATION_OPPOSITE = 2
};

typedef struct captem_config captem_config;
typedef struct captem_backend captem_backend;
typedef struct captem_report captem_report;

typedef struct captem_tem_result {
  size_t lcs_length;
  double lcs_score;
  double precision;
  double recall;
  double f_measure;
  double combined;
} captem_tem_result;

CAPTEM_API const char* captem_version(void);
CAPTEM_API const char* captem_status_name(captem_status status);
/* Message of the last failing call on this thread; "" if none. */
CAPTEM_API const char* captem_last_error_message(void);
CAPTEM_API void captem_string_free(char* s);

/* Configuration. `path` may be NULL for defaults. */
CAPTEM_API captem_status captem_config_load(const char* path, captem_config** out);
CAPTEM_API captem_status captem_config_set(captem_config* cfg, const char* key, const char* value);
CAPTEM_API void captem_config_free(captem_config* cfg);

/* kind: "mock" or "gateway". */
CAPTEM_API captem_status captem_backend_create(const char* kind, const captem_config* cfg,
                                               captem_backend** out);
CAPTEM_API void captem_backend_free(captem_backend* backend);

/* metrics: comma-separated subset of tem,autodq,cider,rougel,judge (NULL:
 * tem,autodq,cider,rougel). timestamp may be NULL. Per-pair failures do not
 * fail the call; see captem_report_error_count. */
CAPTEM_API captem_status captem_eval_run(const char* predictions_path, const char* references_path,
                                         const char* metrics, const captem_backend* backend,
                                         const captem_config* cfg, int align,
                                         const char* timestamp, captem_report** out);
CAPTEM_API captem_status captem_report_load(const char* path, captem_report** out);
CAPTEM_API captem_status captem_report_json(const captem_report* report, char** out);
CAPTEM_API captem_status captem_report_table(const captem_report* report, char** out);
/* Writes report.json and report.txt into dir. */
CAPTEM_API captem_status captem_report_write(const captem_report* report, const char* dir);
CAPTEM_API size_t captem_report_error_count(const captem_report* report);
CAPTEM_API void captem_report_free(captem_report* report);

/* Delta table of b - a. as_json selects JSON instead of text. */
CAPTEM_API captem_status captem_compare_reports(const captem_report* a, const captem_report* b,
                                                int as_json, char** out);

/* frame_count 0: derive from the detections. cfg may be NULL. warnings may be
 * NULL; otherwise it receives newline-separated warnings (possibly ""). */
CAPTEM_API captem_status captem_trajectory_run(const char* detections_path, double src_fps,
                                               size_t frames, size_t frame_count,
                                               const captem_config* cfg, char** out_json,
                                               char** warnings);

/* Returns the number of removed records in *removed. */
CAPTEM_API captem_status captem_cache_purge(const char* cache_dir, double older_than_seconds,
                                            size_t* removed);

/* labels: row-major rows x cols CAPTEM_RELATION_* values. */
CAPTEM_API captem_status captem_tem_score(const int* labels, size_t rows, size_t cols,
                                          captem_tem_result* out);
CAPTEM_API captem_status captem_rouge_l(const char* prediction, const char* reference, double beta,
                                        double* out);

#ifdef __cplusplus
}
#endif

#endif /* CAPTEM_H */
