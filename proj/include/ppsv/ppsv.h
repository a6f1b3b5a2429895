/*
 * libppsv: Monte Carlo verification of aggregated power demand against
 * substation states and power slots.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns a ppsv_status; on
 * failure a thread-local message is available from ppsv_last_error().
 * Strings returned through char** out-parameters are heap copies released
 * with ppsv_string_free().
 */
#ifndef PPSV_PPSV_H
#define PPSV_PPSV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PPSV_BUILDING_LIBRARY)
#    define PPSV_API __declspec(dllexport)
#  else
#    define PPSV_API __declspec(dllimport)
#  endif
#else
#  define PPSV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppsv_status {
  PPSV_OK = 0,
  PPSV_ERR_IO = 1,                  /* file could not be read or written */
  PPSV_ERR_INVALID = 2,             /* malformed document or scenario violations */
  PPSV_ERR_ORACLE_INAPPLICABLE = 3, /* exact oracle needs discrete models */
  PPSV_ERR_PARAMETER = 4,           /* out-of-range numeric argument */
  PPSV_ERR_RESOURCE = 5,            /* oracle support guard exceeded */
  PPSV_ERR_RUN = 6,                 /* worker failure */
  PPSV_ERR_INTERNAL = 7
} ppsv_status;

typedef struct ppsv_scenario ppsv_scenario;
typedef struct ppsv_report ppsv_report;

typedef enum ppsv_verdict {
  PPSV_VERDICT_ESTIMATE = 0,
  PPSV_VERDICT_BOT = 1,
  PPSV_VERDICT_EXACT = 2
} ppsv_verdict;

typedef struct ppsv_entry {
  const char* state; /* valid while the report lives */
  size_t slot;
  double slot_lo_kw;
  double slot_hi_kw;
  ppsv_verdict verdict;
  double mean;       /* 0 for PPSV_VERDICT_BOT */
  uint64_t samples;  /* 0 for PPSV_VERDICT_EXACT */
} ppsv_entry;

typedef struct ppsv_verify_options {
  double epsilon;
  double delta;
  uint64_t seed;
  size_t workers;
  size_t batch_size;
  size_t lookahead; /* 0: 2 x workers */
  int family_wise;  /* nonzero: delta split over the whole table */
} ppsv_verify_options;

typedef struct ppsv_gen_options {
  uint64_t seed;
  size_t users;
  size_t time_slots;
  size_t states;
  size_t power_slots;
  const char* family; /* "discrete" | "uniform" | "truncated_gaussian" */
  double magnitude;
  size_t support_points;
  double epp_min_kw;
  double epp_max_kw;
  double override_fraction;
} ppsv_gen_options;

typedef struct ppsv_ed_constants {
  double upsilon;
  double upsilon1;
  uint64_t cutoff;
} ppsv_ed_constants;

PPSV_API const char* ppsv_version(void);
PPSV_API const char* ppsv_last_error(void);
PPSV_API void ppsv_string_free(char* s);

/* Scenarios */
PPSV_API ppsv_status ppsv_scenario_load_file(const char* path, ppsv_scenario** out);
PPSV_API ppsv_status ppsv_scenario_parse(const char* json, size_t len, ppsv_scenario** out);
PPSV_API ppsv_status ppsv_scenario_generate(const ppsv_gen_options* opts, ppsv_scenario** out);
PPSV_API void ppsv_scenario_free(ppsv_scenario* s);
PPSV_API ppsv_status ppsv_scenario_to_json(const ppsv_scenario* s, char** out);
/* Number of invariant violations; 0 means valid. */
PPSV_API size_t ppsv_scenario_violation_count(const ppsv_scenario* s);
/* Violation text, valid while the scenario lives; NULL if out of range. */
PPSV_API const char* ppsv_scenario_violation(const ppsv_scenario* s, size_t index);

/* Stopping-rule constants */
PPSV_API ppsv_status ppsv_ed_constants_compute(double epsilon, double delta, ppsv_ed_constants* out);

/* Reports */
PPSV_API void ppsv_verify_options_init(ppsv_verify_options* opts);
PPSV_API void ppsv_gen_options_init(ppsv_gen_options* opts);
PPSV_API ppsv_status ppsv_verify(const ppsv_scenario* s, const ppsv_verify_options* opts, ppsv_report** out);
PPSV_API ppsv_status ppsv_oracle(const ppsv_scenario* s, ppsv_report** out);
PPSV_API void ppsv_report_free(ppsv_report* r);
PPSV_API size_t ppsv_report_entry_count(const ppsv_report* r);
PPSV_API ppsv_status ppsv_report_entry(const ppsv_report* r, size_t index, ppsv_entry* out);
PPSV_API ppsv_status ppsv_report_to_json(const ppsv_report* r, char** out);
PPSV_API ppsv_status ppsv_report_to_csv(const ppsv_report* r, char** out);
/* Only the deterministic "result" block of the JSON report. */
PPSV_API ppsv_status ppsv_report_result_json(const ppsv_report* r, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PPSV_PPSV_H */
