#ifndef MULTBOUND_H
#define MULTBOUND_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  MB_COMMAND_CHARTAB = 0,
  MB_COMMAND_MULT = 1,
  MB_COMMAND_BOUND = 2,
  MB_COMMAND_PERIODICITY = 3,
  MB_COMMAND_REDUCE = 4,
  MB_COMMAND_VERIFY_ALL = 5,
} MbCommand;

/**
 * Result of every fallible call.
 */
typedef enum {
  MB_STATUS_OK = 0,
  MB_STATUS_NULL_POINTER = 1,
  MB_STATUS_INVALID_UTF8 = 2,
  MB_STATUS_INVALID_ARGUMENT = 3,
  /**
   * Malformed scenario or unknown preset.
   */
  MB_STATUS_SCENARIO = 4,
  MB_STATUS_CAP_EXCEEDED = 5,
  MB_STATUS_WITNESS = 6,
  /**
   * Any other engine error.
   */
  MB_STATUS_ENGINE = 7,
  MB_STATUS_PANIC = 8,
} MbStatus;

/**
 * A finished verification report.
 */
typedef struct MbReport MbReport;

/**
 * A parsed scenario.
 */
typedef struct MbScenario MbScenario;

/**
 * Overrides of scenario fields; a zero field keeps the scenario's value.
 */
typedef struct {
  uint64_t q;
  uint32_t max_ext;
  /**
   * 0 chooses ℓ automatically.
   */
  uint64_t ell;
  /**
   * Tolerance tol_num/tol_den; 0/0 keeps the default.
   */
  uint64_t tol_num;
  uint64_t tol_den;
  uint64_t seed;
  bool has_seed;
} MbOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; valid until the next failing call.
 */
const char *mb_last_error(void);

/**
 * Engine version as a static NUL-terminated string.
 */
const char *mb_version(void);

/**
 * Parses a scenario from JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
MbStatus mb_scenario_from_json(const char *json, MbScenario **out);

/**
 * Looks up a catalog preset by name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
MbStatus mb_scenario_preset(const char *name, MbScenario **out);

/**
 * # Safety
 * `s` must come from `mb_scenario_*` and not have been freed; null is ignored.
 */
void mb_scenario_free(MbScenario *s);

/**
 * Runs a subcommand; `options` may be null.
 *
 * # Safety
 * `s` must be a live scenario handle, `options` null or valid, `out` a valid pointer.
 */
MbStatus mb_run(const MbScenario *s, MbCommand command, const MbOptions *options, MbReport **out);

/**
 * Whether every verdict in the report holds.
 *
 * # Safety
 * `r` must be a live report handle and `out` a valid pointer.
 */
MbStatus mb_report_pass(const MbReport *r, bool *out);

/**
 * Largest multiplicity; fails if the report has no multiplicity block.
 *
 * # Safety
 * `r` must be a live report handle and `out` a valid pointer.
 */
MbStatus mb_report_mu_max(const MbReport *r, uint64_t *out);

/**
 * Estimated component count; fails if the report has no estimator block.
 *
 * # Safety
 * `r` must be a live report handle and `out` a valid pointer.
 */
MbStatus mb_report_c_hat(const MbReport *r, uint64_t *out);

/**
 * The report as JSON, owned by the handle.
 *
 * # Safety
 * `r` must be a live report handle; the string lives until `mb_report_free`.
 */
const char *mb_report_json(const MbReport *r);

/**
 * # Safety
 * `r` must come from `mb_run` and not have been freed; null is ignored.
 */
void mb_report_free(MbReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTBOUND_H */
