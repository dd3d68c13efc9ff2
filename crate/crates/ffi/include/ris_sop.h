#ifndef RIS_SOP_H
#define RIS_SOP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Scheduling scheme for Monte Carlo estimates.
typedef enum RisSopScheme {
  RIS_SOP_SCHEME_OUS = 0,
  RIS_SOP_SCHEME_NOMA_BEST_USER = 1,
  RIS_SOP_SCHEME_NOMA_WORST_USER = 2,
} RisSopScheme;

// Result code of every fallible call.
typedef enum RisSopStatus {
  RIS_SOP_STATUS_OK = 0,
  RIS_SOP_STATUS_NULL_POINTER = 1,
  RIS_SOP_STATUS_INVALID_UTF8 = 2,
  RIS_SOP_STATUS_PARSE = 3,
  RIS_SOP_STATUS_SCHEMA = 4,
  RIS_SOP_STATUS_VALIDATION = 5,
  RIS_SOP_STATUS_DOMAIN = 6,
  RIS_SOP_STATUS_CAPACITY = 7,
  RIS_SOP_STATUS_CONTRACT = 8,
  RIS_SOP_STATUS_EVALUATION = 9,
  RIS_SOP_STATUS_ACCURACY = 10,
  RIS_SOP_STATUS_IO = 11,
  RIS_SOP_STATUS_PANIC = 12,
} RisSopStatus;

// Opaque system configuration.
typedef struct RisSopConfig RisSopConfig;

// Monte Carlo result.
typedef struct RisSopMcEstimate {
  uint64_t trials;
  uint64_t outages;
  double sop;
  double ci_low;
  double ci_high;
} RisSopMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a configuration with the default operating point.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum RisSopStatus ris_sop_config_new_default(struct RisSopConfig **out);

// Creates a configuration from a JSON object. Absent fields take their
// defaults; unknown fields are rejected.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum RisSopStatus ris_sop_config_from_json(const char *json, struct RisSopConfig **out);

// Releases a configuration. Null is ignored.
//
// # Safety
// `cfg` must be null or a handle from this library not yet freed.
void ris_sop_config_free(struct RisSopConfig *cfg);

// Sets the transmit SNR in dB.
//
// # Safety
// `cfg` must be a live handle.
enum RisSopStatus ris_sop_config_set_gamma0_db(struct RisSopConfig *cfg, double gamma0_db);

// Sets the number of RIS elements and users.
//
// # Safety
// `cfg` must be a live handle.
enum RisSopStatus ris_sop_config_set_sizes(struct RisSopConfig *cfg,
                                           uint32_t n_elements,
                                           uint32_t n_users);

// Closed-form SOP of opportunistic scheduling.
//
// # Safety
// `cfg` must be a live handle and `out` writable.
enum RisSopStatus ris_sop_closed_form(const struct RisSopConfig *cfg, double *out);

// High-SNR SOP from the basic system parameters.
//
// # Safety
// `cfg` must be a live handle and `out` writable.
enum RisSopStatus ris_sop_asymptotic(const struct RisSopConfig *cfg, double *out);

// SOP by quadrature. `exact_q` selects the exact Q-function instead of the
// three-exponential approximation. `abs_error` may be null.
//
// # Safety
// `cfg` must be a live handle, `out` writable, `abs_error` null or writable.
enum RisSopStatus ris_sop_quadrature(const struct RisSopConfig *cfg,
                                     bool exact_q,
                                     double *out,
                                     double *abs_error);

// Monte Carlo SOP. `independent_eve` draws a separate S-R channel for the
// eavesdropper path; `workers` = 0 uses all cores. The result depends only
// on the configuration, scheme, trials, seed and mode.
//
// # Safety
// `cfg` must be a live handle and `out` writable.
enum RisSopStatus ris_sop_monte_carlo(const struct RisSopConfig *cfg,
                                      enum RisSopScheme scheme,
                                      uint64_t trials,
                                      uint64_t seed,
                                      bool independent_eve,
                                      uint32_t workers,
                                      struct RisSopMcEstimate *out);

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *ris_sop_last_error_message(void);

// Library version as a NUL-terminated string with static lifetime.
const char *ris_sop_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIS_SOP_H */
