#ifndef NURSE_CP_H
#define NURSE_CP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum NcpStatus {
  NCP_STATUS_OK = 0,
  NCP_STATUS_NULL_POINTER = 1,
  NCP_STATUS_INVALID_UTF8 = 2,
  NCP_STATUS_PARSE_ERROR = 3,
  NCP_STATUS_INVALID_ARGUMENT = 4,
  /**
   * The instance has no roster satisfying the hard constraints.
   */
  NCP_STATUS_UNSATISFIABLE = 5,
  /**
   * A search limit fired before any roster was found.
   */
  NCP_STATUS_LIMIT_REACHED = 6,
  NCP_STATUS_PANIC = 7,
} NcpStatus;

/**
 * Opaque roster instance.
 */
typedef struct NcpInstance NcpInstance;

/**
 * Opaque roster: one shift code per (nurse, day), 0 meaning Off.
 */
typedef struct NcpSchedule NcpSchedule;

typedef struct NcpSolveOptions {
  /**
   * Branch-and-bound on fitness instead of stopping at the first roster.
   */
  bool optimize;
  /**
   * Branch on variables in index order instead of smallest domain first.
   */
  bool input_order;
  /**
   * Wall-clock limit in milliseconds; negative means none.
   */
  int64_t time_limit_ms;
  /**
   * Node limit; 0 means none.
   */
  uint64_t node_limit;
  /**
   * Break first-fail ties randomly with `seed`.
   */
  bool randomize_ties;
  uint64_t seed;
} NcpSolveOptions;

typedef struct NcpSolveStats {
  uint64_t nodes;
  uint64_t backtracks;
  double wall_ms;
  /**
   * Search finished: the roster is the first found or a proven optimum.
   */
  bool complete;
} NcpSolveStats;

typedef struct NcpFitness {
  double fairness_f;
  double preference_g;
  double combined;
  double alpha;
} NcpFitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread, or null.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *ncp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ncp_version(void);

/**
 * Parses an instance in the `.nsp` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum NcpStatus ncp_instance_parse(const char *text, struct NcpInstance **out);

/**
 * The four-nurse, three-shift, one-week instance. Never null.
 */
struct NcpInstance *ncp_instance_canonical(void);

/**
 * Seeded benchmark instance; needs `shifts >= 1`, `days >= 1` and
 * `nurses > shifts`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum NcpStatus ncp_instance_benchmark(size_t nurses,
                                      uint32_t shifts,
                                      size_t days,
                                      uint64_t seed,
                                      struct NcpInstance **out);

/**
 * Serializes an instance to the `.nsp` format; free with [`ncp_string_free`].
 * Returns null if `instance` is null.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
char *ncp_instance_to_string(const struct NcpInstance *instance);

/**
 * Number of nurses, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
size_t ncp_instance_nurses(const struct NcpInstance *instance);

/**
 * Number of days, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
size_t ncp_instance_days(const struct NcpInstance *instance);

/**
 * Number of working shifts, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
uint32_t ncp_instance_shifts(const struct NcpInstance *instance);

/**
 * # Safety
 * `instance` must be null or a handle not yet freed.
 */
void ncp_instance_free(struct NcpInstance *instance);

/**
 * First-fail, no limits, satisfaction only.
 */
struct NcpSolveOptions ncp_solve_options_default(void);

/**
 * Solves `instance`. On success `out` receives a new schedule; with a limit
 * set this may be the best roster found rather than a proven optimum, which
 * `stats->complete` tells apart. `options` and `stats` may be null.
 *
 * # Safety
 * `instance` must be a live handle, `out` a valid pointer, and `options` /
 * `stats` null or valid.
 */
enum NcpStatus ncp_solve(const struct NcpInstance *instance,
                         const struct NcpSolveOptions *options,
                         struct NcpSchedule **out,
                         struct NcpSolveStats *stats);

/**
 * Parses a roster grid for `instance`.
 *
 * # Safety
 * `instance` must be a live handle, `text` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum NcpStatus ncp_schedule_parse(const struct NcpInstance *instance,
                                  const char *text,
                                  struct NcpSchedule **out);

/**
 * Shift code of `nurse` on `day` (both 0-based).
 *
 * # Safety
 * `schedule` must be a live handle and `out` a valid pointer.
 */
enum NcpStatus ncp_schedule_get(const struct NcpSchedule *schedule,
                                size_t nurse,
                                size_t day,
                                uint32_t *out);

/**
 * # Safety
 * `schedule` must be null or a live handle.
 */
size_t ncp_schedule_nurses(const struct NcpSchedule *schedule);

/**
 * # Safety
 * `schedule` must be null or a live handle.
 */
size_t ncp_schedule_days(const struct NcpSchedule *schedule);

/**
 * # Safety
 * `schedule` must be null or a handle not yet freed.
 */
void ncp_schedule_free(struct NcpSchedule *schedule);

/**
 * Fairness, preference satisfaction and their weighted combination.
 *
 * # Safety
 * Both handles must be live and `out` a valid pointer.
 */
enum NcpStatus ncp_fitness(const struct NcpSchedule *schedule,
                           const struct NcpInstance *instance,
                           struct NcpFitness *out);

/**
 * Number of hard-constraint violations; 0 means the roster is valid.
 *
 * # Safety
 * Both handles must be live and `out_count` a valid pointer.
 */
enum NcpStatus ncp_check(const struct NcpSchedule *schedule,
                         const struct NcpInstance *instance,
                         size_t *out_count);

/**
 * Roster grid text; free with [`ncp_string_free`]. Null on error.
 *
 * # Safety
 * Both handles must be null or live.
 */
char *ncp_render_roster(const struct NcpSchedule *schedule, const struct NcpInstance *instance);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void ncp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NURSE_CP_H */
