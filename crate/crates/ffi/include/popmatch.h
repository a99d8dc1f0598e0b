#ifndef POPMATCH_H
#define POPMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by all calls.
 */
typedef enum PmStatus {
  PM_STATUS_OK = 0,
  /**
   * The instance has no popular matching.
   */
  PM_STATUS_NOT_FOUND = 1,
  PM_STATUS_NULL_ARGUMENT = 2,
  PM_STATUS_INVALID_UTF8 = 3,
  /**
   * Malformed or inconsistent instance or matching text.
   */
  PM_STATUS_PARSE = 4,
  /**
   * The solver was given a post with a strict preference list.
   */
  PM_STATUS_MODEL_VIOLATION = 5,
  /**
   * The matching does not belong to the instance.
   */
  PM_STATUS_INVALID_MATCHING = 6,
  PM_STATUS_INTERNAL = 7,
} PmStatus;

typedef struct PmInstance PmInstance;

typedef struct PmMatching PmMatching;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *pm_last_error(void);

/**
 * Parses an instance in the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PmStatus pm_instance_parse(const char *text, struct PmInstance **out);

/**
 * # Safety
 * `inst` must come from [`pm_instance_parse`] and not be freed twice.
 */
void pm_instance_free(struct PmInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle or NULL (which yields 0).
 */
size_t pm_instance_num_applicants(const struct PmInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle or NULL (which yields 0).
 */
size_t pm_instance_num_posts(const struct PmInstance *inst);

/**
 * Solves a single-tie instance. Returns `Ok` and a matching, or `NotFound`
 * with `*out` set to NULL.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum PmStatus pm_solve(const struct PmInstance *inst, struct PmMatching **out);

/**
 * Parses a matching file against `inst`.
 *
 * # Safety
 * `inst` must be a live handle, `text` NUL-terminated and `out` valid.
 */
enum PmStatus pm_matching_parse(const struct PmInstance *inst,
                                const char *text,
                                struct PmMatching **out);

/**
 * # Safety
 * `m` must come from this library and not be freed twice.
 */
void pm_matching_free(struct PmMatching *m);

/**
 * Number of matched pairs; 0 for NULL.
 *
 * # Safety
 * `m` must be a live handle or NULL.
 */
size_t pm_matching_len(const struct PmMatching *m);

/**
 * Post matched to `applicant`, or -1 if it is unmatched or out of range.
 *
 * # Safety
 * `m` must be a live handle or NULL.
 */
int64_t pm_matching_post_of(const struct PmMatching *m, size_t applicant);

/**
 * The matching in the text format. Release with [`pm_string_free`].
 *
 * # Safety
 * `m` must be a live handle or NULL (which yields NULL).
 */
char *pm_matching_to_string(const struct PmMatching *m);

/**
 * # Safety
 * `s` must come from [`pm_matching_to_string`] or be NULL.
 */
void pm_string_free(char *s);

/**
 * Unpopularity margin of `m`: 0 exactly when `m` is popular.
 *
 * # Safety
 * Both handles must be live and `out` valid.
 */
enum PmStatus pm_margin(const struct PmInstance *inst, const struct PmMatching *m, int64_t *out);

/**
 * # Safety
 * Both handles must be live and `out` valid.
 */
enum PmStatus pm_is_popular(const struct PmInstance *inst, const struct PmMatching *m, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POPMATCH_H */
