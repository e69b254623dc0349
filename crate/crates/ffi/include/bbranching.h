#ifndef BBRANCHING_H
#define BBRANCHING_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BbStatus {
  BB_STATUS_OK = 0,
  /**
   * Malformed input or any failure inside the library.
   */
  BB_STATUS_ERROR = 1,
  /**
   * The instance is infeasible or the certificate was rejected; an
   * output with the witness is still produced.
   */
  BB_STATUS_INFEASIBLE = 2,
  BB_STATUS_NULL_POINTER = 3,
  BB_STATUS_INVALID_UTF8 = 4,
  BB_STATUS_UNKNOWN_OPERATION = 5,
  BB_STATUS_PANIC = 6,
} BbStatus;

/**
 * A parsed instance document.
 */
typedef struct BbInstance BbInstance;

/**
 * JSON result of [`bb_run`].
 */
typedef struct BbOutput BbOutput;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance document. On success `*out` receives a handle to
 * be released with [`bb_instance_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum BbStatus bb_instance_parse(const char *json, struct BbInstance **out);

/**
 * # Safety
 * `inst` must be NULL or a handle from [`bb_instance_parse`] not yet freed.
 */
void bb_instance_free(struct BbInstance *inst);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle.
 */
size_t bb_instance_vertex_count(const struct BbInstance *inst);

/**
 * Number of arcs, or 0 for NULL.
 *
 * # Safety
 * `inst` must be NULL or a live handle.
 */
size_t bb_instance_arc_count(const struct BbInstance *inst);

/**
 * Runs `operation` (a subcommand name such as `"max-weight"`) on `inst`.
 * `certificate` is the certificate document for `"verify"` and ignored
 * otherwise; it may then be NULL. With `oracle` set the result is
 * cross-checked by exhaustive search.
 *
 * On [`BbStatus::Ok`] and [`BbStatus::Infeasible`], `*out` receives an
 * output handle to be released with [`bb_output_free`].
 *
 * # Safety
 * `inst` must be a live handle, `operation` and `certificate` NULL or
 * NUL-terminated strings, and `out` a valid pointer.
 */
enum BbStatus bb_run(const struct BbInstance *inst,
                     const char *operation,
                     const char *certificate,
                     bool oracle,
                     struct BbOutput **out);

/**
 * The JSON text of `output`, or NULL for NULL.
 *
 * # Safety
 * `output` must be NULL or a live handle.
 */
const char *bb_output_json(const struct BbOutput *output);

/**
 * # Safety
 * `output` must be NULL or a handle from [`bb_run`] not yet freed.
 */
void bb_output_free(struct BbOutput *output);

/**
 * Message of the last failed call on this thread, or NULL.
 */
const char *bb_last_error(void);

/**
 * Library version, a static string.
 */
const char *bb_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BBRANCHING_H */
