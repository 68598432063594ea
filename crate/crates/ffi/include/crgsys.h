#ifndef CRGSYS_H
#define CRGSYS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible function.
typedef enum CrgStatus {
  CRG_OK = 0,
  // A required pointer argument was NULL.
  CRG_ERR_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  CRG_ERR_INVALID_UTF8 = 2,
  // Bad input: unknown group, parse error, malformed JSON, dependent invariants, ...
  CRG_ERR_INPUT = 3,
  // A verification check failed.
  CRG_ERR_VERIFICATION = 4,
  // Unexpected internal failure (a caught panic).
  CRG_ERR_INTERNAL = 5,
} CrgStatus;

// Opaque handle to a computed or loaded connection system.
typedef struct CrgSystem CrgSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Computes and verifies the connection system of a catalog group.
// `invariant_source` is "catalog", "reynolds" or NULL (catalog).
// On success `*out` receives a handle to release with `crg_system_free`.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum CrgStatus crg_compute(const char *group, const char *invariant_source, struct CrgSystem **out);

// Like `crg_compute`, for a group given as a JSON group specification.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum CrgStatus crg_compute_from_spec(const char *spec_json,
                                     const char *invariant_source,
                                     struct CrgSystem **out);

// Loads a system from its JSON serialization.
//
// # Safety
// `json` must be NUL-terminated; `out` must be writable.
enum CrgStatus crg_system_from_json(const char *json, struct CrgSystem **out);

// Serializes the system as JSON.
//
// # Safety
// `sys` must be a live handle; `out` must be writable.
enum CrgStatus crg_system_to_json(const struct CrgSystem *sys, char **out);

// Renders the system as "text", "latex" or "json".
//
// # Safety
// `sys` must be a live handle; `format` NUL-terminated; `out` writable.
enum CrgStatus crg_system_render(const struct CrgSystem *sys, const char *format, char **out);

// Number of variables (and of connection matrices).
//
// # Safety
// `sys` must be a live handle or NULL.
size_t crg_system_rank(const struct CrgSystem *sys);

// Returns CRG_OK when every check passes, CRG_ERR_VERIFICATION otherwise.
// Checks integrability; for computed systems the full verification report
// from the computation must pass as well.
//
// # Safety
// `sys` must be a live handle.
enum CrgStatus crg_system_verify(const struct CrgSystem *sys);

// Verification summary of a computed system (empty for loaded systems).
//
// # Safety
// `sys` must be a live handle; `out` writable.
enum CrgStatus crg_system_report(const struct CrgSystem *sys, char **out);

// Rewrites an invariant polynomial in x1..xn as a polynomial in z1..zn using
// the catalog invariants of `group`.
//
// # Safety
// String arguments must be NUL-terminated; `out` writable.
enum CrgStatus crg_rewrite(const char *group, const char *expr, char **out);

// Newline-separated catalog group names.
//
// # Safety
// `out` must be writable.
enum CrgStatus crg_catalog_names(char **out);

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the same thread.
const char *crg_last_error_message(void);

// Releases a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void crg_string_free(char *s);

// Releases a system handle. NULL is ignored.
//
// # Safety
// `sys` must come from this library and not have been freed.
void crg_system_free(struct CrgSystem *sys);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRGSYS_H */
