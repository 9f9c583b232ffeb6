#ifndef SSCX_H
#define SSCX_H

/* Generated with cbindgen:0.26.0 */

/* Generated by cbindgen from sscx-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code returned by every fallible entry point.
//
// Passing a value outside this enumeration back into the library is
// undefined behavior.
typedef enum SscxStatus {
  // The call succeeded and every out parameter was written.
  SSCX_STATUS_OK = 0,
  // A pointer was null or a scalar argument was out of range.
  SSCX_STATUS_INVALID_ARGUMENT = 1,
  // The request exceeds a library cap; nothing was computed.
  SSCX_STATUS_SIZE_LIMIT = 2,
  // The input is structurally outside the domain of the operation.
  SSCX_STATUS_UNSUPPORTED = 3,
  // A documented precondition of the operation does not hold.
  SSCX_STATUS_CONTRACT = 4,
  // Malformed textual input.
  SSCX_STATUS_PARSE = 5,
  // A panic was caught at the boundary.
  SSCX_STATUS_PANIC = 6,
} SscxStatus;

// Opaque handle to the aperiodic Brandt semigroup B(n).
typedef struct SscxBrandt SscxBrandt;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the library version as a static string; never free it.
const char *sscx_version(void);

// Returns a static name for a status code; never free it.
const char *sscx_status_name(enum SscxStatus status);

// Returns the message recorded by the most recent failing call on this
// thread, or an empty string. The pointer stays valid until the next
// failing call on the same thread; never free it.
const char *sscx_last_error_message(void);

// Creates B(n) and writes an owned handle to `out`.
//
// Element ids follow the library convention: 0 is the zero and the pair
// (i,j) with 1 <= i,j <= n has id (i-1)*n + j.
//
// # Safety
// `out` must be a valid pointer. On `SSCX_STATUS_OK` the caller owns the
// handle and must release it with `sscx_brandt_free`.
enum SscxStatus sscx_brandt_new(size_t degree, struct SscxBrandt **out);

// Releases a handle created by `sscx_brandt_new`; null is a no-op.
//
// # Safety
// `handle` must be null or a handle that has not already been freed.
void sscx_brandt_free(struct SscxBrandt *handle);

// Returns n for a B(n) handle, or 0 if `handle` is null.
//
// # Safety
// `handle` must be null or a live handle from `sscx_brandt_new`.
size_t sscx_brandt_degree(const struct SscxBrandt *handle);

// Returns the element count n*n + 1, or 0 if `handle` is null.
//
// # Safety
// `handle` must be null or a live handle from `sscx_brandt_new`.
size_t sscx_brandt_order(const struct SscxBrandt *handle);

// Writes the display name of an element id (`"0"` or `"(i,j)"`).
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer. Release the
// string with `sscx_string_free`.
enum SscxStatus sscx_element_name(const struct SscxBrandt *handle, size_t id, char **out);

// Writes the product of two element ids to `out`.
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum SscxStatus sscx_product(const struct SscxBrandt *handle, size_t a, size_t b, size_t *out);

// Tests whether the listed element ids form a face of H(B(n)).
//
// Uses the separating-edge peeling fast path; duplicates in `ids` are
// allowed and the empty set is a face.
//
// # Safety
// `handle` must be a live handle, `ids` must point to `len` readable
// elements (or be null when `len` is 0), and `out` must be valid.
enum SscxStatus sscx_is_face(const struct SscxBrandt *handle,
                             const size_t *ids,
                             size_t len,
                             bool *out);

// Tests membership in the inverse subsemigroup complex IH0(B(n)).
//
// # Safety
// Same contract as `sscx_is_face`.
enum SscxStatus sscx_is_inverse_face(const struct SscxBrandt *handle,
                                     const size_t *ids,
                                     size_t len,
                                     bool *out);

// Runs the peeling witness on the listed element ids and writes a JSON
// document: `{"face":true,"enumeration":[...],"schema":1}` on success,
// `{"face":false,"schema":1,"stuck":[...]}` otherwise, where `enumeration`
// is an admissible order and `stuck` is the chord-only residual arc set,
// both as element ids.
//
// # Safety
// `handle` must be a live handle, `ids` must point to `len` readable
// elements (or be null when `len` is 0), and `out` must be valid. Release
// the string with `sscx_string_free`.
enum SscxStatus sscx_peel_json(const struct SscxBrandt *handle,
                               const size_t *ids,
                               size_t len,
                               char **out);

// Writes the number of facets of H(B(n)) to `out`.
//
// Facet enumeration is capped; beyond the cap the call returns
// `SSCX_STATUS_SIZE_LIMIT` and leaves `out` untouched.
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer.
enum SscxStatus sscx_facet_count(const struct SscxBrandt *handle, uint64_t *out);

// Writes every facet of H(B(n)) as a JSON document
// `{"count":...,"degree":n,"facets":[[ids...],...],"schema":1}`.
//
// The facet order and the bytes are stable across calls. The same cap as
// `sscx_facet_count` applies.
//
// # Safety
// `handle` must be a live handle and `out` a valid pointer. Release the
// string with `sscx_string_free`.
enum SscxStatus sscx_facets_json(const struct SscxBrandt *handle, char **out);

// Writes T(n), the number of transitive binary relations on an n-element
// set, as a decimal string.
//
// # Safety
// `out` must be a valid pointer. Release the string with
// `sscx_string_free`.
enum SscxStatus sscx_transitive_count(size_t degree, char **out);

// Writes the number of subsemigroups of B(n), T(n) + n + 1, as a decimal
// string.
//
// # Safety
// `out` must be a valid pointer. Release the string with
// `sscx_string_free`.
enum SscxStatus sscx_subsemigroup_count(size_t degree, char **out);

// Returns the number of verification criteria; their ids are 1-based.
size_t sscx_criterion_count(void);

// Writes the name of verification criterion `id` (ids run from 1 to
// `sscx_criterion_count`).
//
// # Safety
// `out` must be a valid pointer. Release the string with
// `sscx_string_free`.
enum SscxStatus sscx_criterion_name(size_t id, char **out);

// Runs verification criterion `id`, writing the verdict to `out_passed`
// and a newline-separated detail report to `out_report`.
//
// Some criteria take seconds; the verdict is deterministic.
//
// # Safety
// `out_passed` and `out_report` must be valid pointers. Release the report
// with `sscx_string_free`.
enum SscxStatus sscx_run_criterion(size_t id, bool *out_passed, char **out_report);

// Releases a string returned by this library; null is a no-op.
//
// # Safety
// `s` must be null or a string pointer obtained from this library that has
// not already been freed.
void sscx_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SSCX_H */
