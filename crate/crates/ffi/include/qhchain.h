#ifndef QHCHAIN_H
#define QHCHAIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum qh_status {
  QH_STATUS_OK = 0,
  // Input outside the domain of the computation.
  QH_STATUS_DOMAIN = 1,
  // Malformed model descriptor.
  QH_STATUS_PARSE = 2,
  // Bad argument, such as a missing parameter value.
  QH_STATUS_USAGE = 3,
  QH_STATUS_COMPUTE = 4,
  QH_STATUS_NON_CONVERGENCE = 5,
  QH_STATUS_NULL_POINTER = 6,
  // Output buffer too small; the required length is still written.
  QH_STATUS_BUFFER_TOO_SMALL = 7,
  QH_STATUS_PANIC = 8,
} qh_status;

typedef enum qh_verdict {
  QH_VERDICT_HERMITIAN = 0,
  QH_VERDICT_QUASI_HERMITIAN = 1,
  QH_VERDICT_NOT_QUASI_HERMITIAN = 2,
} qh_verdict;

// Opaque model handle.
typedef struct qh_model qh_model;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qh_version(void);

// Message for the last failed call on this thread, or NULL. Valid until
// the next call into the library from the same thread.
const char *qh_last_error_message(void);

// Parse a JSON model descriptor. On success `*out` owns a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum qh_status qh_model_from_json(const char *json, struct qh_model **out);

// Release a handle. NULL is ignored.
//
// # Safety
// `model` must come from `qh_model_from_json` and not be used afterwards.
void qh_model_free(struct qh_model *model);

// Number of sites.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum qh_status qh_model_size(const struct qh_model *model, size_t *out);

// 1 if the model has a free parameter, 0 if not, -1 for a NULL handle.
//
// # Safety
// `model` must be a live handle or NULL.
int32_t qh_model_is_symbolic(const struct qh_model *model);

// All eigenvalues with repetition, sorted by real then imaginary part.
// `re` and `im` must hold `capacity` doubles; `*len` receives the count
// (also when the buffers are too small).
//
// # Safety
// Pointers must be valid for the stated sizes; `param` may be NULL.
enum qh_status qh_spectrum(const struct qh_model *model,
                           const char *param,
                           double *re,
                           double *im,
                           size_t capacity,
                           size_t *len);

// Whether a diagonal similarity makes the model Hermitian. `tol <= 0`
// selects the default tolerance.
//
// # Safety
// `model` must be a live handle, `out` writable; `param` may be NULL.
enum qh_status qh_gauge_verdict(const struct qh_model *model,
                                const char *param,
                                double tol,
                                enum qh_verdict *out);

// Discriminant of the characteristic polynomial in the model parameter,
// as a JSON array of exact coefficient strings, lowest degree first.
// Release `*out` with `qh_string_free`.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum qh_status qh_discriminant(const struct qh_model *model, char **out);

// Exceptional-point search as a JSON document, in the same shape as the
// `data` field of `qhchain ep`. Release `*out` with `qh_string_free`.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum qh_status qh_find_eps_json(const struct qh_model *model, char **out);

// Release a string returned by the library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void qh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QHCHAIN_H */
