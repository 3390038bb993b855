#ifndef MAXCURVE_H
#define MAXCURVE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McCurve {
  // `X^{q+1} + Y^{q+1} + T^{q+1} = 0`, parameter `a = q`.
  MC_CURVE_FERMAT = 0,
  // `Y^{q+1} = X^q T + X T^q`, parameter `a = q`.
  MC_CURVE_NORM_TRACE = 1,
  // `C_{l^n}`, parameters `a = l`, `b = n`.
  MC_CURVE_GK = 2,
  // `Y^{l^2-l+1} = X^{l^2} - X`, parameter `a = l`.
  MC_CURVE_GS = 3,
} McCurve;

typedef enum McOp {
  MC_OP_ADD = 0,
  MC_OP_SUB = 1,
  MC_OP_MUL = 2,
  MC_OP_DIV = 3,
} McOp;

typedef enum McStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_ARGUMENT = 2,
  MC_STATUS_UNKNOWN_CHECK = 3,
  MC_STATUS_UNSUPPORTED = 4,
  MC_STATUS_CHECK_FAILED = 5,
  MC_STATUS_FIELD_ERROR = 6,
  MC_STATUS_PANIC = 7,
} McStatus;

// Opaque finite field handle.
typedef struct McField McField;

// Opaque parameter map for checks.
typedef struct McParams McParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Owned by the library;
// valid until the next failing call on the same thread.
const char *mc_last_error(void);

// Library version as a static NUL-terminated string.
const char *mc_version(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void mc_string_free(char *s);

// Creates `F_{p^k}`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum McStatus mc_field_new(uint64_t p, uint32_t k, struct McField **out);

// # Safety
// `field` must be NULL or a handle from [`mc_field_new`] not yet freed.
void mc_field_free(struct McField *field);

// Number of elements, or 0 for a NULL handle.
//
// # Safety
// `field` must be NULL or a live handle.
uint64_t mc_field_size(const struct McField *field);

// Binary operation on element encodings (base-p numerals of the coefficient vectors).
//
// # Safety
// `field` must be a live handle and `out` a valid pointer.
enum McStatus mc_field_op(const struct McField *field,
                          enum McOp op,
                          uint64_t a,
                          uint64_t b,
                          uint64_t *out);

// `a^e`.
//
// # Safety
// `field` must be a live handle and `out` a valid pointer.
enum McStatus mc_field_pow(const struct McField *field, uint64_t a, uint64_t e, uint64_t *out);

// Multiplicative order of a nonzero element.
//
// # Safety
// `field` must be a live handle and `out` a valid pointer.
enum McStatus mc_field_order(const struct McField *field, uint64_t a, uint64_t *out);

// Number of points of a curve over its maximality field.
//
// # Safety
// `out` must be a valid pointer.
enum McStatus mc_curve_count(enum McCurve curve, uint64_t a, uint32_t b, uint64_t *out);

struct McParams *mc_params_new(void);

// # Safety
// `params` must be a live handle and `key` a NUL-terminated string.
enum McStatus mc_params_set(struct McParams *params, const char *key, uint64_t value);

// # Safety
// `params` must be NULL or a handle from [`mc_params_new`] not yet freed.
void mc_params_free(struct McParams *params);

// Runs one check and writes its JSON report to `out_json`.
//
// Returns `Ok` on pass, `CheckFailed` on fail and `Unsupported` when the
// parameters are outside the supported range; the report is written in all
// three cases.
//
// # Safety
// `name` must be a NUL-terminated string, `params` NULL or a live handle, and
// `out_json` a valid pointer.
enum McStatus mc_run_check(const char *name, const struct McParams *params, char **out_json);

// Runs every registered parameter set whose name starts with `filter` (NULL for
// all) and writes one JSON report per line to `out_json`.
//
// # Safety
// `filter` must be NULL or a NUL-terminated string; `out_json` a valid pointer.
enum McStatus mc_run_all(const char *filter, char **out_json);

// Newline-separated names of the registered checks.
char *mc_check_names(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXCURVE_H */
