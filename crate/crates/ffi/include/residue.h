#ifndef RESIDUE_H
#define RESIDUE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of the C ABI.
 */
typedef enum ResidueStatus {
  RESIDUE_STATUS_OK = 0,
  RESIDUE_STATUS_NULL_POINTER = 1,
  RESIDUE_STATUS_INVALID_UTF8 = 2,
  RESIDUE_STATUS_SYNTAX = 3,
  RESIDUE_STATUS_USAGE = 4,
  RESIDUE_STATUS_NOT_ZERO_DIMENSIONAL = 5,
  RESIDUE_STATUS_NOT_CERTIFIED_FREE = 6,
  RESIDUE_STATUS_COMPUTATION = 7,
  RESIDUE_STATUS_PANIC = 8,
} ResidueStatus;

/**
 * Opaque ring handle.
 */
typedef struct ResidueContext ResidueContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *residue_last_error(void);

/**
 * Releases a string returned through an `out` parameter. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void residue_string_free(char *s);

/**
 * Parses a ring such as `QQ[x,y]`, `Fp:7[x]` or `QQ[y][T]`.
 *
 * # Safety
 * `ring` must be a nul-terminated string and `out` a writable pointer.
 */
enum ResidueStatus residue_context_new(const char *ring, struct ResidueContext **out);

/**
 * # Safety
 * `ctx` must come from [`residue_context_new`] and not have been freed.
 */
void residue_context_free(struct ResidueContext *ctx);

/**
 * Canonical text of the ring.
 *
 * # Safety
 * Pointer arguments must be valid as documented on the module.
 */
enum ResidueStatus residue_context_describe(const struct ResidueContext *ctx, char **out);

/**
 * `Res[form; denoms]` over the whole ring; `denoms` is comma-separated.
 *
 * # Safety
 * Pointer arguments must be valid as documented on the module.
 */
enum ResidueStatus residue_symbol(const struct ResidueContext *ctx,
                                  const char *form,
                                  const char *denoms,
                                  char **out);

/**
 * Trace of `element` for the finite algebra cut out by `relations`
 * (comma-separated) over the base block.
 *
 * # Safety
 * Pointer arguments must be valid as documented on the module.
 */
enum ResidueStatus residue_trace(const struct ResidueContext *ctx,
                                 const char *relations,
                                 const char *element,
                                 char **out);

/**
 * Runs one query given as a JSON object (same schema as a job query) and
 * returns its value as JSON.
 *
 * # Safety
 * Pointer arguments must be valid as documented on the module.
 */
enum ResidueStatus residue_query(const struct ResidueContext *ctx,
                                 const char *query_json,
                                 char **out);

/**
 * Runs a job file and returns one JSON record per line.
 *
 * # Safety
 * Pointer arguments must be valid as documented on the module.
 */
enum ResidueStatus residue_run_job(const char *job_json, char **out);

/**
 * Runs `trials` trials of a conformance rule (`"R1"` … `"R10"`,
 * `"jacobian"`, `"tate"`, `"pairing"`, `"sum"`, `"cech"`) and returns the
 * report as JSON. `field` is `"QQ"` or `"Fp:p"`.
 *
 * # Safety
 * Pointer arguments must be valid as documented on the module.
 */
enum ResidueStatus residue_verify(const char *rule,
                                  size_t n,
                                  size_t m,
                                  uint32_t degree,
                                  const char *field,
                                  uint64_t seed,
                                  uint64_t trials,
                                  char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESIDUE_H */
