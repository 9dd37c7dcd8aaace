/* Generated by cbindgen; do not edit. */

#ifndef BBLAB_H
#define BBLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum BblabStatus {
  BBLAB_STATUS_OK = 0,
  BBLAB_STATUS_NULL_POINTER = 1,
  BBLAB_STATUS_INVALID_UTF8 = 2,
  BBLAB_STATUS_INVALID_ARGUMENT = 3,
  BBLAB_STATUS_UNKNOWN_NAME = 4,
  BBLAB_STATUS_MATH = 5,
  BBLAB_STATUS_JSON = 6,
  BBLAB_STATUS_PANIC = 7,
} BblabStatus;

/**
 * Opaque lattice handle.
 */
typedef struct BblabLattice BblabLattice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next library call on the same thread.
 */
const char *bblab_last_error(void);

/**
 * Library version string (static, never freed).
 */
const char *bblab_version(void);

/**
 * Builds a lattice from a row-major `rank x rank` symmetric Gram matrix.
 *
 * # Safety
 * `gram` must point to `rank * rank` readable values; `out` must be writable.
 */
enum BblabStatus bblab_lattice_new(const int64_t *gram, size_t rank, struct BblabLattice **out);

/**
 * Looks up a catalog lattice (`U`, `E8`, `E8(-1)`, `Nikulin`, `K3`, `K3Hilb2`).
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum BblabStatus bblab_lattice_from_catalog(const char *name, struct BblabLattice **out);

/**
 * Parses the JSON produced by [`bblab_lattice_to_json`].
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum BblabStatus bblab_lattice_from_json(const char *json, struct BblabLattice **out);

/**
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum BblabStatus bblab_lattice_rank(const struct BblabLattice *lattice, size_t *out);

/**
 * Determinant as a decimal string.
 *
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum BblabStatus bblab_lattice_det(const struct BblabLattice *lattice, char **out);

/**
 * Serializes label and Gram matrix.
 *
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum BblabStatus bblab_lattice_to_json(const struct BblabLattice *lattice, char **out);

/**
 * Rank, signature, parity and discriminant invariant factors as JSON.
 *
 * # Safety
 * `lattice` must be a live handle and `out` writable.
 */
enum BblabStatus bblab_lattice_profile_json(const struct BblabLattice *lattice, char **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `lattice` must come from this library and not be used afterwards.
 */
void bblab_lattice_free(struct BblabLattice *lattice);

/**
 * Releases a string returned by the library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void bblab_string_free(char *s);

/**
 * Runs verification checks and writes the JSON report array.
 *
 * `checks` is a comma-separated id list; NULL, empty or `all` runs every
 * check. `all_passed` may be NULL.
 *
 * # Safety
 * `checks` must be NULL or NUL-terminated; `out` must be writable.
 */
enum BblabStatus bblab_verify_json(const char *checks,
                                   uint64_t glue_bound,
                                   char **out,
                                   bool *all_passed_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BBLAB_H */
