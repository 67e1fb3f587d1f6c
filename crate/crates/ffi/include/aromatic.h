#ifndef AROMATIC_H
#define AROMATIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes of the C interface.
 */
typedef enum AromaticStatus {
  AROMATIC_STATUS_OK = 0,
  AROMATIC_STATUS_NULL_POINTER = 1,
  AROMATIC_STATUS_INVALID_UTF8 = 2,
  AROMATIC_STATUS_PARSE_ERROR = 3,
  AROMATIC_STATUS_FIELD_ERROR = 4,
  AROMATIC_STATUS_EVAL_ERROR = 5,
  AROMATIC_STATUS_UNKNOWN_METHOD = 6,
  AROMATIC_STATUS_BUFFER_TOO_SMALL = 7,
  AROMATIC_STATUS_ORDER_TOO_LARGE = 8,
  AROMATIC_STATUS_PANIC = 9,
} AromaticStatus;

/**
 * Opaque polynomial vector field.
 */
typedef struct AromaticField AromaticField;

/**
 * Opaque aromatic forest.
 */
typedef struct AromaticForest AromaticForest;

/**
 * Opaque aromatic Runge-Kutta method.
 */
typedef struct AromaticMethod AromaticMethod;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *aromatic_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library and not yet freed.
 */
void aromatic_string_free(char *s);

/**
 * Parses a forest from its bracket notation.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AromaticStatus aromatic_forest_parse(const char *text, struct AromaticForest **out);

/**
 * # Safety
 * `forest` must be NULL or a handle from [`aromatic_forest_parse`] not yet freed.
 */
void aromatic_forest_free(struct AromaticForest *forest);

/**
 * Number of nodes, or 0 for NULL.
 *
 * # Safety
 * `forest` must be NULL or a live handle.
 */
size_t aromatic_forest_node_count(const struct AromaticForest *forest);

/**
 * Number of roots, or 0 for NULL.
 *
 * # Safety
 * `forest` must be NULL or a live handle.
 */
size_t aromatic_forest_root_count(const struct AromaticForest *forest);

/**
 * Canonical string of the forest; free with [`aromatic_string_free`].
 *
 * # Safety
 * `forest` must be a live handle and `out` a valid pointer.
 */
enum AromaticStatus aromatic_forest_canonical(const struct AromaticForest *forest, char **out);

/**
 * Einstein-summation expression of the forest; free with
 * [`aromatic_string_free`].
 *
 * # Safety
 * `forest` must be a live handle and `out` a valid pointer.
 */
enum AromaticStatus aromatic_forest_index_string(const struct AromaticForest *forest, char **out);

/**
 * Number of aromatic trees with `order` nodes.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AromaticStatus aromatic_enumerate_count(size_t order, size_t *out);

/**
 * Reads a vector field from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AromaticStatus aromatic_field_from_json(const char *json, struct AromaticField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from [`aromatic_field_from_json`] not yet freed.
 */
void aromatic_field_free(struct AromaticField *field);

/**
 * Dimension of the field, or 0 for NULL.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
size_t aromatic_field_dim(const struct AromaticField *field);

/**
 * `F(tree)(f)(x)` into `out[0..dim]`.
 *
 * # Safety
 * Handles must be live; `x` must hold `x_len` values and `out` `out_len`.
 */
enum AromaticStatus aromatic_eval_vector(const struct AromaticForest *tree,
                                         const struct AromaticField *field,
                                         const double *x,
                                         size_t x_len,
                                         double *out,
                                         size_t out_len);

/**
 * Full contraction of a rootless forest.
 *
 * # Safety
 * Handles must be live; `x` must hold `x_len` values; `out` must be valid.
 */
enum AromaticStatus aromatic_eval_scalar(const struct AromaticForest *forest,
                                         const struct AromaticField *field,
                                         const double *x,
                                         size_t x_len,
                                         double *out);

/**
 * Looks up a builtin method such as `rk4` or `aromatic-euler(0.5)`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AromaticStatus aromatic_method_builtin(const char *name, struct AromaticMethod **out);

/**
 * Reads a method from its tableau JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AromaticStatus aromatic_method_from_json(const char *json, struct AromaticMethod **out);

/**
 * # Safety
 * `method` must be NULL or a method handle not yet freed.
 */
void aromatic_method_free(struct AromaticMethod *method);

/**
 * One step of size `h` from `y0`, written to `out`.
 *
 * # Safety
 * Handles must be live; `y0` must hold `len` values and `out` `out_len`.
 */
enum AromaticStatus aromatic_method_step(const struct AromaticMethod *method,
                                         const struct AromaticField *field,
                                         const double *y0,
                                         size_t len,
                                         double h,
                                         double *out,
                                         size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AROMATIC_H */
