#ifndef MAGSPEC_H
#define MAGSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum {
  MAGSPEC_STATUS_OK = 0,
  MAGSPEC_STATUS_NULL_POINTER = 1,
  MAGSPEC_STATUS_INVALID_ARGUMENT = 2,
  MAGSPEC_STATUS_INVALID_DOMAIN = 3,
  MAGSPEC_STATUS_NUMERICAL_FAILURE = 4,
  MAGSPEC_STATUS_UNSUPPORTED = 5,
  MAGSPEC_STATUS_IO = 6,
  MAGSPEC_STATUS_PANIC = 7,
} MagspecStatus;

/**
 * Built-in unit-area shapes; the parameter is the aspect ratio, or the area
 * for a disk.
 */
typedef enum {
  MAGSPEC_SHAPE_DISK = 0,
  MAGSPEC_SHAPE_RECTANGLE = 1,
  MAGSPEC_SHAPE_ELLIPSE = 2,
} MagspecShape;

typedef enum {
  /**
   * Needs the torsion function of the same domain.
   */
  MAGSPEC_GAUGE_TORSION = 0,
  MAGSPEC_GAUGE_LANDAU = 1,
} MagspecGauge;

/**
 * A rasterized domain.
 */
typedef struct MagspecDomain MagspecDomain;

/**
 * Torsion function of one [`MagspecDomain`].
 */
typedef struct MagspecTorsion MagspecTorsion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Rasterizes a built-in shape at `resolution` cells per unit length.
 *
 * # Safety
 * `out` must be null or valid for a pointer write.
 */
MagspecStatus magspec_domain_new(MagspecShape shape,
                                 double parameter,
                                 uint32_t resolution,
                                 MagspecDomain **out);

/**
 * Rasterizes the simple polygon with `vertex_count` vertices stored as
 * interleaved `x, y` pairs.
 *
 * # Safety
 * `xy` must point to `2 * vertex_count` readable doubles; `out` must be null
 * or valid for a pointer write.
 */
MagspecStatus magspec_domain_polygon(const double *xy,
                                     size_t vertex_count,
                                     uint32_t resolution,
                                     MagspecDomain **out);

/**
 * # Safety
 * `domain` must be null or a handle from a `magspec_domain_*` constructor
 * that has not been freed.
 */
void magspec_domain_free(MagspecDomain *domain);

/**
 * Rasterized area: cell count times cell area.
 *
 * # Safety
 * `domain` must be a live handle; `area` must be null or writable.
 */
MagspecStatus magspec_domain_area(const MagspecDomain *domain, double *area);

/**
 * Fraenkel asymmetry of the rasterized domain.
 *
 * # Safety
 * `domain` must be a live handle; `alpha` must be null or writable.
 */
MagspecStatus magspec_asymmetry(const MagspecDomain *domain, double *alpha);

/**
 * Solves the torsion problem on `domain`.
 *
 * # Safety
 * `domain` must be a live handle; `out` must be null or writable.
 */
MagspecStatus magspec_torsion_solve(const MagspecDomain *domain, MagspecTorsion **out);

/**
 * # Safety
 * `torsion` must be null or a handle from [`magspec_torsion_solve`] that
 * has not been freed.
 */
void magspec_torsion_free(MagspecTorsion *torsion);

/**
 * Maximum of the torsion function and a maximizer. `x` and `y` may be null.
 *
 * # Safety
 * `torsion` must be a live handle; non-null outputs must be writable.
 */
MagspecStatus magspec_torsion_max(const MagspecTorsion *torsion,
                                  double *value,
                                  double *x,
                                  double *y);

/**
 * The `n` lowest eigenvalues of the magnetic Dirichlet Laplacian shifted by
 * `field`, ascending, written to `values[0..n]`. `torsion` is required for
 * the torsion gauge and ignored for the Landau gauge.
 *
 * # Safety
 * `domain` must be a live handle, `torsion` null or a live handle, and
 * `values` valid for `n` writes.
 */
MagspecStatus magspec_eigenvalues(const MagspecDomain *domain,
                                  const MagspecTorsion *torsion,
                                  MagspecGauge gauge,
                                  double field,
                                  size_t n,
                                  double *values);

/**
 * Upper bounds for the first `n` positive Dirac eigenvalues from the
 * magnetic Hardy space of degree `basis_degree`, written to `upper[0..n]`,
 * and the analytic lower bound for the first one written to `lower`
 * (may be null). Smooth shapes only.
 *
 * # Safety
 * `domain` and `torsion` must be live handles for the same domain, `upper`
 * valid for `n` writes, and `lower` null or writable.
 */
MagspecStatus magspec_dirac_bounds(const MagspecDomain *domain,
                                   const MagspecTorsion *torsion,
                                   double field,
                                   size_t basis_degree,
                                   size_t n,
                                   double *upper,
                                   double *lower);

/**
 * Copies the last error message of this thread into `buffer` (truncated,
 * always NUL-terminated when `capacity > 0`) and returns the length of the
 * full message excluding the terminator. The message is empty after a
 * successful call.
 *
 * # Safety
 * `buffer` must be null or valid for `capacity` writes.
 */
size_t magspec_last_error(char *buffer, size_t capacity);

/**
 * Static, NUL-terminated name of `status`.
 */
const char *magspec_status_name(MagspecStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAGSPEC_H */
