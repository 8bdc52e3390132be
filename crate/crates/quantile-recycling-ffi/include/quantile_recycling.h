#ifndef QUANTILE_RECYCLING_H
#define QUANTILE_RECYCLING_H

/* Generated by cbindgen from the quantile-recycling-ffi crate; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status of a fallible call. Zero is success; everything else names the
// failure class of the underlying computation.
typedef enum {
  QR_STATUS_OK = 0,
  // An argument lies outside its documented domain.
  QR_STATUS_DOMAIN = 1,
  // A requested accuracy could not be met.
  QR_STATUS_ACCURACY = 2,
  // A solved map stopped being strictly increasing.
  QR_STATUS_MONOTONICITY = 3,
  // Non-finite state or magnitude blow-up.
  QR_STATUS_OVERFLOW = 4,
  // The requested combination is not provided.
  QR_STATUS_UNSUPPORTED = 5,
  // The reference computation itself failed.
  QR_STATUS_ORACLE = 6,
  // Evaluation outside a map's tabulated range.
  QR_STATUS_OUT_OF_RANGE = 7,
  // A required pointer was null.
  QR_STATUS_NULL_ARGUMENT = 8,
} QrStatus;

// Opaque handle to a solved recycling map.
typedef struct QrMap QrMap;

// Opaque handle to a Student t composite quantile map.
typedef struct QrStudentMap QrStudentMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the underlying library as a static NUL-terminated string.
const char *qr_version(void);

// Tail-depth normal quantile `z(v) = Phi^{-1}(1 - e^{-v}/2)` through the
// (7,7) rational fit. Accurate to 1.06e-9 relative for `0 <= v <= 37`;
// values beyond degrade smoothly instead of failing.
double qr_q77(double v);

// Branchless whole-range normal quantile over the (7,7) fit.
//
// # Safety
// `out` must point to a writable double.
QrStatus qr_icnd_f1(double u, double *out);

// Branchless whole-range normal quantile over the cheaper (5,5) fit,
// accurate to about 4e-7 relative.
//
// # Safety
// `out` must point to a writable double.
QrStatus qr_icnd_f2(double u, double *out);

// Branchless whole-range normal quantile over the (13,13) fit, about
// 1e-13 relative for `u` in `[1e-30, 1 - 1e-16]`.
//
// # Safety
// `out` must point to a writable double.
QrStatus qr_icnd_double(double u, double *out);

// Bulk form of [`qr_icnd_double`]; the first invalid probability aborts
// the fill and nothing past it is written.
//
// # Safety
// `u` must point to `len` readable doubles and `out` to `len` writable
// doubles; the two ranges must not overlap.
QrStatus qr_icnd_double_array(const double *u, double *out, size_t len);

// Closed-form continuation of the normal quantile past the rational fits;
// valid for `v >= 37`.
//
// # Safety
// `out` must point to a writable double.
QrStatus qr_tail_supplement(double v, double *out);

// Antithetic normal pair from one uniform draw; the two outputs always
// sum to zero bit-for-bit. `use_double_kernel` selects the (13,13) fit
// over the (7,7) one.
//
// # Safety
// `z` and `z_mirror` must each point to a writable double.
QrStatus qr_normal_antithetic(double u, bool use_double_kernel, double *z, double *z_mirror);

// Creates a Student t quantile map (central series plus tail model) for
// `n` degrees of freedom; `n = 4` uses the validated fast path.
//
// # Safety
// `out` must point to a writable handle slot. On success the caller owns
// the handle and must release it with [`qr_student_map_free`].
QrStatus qr_student_map_new(double n, QrStudentMap **out);

// Student t quantile in Gaussian depth: the sample `z(v)` of a standard
// normal converts to a Student t sample at the same probability.
//
// # Safety
// `map` must be a live handle from [`qr_student_map_new`]; `out` must
// point to a writable double.
QrStatus qr_student_map_eval(const QrStudentMap *map, double v, double *out);

// Releases a Student map handle; null is a no-op.
//
// # Safety
// `map` must be null or a handle from [`qr_student_map_new`] that has not
// already been freed.
void qr_student_map_free(QrStudentMap *map);

// Solves the Gaussian -> Student t recycling map over `[-v_max, v_max]`.
// `step <= 0` selects the default step size.
//
// # Safety
// `out` must point to a writable handle slot. On success the caller owns
// the handle and must release it with [`qr_map_free`].
QrStatus qr_map_gaussian_to_student(double n, double v_max, double step, QrMap **out);

// Solves the exponential -> normal recycling map over `[0, v_max]`;
// `v` is exponential depth, the map value is the upper-half normal
// quantile. `step <= 0` selects the default.
//
// # Safety
// `out` must point to a writable handle slot; ownership as in
// [`qr_map_gaussian_to_student`].
QrStatus qr_map_exp_to_normal(double v_max, double step, QrMap **out);

// Solves the two-sided-exponential -> hyperbolic recycling map over
// `[-v_max, v_max]` for shape `alpha`, skew `beta`, scale `delta`.
// `step <= 0` selects the default.
//
// # Safety
// `out` must point to a writable handle slot; ownership as in
// [`qr_map_gaussian_to_student`].
QrStatus qr_map_exp_to_hyperbolic(double alpha,
                                  double beta,
                                  double delta,
                                  double v_max,
                                  double step,
                                  QrMap **out);

// Solves the two-sided-exponential -> variance gamma recycling map over
// `[-v_max, v_max]`; needs `lambda >= 1`. `step <= 0` selects the
// default.
//
// # Safety
// `out` must point to a writable handle slot; ownership as in
// [`qr_map_gaussian_to_student`].
QrStatus qr_map_exp_to_vg(double lambda,
                          double alpha,
                          double beta,
                          double v_max,
                          double step,
                          QrMap **out);

// Evaluates a solved map at `v`; fails with an out-of-range status
// outside the tabulated interval.
//
// # Safety
// `map` must be a live handle from a `qr_map_*` constructor; `out` must
// point to a writable double.
QrStatus qr_map_eval(const QrMap *map, double v, double *out);

// Reports the tabulated range of a solved map.
//
// # Safety
// `map` must be a live handle; `lo` and `hi` must each point to a
// writable double.
QrStatus qr_map_range(const QrMap *map, double *lo, double *hi);

// Number of tabulated nodes in a solved map; zero for a null handle.
//
// # Safety
// `map` must be null or a live handle.
size_t qr_map_node_count(const QrMap *map);

// Copies the node abscissas and values of a solved map into caller
// buffers; `len` must equal [`qr_map_node_count`].
//
// # Safety
// `map` must be a live handle; `vs` and `qs` must each point to `len`
// writable doubles.
QrStatus qr_map_copy_nodes(const QrMap *map, double *vs, double *qs, size_t len);

// Releases a solved-map handle; null is a no-op.
//
// # Safety
// `map` must be null or a handle from a `qr_map_*` constructor that has
// not already been freed.
void qr_map_free(QrMap *map);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QUANTILE_RECYCLING_H */
