#ifndef LINDSCOPE_H
#define LINDSCOPE_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LsRegime {
  LS_REGIME_HAMILTONIAN = 0,
  LS_REGIME_NORMAL_DISSIPATIVE = 1,
  LS_REGIME_WEAKLY_NONNORMAL = 2,
  LS_REGIME_CROSSOVER = 3,
  LS_REGIME_STRONGLY_NONNORMAL = 4,
} LsRegime;

typedef enum LsStatus {
  LS_STATUS_OK = 0,
  LS_STATUS_NULL_POINTER = 1,
  LS_STATUS_INVALID_STRING = 2,
  LS_STATUS_DIMENSION = 3,
  LS_STATUS_NOT_HERMITIAN = 4,
  LS_STATUS_NUMERICAL = 5,
  LS_STATUS_RANGE = 6,
  LS_STATUS_MODEL = 7,
  LS_STATUS_CONFIG = 8,
  LS_STATUS_IO = 9,
  LS_STATUS_BUFFER_TOO_SMALL = 10,
  LS_STATUS_PANIC = 11,
} LsStatus;

typedef enum LsSeriesColumn {
  LS_SERIES_COLUMN_TIME = 0,
  LS_SERIES_COLUMN_PROP_NORM = 1,
  LS_SERIES_COLUMN_A_PAPER = 2,
  LS_SERIES_COLUMN_A_SPECTRAL = 3,
  LS_SERIES_COLUMN_GRONWALL_ENV = 4,
  LS_SERIES_COLUMN_APPG_ENV = 5,
} LsSeriesColumn;

typedef struct LsModel LsModel;

typedef struct LsSeries LsSeries;

typedef struct LsSuperop LsSuperop;

/**
 * `kappa` is NaN and `kappa_defined` false when the generator has no
 * dissipative part.
 */
typedef struct LsMetrics {
  double delta;
  double eta;
  double nd_norm;
  double kappa;
  bool kappa_defined;
  double bound_margin;
  double generator_norm;
  enum LsRegime regime;
} LsMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ls_last_error(void);

/**
 * Static, NUL-terminated regime name.
 */
const char *ls_regime_name(enum LsRegime regime);

/**
 * Builds a model from a JSON document in either the named or the explicit
 * form accepted by the command-line tool.
 */
enum LsStatus ls_model_from_json(const char *json, struct LsModel **out);

enum LsStatus ls_model_from_file(const char *path, struct LsModel **out);

/**
 * `h_re`/`h_im` hold `dim*dim` entries; `jumps_re`/`jumps_im` hold
 * `n_jumps` consecutive `dim*dim` blocks. Any `*_im` may be null for a
 * real matrix, and `jumps_re` may be null when `n_jumps` is zero.
 */
enum LsStatus ls_model_from_matrices(size_t dim,
                                     const double *h_re,
                                     const double *h_im,
                                     size_t n_jumps,
                                     const double *jumps_re,
                                     const double *jumps_im,
                                     struct LsModel **out);

size_t ls_model_dim(const struct LsModel *model);

void ls_model_free(struct LsModel *model);

enum LsStatus ls_liouvillian(const struct LsModel *model, struct LsSuperop **out);

/**
 * `e^{tL}`.
 */
enum LsStatus ls_propagator(const struct LsSuperop *op, double t, struct LsSuperop **out);

/**
 * Hilbert-space dimension `d`; the matrix is `d² × d²`.
 */
size_t ls_superop_dim(const struct LsSuperop *op);

enum LsStatus ls_superop_norm(const struct LsSuperop *op, double *out);

/**
 * Copies the `d⁴` entries in row-major order, column-stacking convention.
 * Either output may be null.
 */
enum LsStatus ls_superop_entries(const struct LsSuperop *op, double *re, double *im, size_t len);

void ls_superop_free(struct LsSuperop *op);

enum LsStatus ls_analyze(const struct LsSuperop *op,
                         double kappa_lo,
                         double kappa_hi,
                         struct LsMetrics *out);

/**
 * Amplification series on `steps + 1` uniform points of
 * `[t_start, t_end]`. With `steps == 0` the default grid for the generator
 * is used and the interval is ignored.
 */
enum LsStatus ls_series(const struct LsSuperop *op,
                        double t_start,
                        double t_end,
                        size_t steps,
                        struct LsSeries **out);

size_t ls_series_len(const struct LsSeries *series);

enum LsStatus ls_series_column(const struct LsSeries *series,
                               enum LsSeriesColumn column,
                               double *out,
                               size_t len);

void ls_series_free(struct LsSeries *series);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINDSCOPE_H */
