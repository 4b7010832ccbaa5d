#ifndef BICNEURON_H
#define BICNEURON_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BnLearner {
  BN_LEARNER_STANDARD = 0,
  BN_LEARNER_KERNEL_LINEAR = 1,
  BN_LEARNER_KERNEL_RBF = 2,
} BnLearner;

// Result codes. Zero is success.
typedef enum BnStatus {
  BN_STATUS_OK = 0,
  BN_STATUS_NULL_POINTER = 1,
  BN_STATUS_INVALID_ARGUMENT = 2,
  BN_STATUS_IO = 3,
  BN_STATUS_DATA = 4,
  BN_STATUS_NO_COHERENT_BICLUSTERS = 5,
  BN_STATUS_NO_DISCRIMINATIVE_SUBSPACE = 6,
  BN_STATUS_RUNTIME = 7,
  BN_STATUS_PANIC = 8,
} BnStatus;

// Labeled training data.
typedef struct BnDataset BnDataset;

// A fitted model.
typedef struct BnModel BnModel;

// Fit parameters. Start from [`bn_config_default`].
typedef struct BnConfig {
  double t_d;
  double t_m;
  double tau;
  enum BnLearner learner;
  uint32_t epochs;
  double learning_rate;
  // RBF width; ignored by the other learners.
  double sigma;
  // Shuffle seed for the standard perceptron.
  uint64_t seed;
} BnConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL if the last call
// succeeded. Free with [`bn_string_free`].
char *bn_last_error_message(void);

// # Safety
// `s` must come from this library, or be NULL.
void bn_string_free(char *s);

struct BnConfig bn_config_default(void);

// Loads a labeled CSV. `label_col` NULL means the last column; `id_col` NULL
// means no id column.
//
// # Safety
// String arguments must be NUL-terminated or NULL where allowed; `out` must
// be writable.
enum BnStatus bn_dataset_load_csv(const char *path,
                                  const char *label_col,
                                  const char *id_col,
                                  struct BnDataset **out);

// Builds a dataset from a row-major `n_rows * n_cols` array and one label per
// row. Labels may be any two distinct values; the rarer one becomes class 1.
//
// # Safety
// `values` must hold `n_rows * n_cols` doubles and `labels` `n_rows` ints.
enum BnStatus bn_dataset_from_arrays(const double *values,
                                     uintptr_t n_rows,
                                     uintptr_t n_cols,
                                     const int32_t *labels,
                                     struct BnDataset **out);

// # Safety
// `ds` must be a live handle or NULL.
uintptr_t bn_dataset_n_rows(const struct BnDataset *ds);

// # Safety
// `ds` must be a live handle or NULL.
uintptr_t bn_dataset_n_cols(const struct BnDataset *ds);

// # Safety
// `ds` must come from this library and not be used afterwards, or be NULL.
void bn_dataset_free(struct BnDataset *ds);

// Fits a model on `ds`. `config` NULL means [`bn_config_default`].
//
// # Safety
// `ds` must be a live handle, `config` valid or NULL, `out` writable.
enum BnStatus bn_model_fit(const struct BnDataset *ds,
                           const struct BnConfig *config,
                           struct BnModel **out);

// Predicts class roles for raw (unscaled) rows: `+1` is class 1, `-1` class 2.
// `n_cols` must equal the training width.
//
// # Safety
// `values` must hold `n_rows * n_cols` doubles and `out_roles` room for
// `n_rows` ints.
enum BnStatus bn_model_predict(const struct BnModel *model,
                               const double *values,
                               uintptr_t n_rows,
                               uintptr_t n_cols,
                               int32_t *out_roles);

// Original label text of a role (`+1` or `-1`). Free with [`bn_string_free`].
// NULL on a bad handle or role.
//
// # Safety
// `model` must be a live handle or NULL.
char *bn_model_label(const struct BnModel *model, int32_t role);

// # Safety
// `model` must be a live handle; `path` NUL-terminated.
enum BnStatus bn_model_save(const struct BnModel *model, const char *path);

// # Safety
// `path` must be NUL-terminated; `out` writable.
enum BnStatus bn_model_load(const char *path, struct BnModel **out);

// Copies up to `cap` selected feature indices into `out` and returns how
// many the model has. Pass `out` NULL to query the count.
//
// # Safety
// `out` must have room for `cap` entries or be NULL.
uintptr_t bn_model_columns(const struct BnModel *model, uintptr_t *out, uintptr_t cap);

// NaN on a NULL handle.
//
// # Safety
// `model` must be a live handle or NULL.
double bn_model_training_auc(const struct BnModel *model);

// # Safety
// `model` must come from this library and not be used afterwards, or be NULL.
void bn_model_free(struct BnModel *model);

// Mean squared residue of the submatrix `rows x cols` of a row-major matrix.
//
// # Safety
// Arrays must have the stated lengths; `out` must be writable.
enum BnStatus bn_msr(const double *values,
                     uintptr_t n_rows,
                     uintptr_t n_cols,
                     const uintptr_t *rows,
                     uintptr_t n_sel_rows,
                     const uintptr_t *cols,
                     uintptr_t n_sel_cols,
                     double *out);

// Exact two-sided signed-rank p-value for `n` paired samples.
//
// # Safety
// `a` and `b` must hold `n` doubles; `out` must be writable.
enum BnStatus bn_wilcoxon_exact(const double *a, const double *b, uintptr_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BICNEURON_H */
