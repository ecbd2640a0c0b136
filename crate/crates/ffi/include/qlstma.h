#ifndef QLSTMA_H
#define QLSTMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlstmaStatus {
  QLSTMA_STATUS_OK = 0,
  QLSTMA_STATUS_NULL_POINTER = 1,
  QLSTMA_STATUS_INVALID_ARGUMENT = 2,
  QLSTMA_STATUS_IO = 3,
  QLSTMA_STATUS_PARSE = 4,
  QLSTMA_STATUS_UNSUPPORTED_VERSION = 5,
  QLSTMA_STATUS_VALIDATION = 6,
  QLSTMA_STATUS_NUMERIC = 7,
  QLSTMA_STATUS_PANIC = 8,
} QlstmaStatus;

/**
 * A loaded checkpoint. Create with [`qlstma_model_load`], release with
 * [`qlstma_model_free`].
 */
typedef struct QlstmaModel QlstmaModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qlstma_version(void);

/**
 * Copy of the last error message on this thread, or NULL if the last call
 * succeeded. Free with [`qlstma_string_free`].
 */
char *qlstma_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void qlstma_string_free(char *s);

/**
 * Loads a checkpoint JSON file.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum QlstmaStatus qlstma_model_load(const char *path, struct QlstmaModel **out);

/**
 * # Safety
 * `model` must be NULL or a handle from [`qlstma_model_load`] not yet freed.
 */
void qlstma_model_free(struct QlstmaModel *model);

/**
 * Features per time step the model expects.
 *
 * # Safety
 * `model` must be a live handle.
 */
size_t qlstma_model_input_dim(const struct QlstmaModel *model);

/**
 * Resampling length the model was trained on.
 *
 * # Safety
 * `model` must be a live handle.
 */
size_t qlstma_model_timesteps(const struct QlstmaModel *model);

/**
 * Trainable parameters in the recurrent block and in the whole model.
 *
 * # Safety
 * `model` must be a live handle; `recurrent` and `total` valid or NULL.
 */
enum QlstmaStatus qlstma_model_param_count(const struct QlstmaModel *model,
                                           size_t *recurrent,
                                           size_t *total);

/**
 * Predicts a permeability curve in mD from normalized features.
 *
 * `features` is row-major `(n_steps, n_features)`; `out` receives
 * `n_steps` values.
 *
 * # Safety
 * `features` must hold `n_steps * n_features` doubles and `out` room for
 * `out_len` doubles.
 */
enum QlstmaStatus qlstma_model_predict(const struct QlstmaModel *model,
                                       const double *features,
                                       size_t n_steps,
                                       size_t n_features,
                                       double *out,
                                       size_t out_len);

/**
 * Pauli-Z expectations of the variational circuit.
 *
 * `angles` holds `n_layers * n_qubits * 3` rotation angles laid out as
 * `[layer][qubit][phi, theta, omega]`; `out` receives `n_qubits` values.
 *
 * # Safety
 * `inputs` must hold `n_qubits` doubles, `angles` the amount above and
 * `out` room for `n_qubits` doubles.
 */
enum QlstmaStatus qlstma_vqc_forward(const double *inputs,
                                     size_t n_qubits,
                                     const double *angles,
                                     size_t n_layers,
                                     bool ring,
                                     double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLSTMA_H */
