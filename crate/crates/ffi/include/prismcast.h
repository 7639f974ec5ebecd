/* prismcast C API */

#ifndef PRISMCAST_H
#define PRISMCAST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Operation outcome. Mirrors the CLI exit codes.
typedef enum PcStatus {
  PC_STATUS_OK = 0,
  // Unspecified failure.
  PC_STATUS_UNKNOWN = 1,
  // Malformed CSV, config, model file or scenario id.
  PC_STATUS_PARSE = 2,
  // Not enough data for the requested operation.
  PC_STATUS_INSUFFICIENT_DATA = 3,
  // Training failed (non-finite gradients or diverged).
  PC_STATUS_TRAINING = 4,
  // A future regressor lacks values for requested timestamps.
  PC_STATUS_MISSING_REGRESSOR = 5,
  // A required pointer argument was null.
  PC_STATUS_NULL_ARGUMENT = 6,
  // Invalid UTF-8 in a string argument.
  PC_STATUS_UTF8 = 7,
} PcStatus;

// Opaque fitted-model handle. Create with `pc_fit_csv` or
// `pc_model_load`; release with `pc_model_free`.
typedef struct PcModel PcModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// ABI version of this header; bump on breaking changes.
uint32_t pc_abi_version(void);

// Message describing the most recent failure on this thread. The pointer
// stays valid until the next failing call on the same thread.
const char *pc_last_error_message(void);

// Fits a model to a `ds,y[,...]` CSV. `config_path` may be null for the
// default configuration. On success writes a handle to `out`.
//
// # Safety
// `data_csv` and `out` must be valid pointers; `config_path` may be null.
enum PcStatus pc_fit_csv(const char *data_csv,
                         const char *config_path,
                         uint64_t seed,
                         struct PcModel **out);

// Serializes a model to `path`.
//
// # Safety
// `model` must come from `pc_fit_csv`/`pc_model_load`; `path` must be a
// valid C string.
enum PcStatus pc_model_save(const struct PcModel *model, const char *path);

// Loads a serialized model from `path` into a fresh handle.
//
// # Safety
// `path` and `out` must be valid pointers.
enum PcStatus pc_model_load(const char *path, struct PcModel **out);

// Number of horizon steps the model forecasts per origin; 0 on a null
// handle.
//
// # Safety
// `model` must be a valid handle or null.
size_t pc_model_horizon(const struct PcModel *model);

// Forecasts over the timestamps of `data_csv` and writes the forecast
// frame to `out_csv`; `decompose` adds per-component columns.
//
// # Safety
// All pointers must be valid; `model` must be a live handle.
enum PcStatus pc_predict_csv(const struct PcModel *model,
                             const char *data_csv,
                             const char *out_csv,
                             bool decompose);

// Runs the expanding-origin backtest and writes the per-fold report.
// `horizons` is comma-separated (`"1,3"` or `"inf"`); `naive` evaluates
// the last-value reference model instead of a configured fit.
//
// # Safety
// `data_csv`, `horizons` and `report_out` must be valid C strings;
// `config_path` may be null.
enum PcStatus pc_backtest_csv(const char *data_csv,
                              const char *config_path,
                              const char *horizons,
                              const char *report_out,
                              uint64_t seed,
                              bool naive);

// Generates a synthetic benchmark scenario's CSVs and manifest into
// `out_dir`.
//
// # Safety
// `scenario` and `out_dir` must be valid C strings.
enum PcStatus pc_synth(const char *scenario, uint64_t seed, const char *out_dir);

// Releases a model handle. Passing null is a no-op.
//
// # Safety
// `model` must be a handle from this library, not yet freed.
void pc_model_free(struct PcModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRISMCAST_H */
