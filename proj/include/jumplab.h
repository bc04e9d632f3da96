/*
 * jumplab C API: jump detection for high-frequency price paths.
 *
 * All functions return jl_status; JL_OK means success. On failure,
 * jl_last_error() returns a thread-local description of the most recent
 * error on the calling thread. Structured inputs and outputs travel as
 * JSON strings; strings returned through char** must be released with
 * jl_string_free().
 */
#ifndef JUMPLAB_H
#define JUMPLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define JUMPLAB_API __declspec(dllexport)
#else
#define JUMPLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jl_status {
    JL_OK = 0,
    JL_ERR_INVALID_ARGUMENT = 1,
    JL_ERR_INSUFFICIENT_DATA = 2,
    JL_ERR_DEGENERATE_PATH = 3,
    JL_ERR_DEGENERATE_VARIANCE = 4,
    JL_ERR_NUMERIC = 5,
    JL_ERR_PARSE = 6,
    JL_ERR_FLAT_DAY = 7,
    JL_ERR_IO = 8,
    JL_ERR_INTERNAL = 9
} jl_status;

/* Opaque sampled log-price path. */
typedef struct jl_path jl_path;

JUMPLAB_API const char* jl_version(void);
JUMPLAB_API const char* jl_last_error(void);
JUMPLAB_API void jl_string_free(char* s);

/* ---- paths ---------------------------------------------------------- */

/* values are log prices at a regular grid; count is the number of points. */
JUMPLAB_API jl_status jl_path_create(const double* values, size_t count,
                                     double delta, double horizon, jl_path** out);

/* Ingest an intraday CSV (header timestamp,price) restricted to the given
 * session clock times, e.g. "09:30:00" and "16:00:00". metadata_json (may be
 * NULL) receives row counts, fill counts and the detected spacing. */
JUMPLAB_API jl_status jl_path_from_csv(const char* file, const char* session_start,
                                       const char* session_end, jl_path** out,
                                       char** metadata_json);

JUMPLAB_API void jl_path_free(jl_path* path);
JUMPLAB_API size_t jl_path_count(const jl_path* path); /* number of increments */
JUMPLAB_API double jl_path_delta(const jl_path* path);
JUMPLAB_API double jl_path_horizon(const jl_path* path);

/* Copies all count()+1 values; cap is the capacity of out. */
JUMPLAB_API jl_status jl_path_values(const jl_path* path, double* out, size_t cap);

/* Last-tick aggregation by an integer factor; *dropped (may be NULL)
 * receives the number of truncated trailing observations. */
JUMPLAB_API jl_status jl_path_aggregate(const jl_path* path, int factor,
                                        jl_path** out, size_t* dropped);

/* ---- simulation ------------------------------------------------------ */

/* spec_json example:
 * {"seed":1,"days":1,"steps_per_day":23400,
 *  "heston":{"v0":0.16,"kappa":5,"beta_bar":0.16,"gamma":0.5,"rho":-0.5},
 *  "jumps":{"kind":"sparse","intensity":2.5,"mark_variance":0.05},
 *  "noise":{"kind":"gaussian","q":0.005}}
 * jumps_json (may be NULL) receives the injected jump records. */
JUMPLAB_API jl_status jl_simulate_day(const char* spec_json, jl_path** latent,
                                      jl_path** observed, char** jumps_json);

/* Writes the (index,time,latent,observed,variance) dump for one day. */
JUMPLAB_API jl_status jl_simulate_to_csv(const char* spec_json, const char* out_file);

/* ---- tests ----------------------------------------------------------- */

/* options_json selects the method and tuning, e.g.
 * {"method":"cc","k":2,"p":4,"level":0.05,"bootstrap":{"b1":199},"seed":7}.
 * Methods: aj, lm (bootstrap-calibrated unless "bootstrap":false), cc,
 * pa (alias ajj), la (double bootstrap), ccn.
 * report_json receives statistic, normalized value, p-value and tuning. */
JUMPLAB_API jl_status jl_test_path(const jl_path* path, const char* options_json,
                                   char** report_json);

/* ---- experiments ------------------------------------------------------ */

/* Runs a config-driven Monte Carlo table; writes the CSV (and, when
 * sidecar_json_file is non-NULL, a sidecar with the full config). The
 * JUMPLAB_SEED and JUMPLAB_WORKERS environment variables override the
 * base seed and cap the worker pool. */
JUMPLAB_API jl_status jl_experiment_run(const char* config_json,
                                        const char* out_csv_file,
                                        const char* sidecar_json_file,
                                        char** summary_json);

/* ---- selection -------------------------------------------------------- */

/* Benjamini-Hochberg step-up at FDR level q. selected must hold count
 * entries; entry i is set to 1 when index i is selected, else 0. */
JUMPLAB_API jl_status jl_bh_select(const double* pvalues, size_t count, double q,
                                   int* selected);

#ifdef __cplusplus
}
#endif

#endif /* JUMPLAB_H */
