/*
 * C API for the immune-network protection simulator. The library is a C++
 * core; this surface exposes opaque handles and error codes so it can be
 * linked from C, loaded with dlopen, or wrapped from other languages.
 *
 * Strings returned through char** are heap-allocated; release them with
 * sana_string_free. All calls are thread-compatible: distinct handles may
 * be used from distinct threads, a single handle must not be shared.
 */

#ifndef SANA_H
#define SANA_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SANA_API __declspec(dllexport)
#else
#define SANA_API __attribute__((visibility("default")))
#endif

typedef enum sana_status {
    SANA_OK = 0,
    SANA_ERR_INVALID_SCENARIO = 1,
    SANA_ERR_IO = 2,
    SANA_ERR_BAD_ARGUMENT = 3,
    SANA_ERR_RUNTIME = 4,
} sana_status;

/* Opaque simulation handle. */
typedef struct sana_sim sana_sim;

SANA_API const char* sana_version(void);

/* Message for the most recent failure on this thread. */
SANA_API const char* sana_last_error(void);

SANA_API void sana_string_free(char* s);

/*
 * One full deterministic run of a scenario file. mode_override may be
 * "none", "baseline", "sana" or "hybrid" (NULL keeps the file's mode);
 * seed_override < 0 keeps the file's seed. trace_level is "none",
 * "summary" or "full". out_dir may be NULL (no files written). On success
 * *report_json receives the run report.
 */
SANA_API sana_status sana_run_file(const char* scenario_path, const char* mode_override,
                                   int64_t seed_override, const char* trace_level,
                                   const char* out_dir, char** report_json);

/* As sana_run_file, but the scenario is given as JSON text. */
SANA_API sana_status sana_run_json(const char* scenario_json, const char* mode_override,
                                   int64_t seed_override, const char* trace_level,
                                   const char* out_dir, char** report_json);

/*
 * Side-by-side runs of the same scenario under each mode (same topology,
 * adversary and seed). modes is an array of mode names, n_modes >= 2.
 */
SANA_API sana_status sana_compare_file(const char* scenario_path, const char* const* modes,
                                       size_t n_modes, const char* trace_level,
                                       const char* out_dir, char** table_json);

/* Per-seed runs plus aggregate statistics. n_seeds >= 1. */
SANA_API sana_status sana_sweep_file(const char* scenario_path, const uint64_t* seeds,
                                     size_t n_seeds, const char* trace_level,
                                     const char* out_dir, char** aggregate_json);

/* ---- stepping interface for embedding ---- */

SANA_API sana_status sana_sim_create_from_file(const char* scenario_path,
                                               const char* mode_override,
                                               int64_t seed_override, sana_sim** out);

SANA_API sana_status sana_sim_create_from_json(const char* scenario_json,
                                               const char* mode_override,
                                               int64_t seed_override, sana_sim** out);

/* Advances the simulation by `ticks` ticks. */
SANA_API sana_status sana_sim_step(sana_sim* sim, uint64_t ticks);

SANA_API uint64_t sana_sim_tick(const sana_sim* sim);

/*
 * Scalar run metrics by name: "infected_now", "quarantined_now",
 * "peak_infected", "population", "roaming", "alerts_total",
 * "packets_sent", "packets_dropped", "min_level".
 */
SANA_API sana_status sana_sim_metric(const sana_sim* sim, const char* name, double* out);

/* Current report for the run so far. */
SANA_API sana_status sana_sim_report_json(sana_sim* sim, char** report_json);

/* Writes trace files collected so far into out_dir. */
SANA_API sana_status sana_sim_write_traces(sana_sim* sim, const char* out_dir);

SANA_API void sana_sim_destroy(sana_sim* sim);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SANA_H */
