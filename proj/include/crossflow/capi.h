#ifndef CROSSFLOW_CAPI_H
#define CROSSFLOW_CAPI_H

/* C interface to the crossflow shared library. Every entry point returns a
 * status code; on failure cf_last_error() holds a thread-local message that
 * stays valid until the next failing call on the same thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    CF_OK = 0,
    CF_ERR_ARGUMENT = 1, /* bad pointer, index, or value from the caller */
    CF_ERR_CONFIG = 2,   /* config text or scenario invariants rejected */
    CF_ERR_RUNTIME = 3   /* solver abort, I/O failure, out of memory */
};

/* Opaque experiment description (model, parameters, grid, schedule). */
typedef struct cf_scenario cf_scenario;

const char* cf_version(void);
const char* cf_last_error(void);

/* Constructors; *out owns the handle on CF_OK and must be released with
 * cf_scenario_free. */
int cf_scenario_from_file(const char* path, cf_scenario** out);
int cf_scenario_from_text(const char* text, const char* origin, cf_scenario** out);
int cf_scenario_from_preset(const char* name, cf_scenario** out);
void cf_scenario_free(cf_scenario* sc);

/* Writes the scenario as flat `key = value` config text. Copies at most cap
 * bytes (including the terminator) into buf when buf is non-NULL; *needed
 * receives the full length including the terminator. */
int cf_scenario_serialize(const cf_scenario* sc, char* buf, size_t cap, size_t* needed);

/* Pointer into the handle; valid while the handle lives. */
const char* cf_scenario_name(const cf_scenario* sc);

/* Built-in experiment catalogue. */
int cf_preset_count(void);
const char* cf_preset_name(int index);           /* NULL when out of range */
const char* cf_preset_summary(const char* name); /* NULL when unknown; thread-local */

typedef struct cf_run_options {
    const char* out_dir;     /* NULL: current directory */
    int has_seed;            /* nonzero: seed overrides the scenario's */
    uint64_t seed;
    int has_snapshots_every; /* nonzero: cadence overrides the scenario's */
    long snapshots_every;
    int write_files;         /* nonzero: emit snapshots, CSVs, manifest */
} cf_run_options;

typedef struct cf_run_summary {
    double wall_seconds;
    long total_steps;
    long clamped_cells;
    double mass_drift_rel_r;
    double mass_drift_rel_b;
    int periodic_model;       /* conservation flag applies */
    int conservation_ok;
    int mixed_model;          /* deadlock flag applies */
    int deadlock;
    double convergence_order; /* refinement studies only */
} cf_run_summary;

/* Runs the scenario to completion. opt may be NULL (defaults: current
 * directory, scenario seed and cadence, files written); summary may be
 * NULL when the caller only wants the status. */
int cf_run(const cf_scenario* sc, const cf_run_options* opt, cf_run_summary* summary);

/* Rasterizes the stability classification over the density simplex into a
 * CSV file. method is "curve" or "scan"; NULL means "scan". */
int cf_region_map_csv(const char* path, int resolution, double epsilon, const char* method);

/* Parses and checks a config file without running it. */
int cf_validate_file(const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CROSSFLOW_CAPI_H */
