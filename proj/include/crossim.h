/*
 * crossim — cross-layer network/streaming simulator, C API.
 *
 * Handles are opaque; every function returns a status code and the last
 * error message for the calling thread is available via crossim_last_error().
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with crossim_free_string().
 */
#ifndef CROSSIM_H
#define CROSSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crossim_status {
    CROSSIM_OK = 0,
    CROSSIM_ERR_INVALID_ARG = 1,
    CROSSIM_ERR_PARSE = 2,
    CROSSIM_ERR_IO = 3,
    CROSSIM_ERR_NOT_FOUND = 4,
    CROSSIM_ERR_RUNTIME = 5
} crossim_status;

typedef struct crossim_scenario crossim_scenario;
typedef struct crossim_result crossim_result;

const char* crossim_version(void);
/* Message for the most recent failure on this thread; never NULL. */
const char* crossim_last_error(void);
void crossim_free_string(char* s);

/* --- scenarios ---------------------------------------------------------- */

crossim_status crossim_scenario_load(const char* path, crossim_scenario** out);
crossim_status crossim_scenario_parse(const char* json_text, crossim_scenario** out);
crossim_status crossim_scenario_preset(const char* name, crossim_scenario** out);
crossim_status crossim_scenario_set_seed(crossim_scenario* sc, uint64_t seed);
/* Sets `json_value` (a JSON literal) at a dot path, e.g. "aqm.target_ms". */
crossim_status crossim_scenario_set(crossim_scenario* sc, const char* dot_path,
                                    const char* json_value);
/* Resolved scenario (defaults applied) as canonical JSON. */
crossim_status crossim_scenario_json(const crossim_scenario* sc, char** out_text);
void crossim_scenario_free(crossim_scenario* sc);

/* --- runs --------------------------------------------------------------- */

crossim_status crossim_run(const crossim_scenario* sc, crossim_result** out);
crossim_status crossim_result_json(const crossim_result* r, char** out_text);
/* Writes results.json and per-flow CSV logs under out_root/<name>-<hash>-s<seed>.
 * out_dir (optional) receives the directory written. */
crossim_status crossim_result_write(const crossim_result* r, const char* out_root,
                                    char** out_dir);
void crossim_result_free(crossim_result* r);

/* --- sweeps and plot data ------------------------------------------------ */

/* `source` is a sweep file path, a sweep preset name, or inline JSON.
 * Runs every axis value (up to `jobs` in parallel), writes per-run outputs
 * and a summary CSV under out_root; out_summary (optional) receives the
 * summary CSV path. A failed run is recorded in its summary row; the sweep
 * itself still succeeds. */
crossim_status crossim_sweep(const char* source, const char* out_root, int jobs,
                             char** out_summary);

/* Renders timeline/scatter/qoe CSVs from a directory of run outputs. */
crossim_status crossim_plotdata(const char* results_root, const char* out_dir);

/* --- presets ------------------------------------------------------------- */

int crossim_preset_count(void);
/* Name of preset `index` (0-based); NULL when out of range. The pointer
 * stays valid until the next crossim_preset_name call on this thread. */
const char* crossim_preset_name(int index);
/* 1 when `name` is a sweep preset, 0 for a scenario preset. */
int crossim_preset_is_sweep(const char* name);
crossim_status crossim_preset_json(const char* name, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* CROSSIM_H */
