/* C API for the self-calibrated weakly-supervised salient-object-detection
 * pipeline. All functionality is reachable through an opaque configuration
 * handle plus per-stage entry points; every call returns a status code and
 * leaves a human-readable message in sw_last_error() on failure.
 */
#ifndef SELFCAL_WSOD_H
#define SELFCAL_WSOD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef SW_API
#define SW_API __attribute__((visibility("default")))
#endif

/* Status codes double as process exit codes. */
typedef enum sw_status {
    SW_OK = 0,
    SW_ERR_RUNTIME = 1,
    SW_ERR_CONFIG = 2
} sw_status;

typedef struct sw_config sw_config;
typedef struct sw_report sw_report;

SW_API const char* sw_version(void);

/* Thread-local message describing the most recent failure. */
SW_API const char* sw_last_error(void);

/* --- configuration ------------------------------------------------------ */

SW_API sw_config* sw_config_new(void);
SW_API void sw_config_free(sw_config* cfg);

/* Merges a JSON config file into cfg. */
SW_API int sw_config_load_file(sw_config* cfg, const char* path);

/* Sets one dotted key, e.g. "stage2.lr", "lambda" ("fixed:0.6" | "scheduled"
 * | "capped:0.6"), "preset" ("tiny" | "paper"), "seed", "crf". */
SW_API int sw_config_set(sw_config* cfg, const char* key, const char* value);

/* Resolves presets and validates; must be called before any sw_run_*. */
SW_API int sw_config_finalize(sw_config* cfg);

/* Fully-resolved config as JSON; free with sw_string_free. */
SW_API char* sw_config_to_json(const sw_config* cfg);
SW_API void sw_string_free(char* s);

/* --- pipeline stages ------------------------------------------------------ */

SW_API int sw_run_gen_synthetic(const sw_config* cfg);
SW_API int sw_run_train_classifier(const sw_config* cfg);
SW_API int sw_run_gen_pseudo(const sw_config* cfg);
SW_API int sw_run_train_saliency(const sw_config* cfg);
SW_API int sw_run_infer(const sw_config* cfg);
SW_API int sw_run_export_labels(const sw_config* cfg);
SW_API int sw_run_report(const sw_config* cfg);

/* Evaluation returns a report handle on success. */
SW_API int sw_run_eval(const sw_config* cfg, sw_report** out_report);

/* --- metric reports ------------------------------------------------------- */

SW_API int sw_report_image_count(const sw_report* report);

/* values = {s_measure, e_measure, f_measure, mae}. id_buf may be NULL. */
SW_API int sw_report_image_metrics(const sw_report* report, int index, char* id_buf,
                                   size_t id_buf_len, double values[4]);
SW_API int sw_report_means(const sw_report* report, double values[4]);
SW_API void sw_report_free(sw_report* report);

/* --- optional dense-CRF plugin ------------------------------------------- */

/* mask: h*w doubles in [0,1]; image: 3*h*w doubles, planar RGB in [0,1].
 * Writes h*w doubles to out_mask and returns nonzero on success. */
typedef int (*sw_crf_plugin_fn)(const double* mask, const double* image, int h, int w,
                                double* out_mask, void* user);

/* Installs (or clears, with fn == NULL) the process-wide CRF plugin. Without
 * a plugin, CRF refinement passes inputs through unchanged and is flagged. */
SW_API int sw_crf_set_plugin(sw_crf_plugin_fn fn, void* user);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SELFCAL_WSOD_H */
