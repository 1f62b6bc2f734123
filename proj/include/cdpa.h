/* C interface to the class-D power-supply artifact simulator and the
 * identification models built on top of it.
 *
 * All functions returning cdpa_status report failure through the return
 * code; cdpa_last_error() gives a message for the calling thread. Objects
 * returned through out-parameters are owned by the caller and released
 * with the matching *_free function. NULL is always safe to pass to a
 * *_free function.
 */
#ifndef CDPA_H
#define CDPA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  ifdef CDPA_BUILD
#    define CDPA_API __declspec(dllexport)
#  else
#    define CDPA_API __declspec(dllimport)
#  endif
#else
#  define CDPA_API __attribute__((visibility("default")))
#endif

typedef enum cdpa_status {
    CDPA_OK = 0,
    CDPA_ERR_INVALID_ARGUMENT = 1, /* bad parameter or inconsistent config */
    CDPA_ERR_PARSE = 2,            /* config file or key/value rejected */
    CDPA_ERR_IO = 3,               /* file could not be read or written */
    CDPA_ERR_DIVERGED = 4,         /* simulation or training blew up */
    CDPA_ERR_INTERNAL = 5
} cdpa_status;

/* Message for the most recent failure on this thread. Valid until the
 * next cdpa_* call on the same thread. Never NULL. */
CDPA_API const char* cdpa_last_error(void);

/* Step or iteration index associated with the last CDPA_ERR_DIVERGED,
 * -1 otherwise. */
CDPA_API long long cdpa_last_error_index(void);

CDPA_API const char* cdpa_version(void);

typedef struct cdpa_config cdpa_config;
typedef struct cdpa_traces cdpa_traces;
typedef struct cdpa_record cdpa_record;
typedef struct cdpa_spectrum cdpa_spectrum;

/* Narrowband distortion summary of one output spectrum. Component order:
 * ripple fundamental, its second harmonic, lower/upper sidebands at two
 * and one ripple spacings around the audio tone (the tone itself sits in
 * the middle), mirrored above. */
typedef struct cdpa_imd_report {
    double freq_hz[7];
    double level_db[7];
    double psimd2_asym_db;
    double psimd3_asym_db;
} cdpa_imd_report;

/* ------------------------------------------------------------------ */
/* configuration                                                      */
/* ------------------------------------------------------------------ */

/* New config with built-in defaults. */
CDPA_API cdpa_status cdpa_config_create(cdpa_config** out);

/* Parse a "key = value" file ('#' starts a comment). Unknown keys are
 * rejected. */
CDPA_API cdpa_status cdpa_config_load(const char* path, cdpa_config** out);

CDPA_API cdpa_status cdpa_config_set(cdpa_config* cfg, const char* key,
                                     const char* value);

/* Formats the current value of one key into buf (NUL terminated). */
CDPA_API cdpa_status cdpa_config_get(const cdpa_config* cfg, const char* key,
                                     char* buf, size_t buf_size);

/* Full resolved config as pretty-printed JSON. */
CDPA_API cdpa_status cdpa_config_write_json(const cdpa_config* cfg,
                                            const char* path);

CDPA_API void cdpa_config_free(cdpa_config* cfg);

/* ------------------------------------------------------------------ */
/* simulation                                                         */
/* ------------------------------------------------------------------ */

/* Run the switching amplifier model and capture the decimated input and
 * output windows. */
CDPA_API cdpa_status cdpa_simulate(const cdpa_config* cfg, cdpa_traces** out);

CDPA_API size_t cdpa_traces_count(const cdpa_traces* tr);
CDPA_API double cdpa_traces_sample_rate(const cdpa_traces* tr);
CDPA_API double cdpa_traces_start_time(const cdpa_traces* tr);

/* Copies cdpa_traces_count() samples into each non-NULL destination. */
CDPA_API cdpa_status cdpa_traces_copy(const cdpa_traces* tr, double* input,
                                      double* output);

CDPA_API cdpa_status cdpa_traces_write_csv(const cdpa_traces* tr,
                                           const char* path);

CDPA_API void cdpa_traces_free(cdpa_traces* tr);

/* ------------------------------------------------------------------ */
/* training                                                           */
/* ------------------------------------------------------------------ */

/* Trains a network on the captured traces. model is "benn", "ewnn" or
 * "ewnn-ab"; pass NULL to use the configured train.model. */
CDPA_API cdpa_status cdpa_train(const cdpa_config* cfg, const cdpa_traces* tr,
                                const char* model, cdpa_record** out);

CDPA_API int cdpa_record_iterations(const cdpa_record* rec);
CDPA_API double cdpa_record_final_sse(const cdpa_record* rec);
CDPA_API double cdpa_record_max_time_error(const cdpa_record* rec);

/* "threshold-met" or "max-iterations"; pointer valid while rec lives. */
CDPA_API const char* cdpa_record_stop_reason(const cdpa_record* rec);

CDPA_API size_t cdpa_record_curve_len(const cdpa_record* rec);
CDPA_API cdpa_status cdpa_record_copy_curve(const cdpa_record* rec,
                                            double* out);

/* Training summary JSON; model_file is the file name recorded as holding
 * the weights (written separately by cdpa_record_write_model_json). */
CDPA_API cdpa_status cdpa_record_write_json(const cdpa_record* rec,
                                            const char* path,
                                            const char* model_file);
CDPA_API cdpa_status cdpa_record_write_model_json(const cdpa_record* rec,
                                                  const char* path);
CDPA_API cdpa_status cdpa_record_write_sse_csv(const cdpa_record* rec,
                                               const char* path);

CDPA_API void cdpa_record_free(cdpa_record* rec);

/* ------------------------------------------------------------------ */
/* spectra                                                            */
/* ------------------------------------------------------------------ */

typedef enum cdpa_trace_channel {
    CDPA_TRACE_INPUT = 0,
    CDPA_TRACE_OUTPUT = 1
} cdpa_trace_channel;

CDPA_API cdpa_status cdpa_spectrum_compute(const cdpa_traces* tr,
                                           cdpa_trace_channel channel,
                                           cdpa_spectrum** out);

CDPA_API size_t cdpa_spectrum_bins(const cdpa_spectrum* sp);
CDPA_API double cdpa_spectrum_bin_width(const cdpa_spectrum* sp);

/* Copies cdpa_spectrum_bins() magnitudes (dB) into out. */
CDPA_API cdpa_status cdpa_spectrum_copy(const cdpa_spectrum* sp, double* out);

CDPA_API cdpa_status cdpa_spectrum_measure_imd(const cdpa_spectrum* sp,
                                               double input_freq,
                                               double ripple_freq,
                                               cdpa_imd_report* out);

CDPA_API cdpa_status cdpa_spectrum_write_csv(const cdpa_spectrum* sp,
                                             const char* path);

CDPA_API void cdpa_spectrum_free(cdpa_spectrum* sp);

/* ------------------------------------------------------------------ */
/* whole commands                                                     */
/* ------------------------------------------------------------------ */

/* Each writes its result files plus a config.json echo into out_dir
 * (created if missing). Pass out_dir = NULL to use the configured
 * output.dir. */

CDPA_API cdpa_status cdpa_run_simulate(const cdpa_config* cfg,
                                       const char* out_dir);

/* model: "benn", "ewnn", "ewnn-ab" or "volterra" (NULL = configured). */
CDPA_API cdpa_status cdpa_run_train(const cdpa_config* cfg, const char* model,
                                    const char* out_dir);

/* Fits every model against one simulation and writes the comparison.
 * measured may be NULL; on success it receives the distortion summary
 * of the simulated output. */
CDPA_API cdpa_status cdpa_run_compare(const cdpa_config* cfg,
                                      const char* out_dir,
                                      cdpa_imd_report* measured);

/* kind: "hidden", "frequency" or "ab-updates". model picks the network
 * for the hidden sweep (NULL = configured) and is ignored otherwise. */
CDPA_API cdpa_status cdpa_run_sweep(const cdpa_config* cfg, const char* kind,
                                    const char* model, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CDPA_H */
