/* Three-party secure decision-tree training: C interface.
 *
 * The library runs replicated-secret-sharing training sessions over an
 * in-process simulation or TCP, reports per-party communication meters and
 * accuracy next to a plaintext reference trainer, and opens trained models
 * for prediction. Handles are opaque; every call returns a status code and
 * the last error message is kept per thread.
 */
#ifndef TREFOIL_H
#define TREFOIL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trefoil_status {
    TREFOIL_OK = 0,
    TREFOIL_ERR_CONFIG = 1,
    TREFOIL_ERR_RANGE = 2,
    TREFOIL_ERR_LOAD = 3,
    TREFOIL_ERR_TRANSPORT = 4,
    TREFOIL_ERR_DESYNC = 5,
    TREFOIL_ERR_SETUP = 6,
    TREFOIL_ERR_INTEGRITY = 7,
    TREFOIL_ERR_PROTOCOL = 8,
    TREFOIL_ERR_INVALID = 9,
    TREFOIL_ERR_INTERNAL = 10
} trefoil_status;

typedef struct trefoil_config trefoil_config;
typedef struct trefoil_report trefoil_report;
typedef struct trefoil_model trefoil_model;

const char* trefoil_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* trefoil_last_error(void);

/* --- run configuration ----------------------------------------------------
 * Integer keys: label_col, height, ring_k, ring_l, frac_bits, scale_digits,
 *               seed, party_id, split_permille
 * String keys:  dataset, mode ("inproc"|"tcp"), open_to ("0"|"1"|"2"|"all"|
 *               "none"), addresses ("host:port,host:port,host:port")
 */
trefoil_config* trefoil_config_new(void);
void trefoil_config_free(trefoil_config*);
trefoil_status trefoil_config_set_int(trefoil_config*, const char* key, long long value);
trefoil_status trefoil_config_set_str(trefoil_config*, const char* key, const char* value);

/* --- training -------------------------------------------------------------
 * Runs a full training session per the configuration. With mode=tcp the
 * call acts as the configured party and blocks until the session finishes.
 * For synthetic benchmarking pass a dataset of the form "synth:n,m,v".
 */
trefoil_status trefoil_train(const trefoil_config*, trefoil_report** out);

void trefoil_report_free(trefoil_report*);
/* The rendered report (owned by the report handle). */
const char* trefoil_report_text(const trefoil_report*);
/* Named metrics: n_train, n_test, m, v, height, frac_bits, wall_ms,
 * total_online_bits, max_online_rounds, total_setup_bits, gen_perm_count,
 * train_accuracy, test_accuracy, oracle_train_accuracy,
 * oracle_test_accuracy, has_eval, party_count. */
trefoil_status trefoil_report_metric(const trefoil_report*, const char* key, double* out);
trefoil_status trefoil_report_write(const trefoil_report*, const char* path);
/* NULL when the model was withheld (open_to=none) or this party did not
 * open; otherwise owned by the report. */
const trefoil_model* trefoil_report_model(const trefoil_report*);

/* --- models ----------------------------------------------------------------
 */
trefoil_status trefoil_model_parse(const char* text, trefoil_model** out);
void trefoil_model_free(trefoil_model*);
/* Serialized model text (owned by the model handle). */
const char* trefoil_model_text(const trefoil_model*);
/* Predicts the label of one sample of m raw attribute values. */
trefoil_status trefoil_model_predict(const trefoil_model*, const double* attrs, size_t m,
                                     long long* label_out);

#ifdef __cplusplus
}
#endif

#endif /* TREFOIL_H */
