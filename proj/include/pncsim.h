/* C interface to the two-user fading-relay simulation engine.
 *
 * Usage: create an experiment, configure it with string key/value pairs,
 * run it, then read the metric rows or write them as CSV. All functions
 * return PNC_OK or an error code; pnc_experiment_error() holds a message
 * for the most recent failure on that handle.
 */
#ifndef PNCSIM_H
#define PNCSIM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define PNC_OK 0
#define PNC_EINVAL 1  /* bad argument or configuration */
#define PNC_ERUNTIME 2
#define PNC_EIO 3

typedef struct pnc_experiment pnc_experiment;

typedef struct pnc_metric_row {
  char scheme[32];
  double snr_db;
  int iteration;
  double ber;     /* network-coded bit error rate */
  double mse;     /* channel estimate mean squared error */
  int frames;
  double seconds; /* summed receiver wall time */
} pnc_metric_row;

const char* pnc_version(void);

pnc_experiment* pnc_experiment_new(void);
void pnc_experiment_free(pnc_experiment* e);

/* Keys: scheme (comma-separated list of em_bp, sage_bp, sage_bp_pic, em_sic,
 * multi_em_single_bp, mmse_only, full_csi), snr (comma-separated dB values),
 * snr_sweep ("lo:hi:step" in dB), mod (bpsk or qpsk), info_len, repetition,
 * delta, alpha, var_a, var_b, clarke_doppler, em_iters, ncd1, ncd2,
 * pic_exchanges, inner_em, early_stop, frames, seed, threads. */
int pnc_experiment_set(pnc_experiment* e, const char* key, const char* value);

int pnc_experiment_run(pnc_experiment* e);

size_t pnc_experiment_row_count(const pnc_experiment* e);
int pnc_experiment_row(const pnc_experiment* e, size_t index,
                       pnc_metric_row* out);
int pnc_experiment_write_csv(const pnc_experiment* e, const char* path);

/* Gnuplot script plotting final-iteration BER over SNR from a CSV written
 * with pnc_experiment_write_csv. */
int pnc_experiment_write_gnuplot(const pnc_experiment* e, const char* csv_path,
                                 const char* script_path);

/* Message for the last failed call on this handle; empty string if none. */
const char* pnc_experiment_error(const pnc_experiment* e);

#ifdef __cplusplus
}
#endif

#endif /* PNCSIM_H */
