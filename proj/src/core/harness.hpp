#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/receiver.hpp"

namespace pnc {

// One Monte-Carlo sweep. Every scheme and every SNR point replays the same
// frames: source bits, channel realization and a unit-variance noise draw are
// generated once per frame index, the noise is rescaled per SNR point.
struct ExperimentConfig {
  std::vector<Scheme> schemes{Scheme::em_bp};
  std::vector<double> snrs_db{10.0};  // symbol SNR, N0 = 10^(-snr/10)
  Modulation mod = Modulation::BPSK;
  int info_len = 512;
  int repetition = 3;
  int pilot_interval = 16;  // delta
  double alpha = 0.99;
  double var_a = 1.0;
  double var_b = 1.0;
  double clarke_doppler = 0.0;  // > 0 switches the truth to Clarke fading
  int em_iters = 5;
  int ncd1 = 6;
  int ncd2 = 6;
  int pic_exchanges = 2;
  int inner_em_per_bp = 1;
  double early_stop_delta = 0.0;
  int frames = 100;
  std::uint64_t master_seed = 1;
  int threads = 1;  // 0 = hardware concurrency
};

struct MetricRow {
  std::string scheme;
  double snr_db = 0.0;
  int iteration = 0;
  double ber = 0.0;
  double mse = 0.0;
  int frames = 0;
  double seconds = 0.0;
};

// Frame-averaged BER/MSE per (scheme, snr, iteration). Row order and values
// are independent of the thread count: per-frame results are stored by frame
// index and reduced sequentially.
std::vector<MetricRow> run_experiment(const ExperimentConfig& cfg);

void emit_csv(const std::vector<MetricRow>& rows, std::ostream& os);
void write_csv(const std::vector<MetricRow>& rows, const std::string& path);

// Gnuplot script plotting final-iteration BER over SNR, one curve per scheme.
void write_gnuplot_script(const std::vector<MetricRow>& rows,
                          const std::string& csv_path,
                          const std::string& script_path);

}  // namespace pnc
