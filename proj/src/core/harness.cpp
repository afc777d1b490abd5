#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "core/rng.hpp"

namespace pnc {

namespace {

constexpr std::uint64_t kSaltInterleaver = 0;
constexpr std::uint64_t kSaltBits = 1;
constexpr std::uint64_t kSaltChannel = 2;
constexpr std::uint64_t kSaltNoise = 3;

struct PerRun {
  std::vector<double> ber, mse;  // indexed by iteration
  double seconds = 0.0;
};

int expected_iters(Scheme s, int em_iters) {
  if (s == Scheme::mmse_only || s == Scheme::full_csi) return 1;
  return em_iters + 1;
}

void validate(const ExperimentConfig& cfg, int& data_len) {
  if (cfg.schemes.empty() || cfg.snrs_db.empty())
    throw std::invalid_argument("run_experiment: nothing to run");
  if (cfg.info_len <= 0 || cfg.repetition < 2 || cfg.frames <= 0)
    throw std::invalid_argument("run_experiment: invalid size parameters");
  const int bps = bits_per_symbol(cfg.mod);
  if ((cfg.info_len * cfg.repetition) % bps != 0)
    throw std::invalid_argument("run_experiment: coded length not a whole "
                                "number of symbols");
  data_len = cfg.info_len * cfg.repetition / bps;
  if (cfg.pilot_interval <= 0 || data_len % cfg.pilot_interval != 0)
    throw std::invalid_argument("run_experiment: pilot interval must divide "
                                "the data length");
  if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0 || !(cfg.var_a > 0.0) ||
      !(cfg.var_b > 0.0))
    throw std::invalid_argument("run_experiment: invalid channel parameters");
  if (cfg.clarke_doppler < 0.0 || cfg.clarke_doppler >= 0.5)
    throw std::invalid_argument("run_experiment: invalid doppler");
  if (cfg.em_iters < 0 || cfg.ncd1 < 1 || cfg.ncd2 < 1 ||
      cfg.pic_exchanges < 1 || cfg.inner_em_per_bp < 1 || cfg.threads < 0)
    throw std::invalid_argument("run_experiment: invalid iteration counts");
}

double mse_vs_truth(const ChannelEstimate& est, const ChannelTrace& trace) {
  double acc = 0.0;
  for (std::size_t i = 0; i < trace.h_a.size(); ++i)
    acc += std::norm(est.h_a[i] - trace.h_a[i]) +
           std::norm(est.h_b[i] - trace.h_b[i]);
  return acc / (2.0 * trace.h_a.size());
}

void run_frame(const ExperimentConfig& cfg, const FrameLayout& layout,
               std::uint64_t f, std::vector<PerRun>& out) {
  const std::uint64_t iseed = derive_stream(cfg.master_seed, f, kSaltInterleaver)();
  const CodeConfig code{cfg.info_len, cfg.repetition, iseed};
  auto rng_bits = derive_stream(cfg.master_seed, f, kSaltBits);
  std::vector<std::uint8_t> bits_a(cfg.info_len), bits_b(cfg.info_len);
  std::vector<std::uint8_t> xor_true(cfg.info_len);
  for (int j = 0; j < cfg.info_len; ++j) {
    bits_a[j] = static_cast<std::uint8_t>(rng_bits() & 1);
    bits_b[j] = static_cast<std::uint8_t>(rng_bits() & 1);
    xor_true[j] = bits_a[j] ^ bits_b[j];
  }
  const FramePair frame = build_frame_pair(bits_a, bits_b, code, layout, cfg.mod);

  auto rng_chan = derive_stream(cfg.master_seed, f, kSaltChannel);
  std::vector<cplx> h_a, h_b;
  if (cfg.clarke_doppler > 0.0) {
    const ClarkeConfig cc{cfg.clarke_doppler, 64, cfg.var_a, cfg.var_b,
                          layout.total_len};
    gen_clarke(cc, rng_chan, h_a, h_b);
  } else {
    const GaussMarkovConfig gc{cfg.alpha, cfg.var_a, cfg.var_b, layout.total_len};
    gen_gauss_markov(gc, rng_chan, h_a, h_b);
  }
  auto rng_noise = derive_stream(cfg.master_seed, f, kSaltNoise);
  const std::vector<cplx> unit_noise = gen_unit_noise(layout.total_len, rng_noise);

  const ChannelPrior prior{cfg.alpha, cfg.var_a, cfg.var_b};
  const DecoderConfig dcfg{cfg.info_len, cfg.repetition, iseed};

  const std::size_t n_snr = cfg.snrs_db.size();
  for (std::size_t si = 0; si < n_snr; ++si) {
    const double n0 = std::pow(10.0, -cfg.snrs_db[si] / 10.0);
    ChannelTrace trace;
    trace.h_a = h_a;
    trace.h_b = h_b;
    trace.n0 = n0;
    trace.noise.resize(unit_noise.size());
    const double scale = std::sqrt(n0);
    for (std::size_t i = 0; i < unit_noise.size(); ++i)
      trace.noise[i] = scale * unit_noise[i];
    const std::vector<cplx> y = transmit(frame, trace);

    for (std::size_t sc = 0; sc < cfg.schemes.size(); ++sc) {
      ReceiverConfig rcfg;
      rcfg.scheme = cfg.schemes[sc];
      rcfg.em_iters = cfg.em_iters;
      rcfg.ncd1 = cfg.ncd1;
      rcfg.ncd2 = cfg.ncd2;
      rcfg.pic_exchanges = cfg.pic_exchanges;
      rcfg.inner_em_per_bp = cfg.inner_em_per_bp;
      rcfg.early_stop_delta = cfg.early_stop_delta;

      const auto t0 = std::chrono::steady_clock::now();
      const ReceiverReport rep =
          run_receiver(y, layout, cfg.mod, dcfg, prior, n0, rcfg, &trace);
      const auto t1 = std::chrono::steady_clock::now();

      const int n_iter = expected_iters(rcfg.scheme, cfg.em_iters);
      PerRun& pr = out[sc * n_snr + si];
      pr.ber.assign(n_iter, 0.0);
      pr.mse.assign(n_iter, 0.0);
      pr.seconds = std::chrono::duration<double>(t1 - t0).count();
      for (int k = 0; k < n_iter; ++k) {
        // Early stopping can leave fewer entries; carry the last one forward.
        const auto& xorbits =
            rep.xor_per_iter[std::min<std::size_t>(k, rep.xor_per_iter.size() - 1)];
        const auto& est =
            rep.estimates[std::min<std::size_t>(k, rep.estimates.size() - 1)];
        int errors = 0;
        for (int j = 0; j < cfg.info_len; ++j) errors += xorbits[j] != xor_true[j];
        pr.ber[k] = static_cast<double>(errors) / cfg.info_len;
        pr.mse[k] = mse_vs_truth(est, trace);
      }
    }
  }
}

}  // namespace

std::vector<MetricRow> run_experiment(const ExperimentConfig& cfg) {
  int data_len = 0;
  validate(cfg, data_len);
  const FrameLayout layout = FrameLayout::make(data_len, cfg.pilot_interval);

  const std::size_t runs_per_frame = cfg.schemes.size() * cfg.snrs_db.size();
  std::vector<std::vector<PerRun>> results(
      cfg.frames, std::vector<PerRun>(runs_per_frame));

  int n_threads = cfg.threads;
  if (n_threads == 0)
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, cfg.frames));

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int f = next.fetch_add(1);
      if (f >= cfg.frames) return;
      try {
        run_frame(cfg, layout, static_cast<std::uint64_t>(f), results[f]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<MetricRow> rows;
  for (std::size_t sc = 0; sc < cfg.schemes.size(); ++sc) {
    const int n_iter = expected_iters(cfg.schemes[sc], cfg.em_iters);
    for (std::size_t si = 0; si < cfg.snrs_db.size(); ++si) {
      std::vector<double> ber(n_iter, 0.0), mse(n_iter, 0.0);
      double seconds = 0.0;
      for (int f = 0; f < cfg.frames; ++f) {
        const PerRun& pr = results[f][sc * cfg.snrs_db.size() + si];
        for (int k = 0; k < n_iter; ++k) {
          ber[k] += pr.ber[k];
          mse[k] += pr.mse[k];
        }
        seconds += pr.seconds;
      }
      for (int k = 0; k < n_iter; ++k) {
        MetricRow row;
        row.scheme = scheme_name(cfg.schemes[sc]);
        row.snr_db = cfg.snrs_db[si];
        row.iteration = k;
        row.ber = ber[k] / cfg.frames;
        row.mse = mse[k] / cfg.frames;
        row.frames = cfg.frames;
        row.seconds = seconds;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void emit_csv(const std::vector<MetricRow>& rows, std::ostream& os) {
  os << "scheme,snr_db,iteration,ber,mse,frames,seconds\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.6g,%d,%.6g,%.6g,%d,%.6g\n",
                  r.scheme.c_str(), r.snr_db, r.iteration, r.ber, r.mse,
                  r.frames, r.seconds);
    os << buf;
  }
}

void write_csv(const std::vector<MetricRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  emit_csv(rows, os);
  if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

void write_gnuplot_script(const std::vector<MetricRow>& rows,
                          const std::string& csv_path,
                          const std::string& script_path) {
  // Final-iteration rows per scheme, preserving first-seen scheme order.
  std::vector<std::pair<std::string, int>> schemes;
  for (const auto& r : rows) {
    bool found = false;
    for (auto& [name, last] : schemes)
      if (name == r.scheme) {
        last = std::max(last, r.iteration);
        found = true;
      }
    if (!found) schemes.emplace_back(r.scheme, r.iteration);
  }
  std::ofstream os(script_path);
  if (!os) throw std::runtime_error("write_gnuplot_script: cannot open " +
                                    script_path);
  os << "set datafile separator ','\n"
     << "set logscale y\n"
     << "set grid\n"
     << "set xlabel 'symbol SNR (dB)'\n"
     << "set ylabel 'network-coded BER'\n"
     << "set key outside\n"
     << "plot \\\n";
  for (std::size_t i = 0; i < schemes.size(); ++i) {
    os << "  '" << csv_path << "' using (strcol(1) eq \"" << schemes[i].first
       << "\" && $3 == " << schemes[i].second
       << " ? $2 : 1/0):4 with linespoints title '" << schemes[i].first << "'";
    os << (i + 1 < schemes.size() ? ", \\\n" : "\n");
  }
}

}  // namespace pnc
