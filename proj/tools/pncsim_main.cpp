// Command-line front end. Talks to the engine exclusively through the
// C interface in pncsim.h.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pncsim.h"

namespace {

struct Guard {
  pnc_experiment* e;
  ~Guard() { pnc_experiment_free(e); }
};

int apply(pnc_experiment* e, const std::string& key, const std::string& value) {
  const int rc = pnc_experiment_set(e, key.c_str(), value.c_str());
  if (rc != PNC_OK)
    std::cerr << "pncsim: " << pnc_experiment_error(e) << "\n";
  return rc;
}

int apply_config_file(pnc_experiment* e, const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "pncsim: cannot open config file " << path << "\n";
    return PNC_EIO;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "pncsim: " << path << ":" << lineno << ": expected key=value\n";
      return PNC_EINVAL;
    }
    if (apply(e, line.substr(0, eq), line.substr(eq + 1)) != PNC_OK)
      return PNC_EINVAL;
  }
  return PNC_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-user fading-relay receiver simulation"};
  app.set_version_flag("--version", pnc_version());

  std::string config_path, out_path, gnuplot_path;
  // Flag values are forwarded verbatim to the engine's key/value interface.
  std::map<std::string, std::string> kv = {
      {"scheme", "em_bp"}, {"snr", "10"},     {"mod", "bpsk"},
      {"info_len", "512"}, {"delta", "16"},   {"repetition", "3"},
      {"alpha", "0.99"},   {"em_iters", "5"}, {"ncd1", "6"},
      {"ncd2", "6"},       {"pic_exchanges", "2"}, {"inner_em", "1"},
      {"frames", "100"},   {"seed", "1"},     {"threads", "0"},
  };
  std::string snr_sweep, clarke, var_a, var_b, early_stop;

  app.add_option("--config", config_path,
                 "key=value file applied before the flags");
  app.add_option("--scheme", kv["scheme"],
                 "comma-separated receiver list (em_bp, sage_bp, sage_bp_pic, "
                 "em_sic, multi_em_single_bp, mmse_only, full_csi)");
  app.add_option("--snr", kv["snr"], "comma-separated symbol SNR values in dB");
  app.add_option("--snr-sweep", snr_sweep, "SNR grid lo:hi:step in dB");
  app.add_option("--mod", kv["mod"], "bpsk or qpsk");
  app.add_option("--info-len", kv["info_len"], "source bits per frame");
  app.add_option("--delta", kv["delta"], "data symbols between pilot blocks");
  app.add_option("--repetition", kv["repetition"], "code repetition factor");
  app.add_option("--alpha", kv["alpha"], "fading memory of the channel prior");
  app.add_option("--var-a", var_a, "channel variance, terminal A");
  app.add_option("--var-b", var_b, "channel variance, terminal B");
  app.add_option("--clarke-doppler", clarke,
                 "normalized Doppler; > 0 simulates Clarke fading");
  app.add_option("--em-iters", kv["em_iters"], "estimation iterations");
  app.add_option("--ncd1", kv["ncd1"],
                 "decoder iterations inside each estimation step");
  app.add_option("--ncd2", kv["ncd2"], "decoder iterations of the final decode");
  app.add_option("--pic-exchanges", kv["pic_exchanges"],
                 "soft interference exchanges, sage_bp_pic");
  app.add_option("--inner-em", kv["inner_em"],
                 "estimation steps per decode, multi_em_single_bp");
  app.add_option("--early-stop", early_stop,
                 "stop estimating when the mean squared estimate change "
                 "drops below this value");
  app.add_option("--frames", kv["frames"], "Monte-Carlo frames");
  app.add_option("--seed", kv["seed"], "master seed");
  app.add_option("--threads", kv["threads"], "worker threads, 0 = all cores");
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_option("--gnuplot-script", gnuplot_path,
                 "also write a gnuplot script (needs --out)");

  CLI11_PARSE(app, argc, argv);

  if (!gnuplot_path.empty() && out_path.empty()) {
    std::cerr << "pncsim: --gnuplot-script needs --out\n";
    return 1;
  }

  pnc_experiment* e = pnc_experiment_new();
  if (e == nullptr) {
    std::cerr << "pncsim: out of memory\n";
    return 1;
  }
  Guard guard{e};

  if (!config_path.empty() && apply_config_file(e, config_path) != PNC_OK)
    return 1;
  for (const auto& [key, value] : kv)
    if (apply(e, key, value) != PNC_OK) return 1;
  if (!snr_sweep.empty() && apply(e, "snr_sweep", snr_sweep) != PNC_OK) return 1;
  if (!var_a.empty() && apply(e, "var_a", var_a) != PNC_OK) return 1;
  if (!var_b.empty() && apply(e, "var_b", var_b) != PNC_OK) return 1;
  if (!clarke.empty() && apply(e, "clarke_doppler", clarke) != PNC_OK) return 1;
  if (!early_stop.empty() && apply(e, "early_stop", early_stop) != PNC_OK)
    return 1;

  {
    const double rep = std::stod(kv["repetition"]);
    const double bps = kv["mod"] == "qpsk" ? 2.0 : 1.0;
    std::cerr << "pncsim: symbol SNR in dB; Eb/N0 = SNR + "
              << 10.0 * std::log10(rep / bps) << " dB at repetition "
              << kv["repetition"] << ", " << kv["mod"] << "\n";
  }

  if (pnc_experiment_run(e) != PNC_OK) {
    std::cerr << "pncsim: " << pnc_experiment_error(e) << "\n";
    return 1;
  }

  if (out_path.empty()) {
    std::printf("scheme,snr_db,iteration,ber,mse,frames,seconds\n");
    pnc_metric_row row;
    for (size_t i = 0; i < pnc_experiment_row_count(e); ++i) {
      if (pnc_experiment_row(e, i, &row) != PNC_OK) return 1;
      std::printf("%s,%.6g,%d,%.6g,%.6g,%d,%.6g\n", row.scheme, row.snr_db,
                  row.iteration, row.ber, row.mse, row.frames, row.seconds);
    }
  } else if (pnc_experiment_write_csv(e, out_path.c_str()) != PNC_OK) {
    std::cerr << "pncsim: " << pnc_experiment_error(e) << "\n";
    return 1;
  }
  if (!gnuplot_path.empty() &&
      pnc_experiment_write_gnuplot(e, out_path.c_str(), gnuplot_path.c_str()) !=
          PNC_OK) {
    std::cerr << "pncsim: " << pnc_experiment_error(e) << "\n";
    return 1;
  }
  return 0;
}
