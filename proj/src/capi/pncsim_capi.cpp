#include "pncsim.h"

#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/harness.hpp"

struct pnc_experiment {
  pnc::ExperimentConfig cfg;
  std::vector<pnc::MetricRow> rows;
  std::string error;
  bool ran = false;
};

namespace {

int fail(pnc_experiment* e, int code, const std::string& msg) {
  e->error = msg;
  return code;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, int& out) {
  try {
    std::size_t pos = 0;
    out = std::stoi(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

int set_one(pnc_experiment* e, const std::string& key, const std::string& value) {
  auto& cfg = e->cfg;
  if (key == "scheme") {
    std::vector<pnc::Scheme> schemes;
    for (const auto& name : split(value, ',')) {
      pnc::Scheme s;
      if (!pnc::parse_scheme(name, s))
        return fail(e, PNC_EINVAL, "unknown scheme: " + name);
      schemes.push_back(s);
    }
    if (schemes.empty()) return fail(e, PNC_EINVAL, "scheme: empty list");
    cfg.schemes = schemes;
    return PNC_OK;
  }
  if (key == "snr") {
    std::vector<double> snrs;
    for (const auto& tok : split(value, ',')) {
      double v;
      if (!parse_double(tok, v)) return fail(e, PNC_EINVAL, "snr: bad value " + tok);
      snrs.push_back(v);
    }
    if (snrs.empty()) return fail(e, PNC_EINVAL, "snr: empty list");
    cfg.snrs_db = snrs;
    return PNC_OK;
  }
  if (key == "snr_sweep") {
    const auto parts = split(value, ':');
    double lo, hi, step;
    if (parts.size() != 3 || !parse_double(parts[0], lo) ||
        !parse_double(parts[1], hi) || !parse_double(parts[2], step) ||
        !(step > 0.0) || hi < lo)
      return fail(e, PNC_EINVAL, "snr_sweep: expected lo:hi:step with step > 0");
    std::vector<double> snrs;
    for (double v = lo; v <= hi + 1e-9; v += step) snrs.push_back(v);
    cfg.snrs_db = snrs;
    return PNC_OK;
  }
  if (key == "mod") {
    if (value == "bpsk") cfg.mod = pnc::Modulation::BPSK;
    else if (value == "qpsk") cfg.mod = pnc::Modulation::QPSK;
    else return fail(e, PNC_EINVAL, "mod: expected bpsk or qpsk");
    return PNC_OK;
  }
  int iv;
  double dv;
  if (key == "info_len" && parse_int(value, iv)) { cfg.info_len = iv; return PNC_OK; }
  if (key == "repetition" && parse_int(value, iv)) { cfg.repetition = iv; return PNC_OK; }
  if (key == "delta" && parse_int(value, iv)) { cfg.pilot_interval = iv; return PNC_OK; }
  if (key == "alpha" && parse_double(value, dv)) { cfg.alpha = dv; return PNC_OK; }
  if (key == "var_a" && parse_double(value, dv)) { cfg.var_a = dv; return PNC_OK; }
  if (key == "var_b" && parse_double(value, dv)) { cfg.var_b = dv; return PNC_OK; }
  if (key == "clarke_doppler" && parse_double(value, dv)) {
    cfg.clarke_doppler = dv;
    return PNC_OK;
  }
  if (key == "em_iters" && parse_int(value, iv)) { cfg.em_iters = iv; return PNC_OK; }
  if (key == "ncd1" && parse_int(value, iv)) { cfg.ncd1 = iv; return PNC_OK; }
  if (key == "ncd2" && parse_int(value, iv)) { cfg.ncd2 = iv; return PNC_OK; }
  if (key == "pic_exchanges" && parse_int(value, iv)) {
    cfg.pic_exchanges = iv;
    return PNC_OK;
  }
  if (key == "inner_em" && parse_int(value, iv)) {
    cfg.inner_em_per_bp = iv;
    return PNC_OK;
  }
  if (key == "early_stop" && parse_double(value, dv)) {
    cfg.early_stop_delta = dv;
    return PNC_OK;
  }
  if (key == "frames" && parse_int(value, iv)) { cfg.frames = iv; return PNC_OK; }
  if (key == "seed") {
    try {
      std::size_t pos = 0;
      cfg.master_seed = std::stoull(value, &pos);
      if (pos != value.size()) return fail(e, PNC_EINVAL, "seed: bad value");
      return PNC_OK;
    } catch (...) {
      return fail(e, PNC_EINVAL, "seed: bad value");
    }
  }
  if (key == "threads" && parse_int(value, iv)) { cfg.threads = iv; return PNC_OK; }
  return fail(e, PNC_EINVAL, "unknown key or bad value: " + key + "=" + value);
}

}  // namespace

extern "C" {

const char* pnc_version(void) { return "1.0.0"; }

pnc_experiment* pnc_experiment_new(void) {
  try {
    return new pnc_experiment;
  } catch (...) {
    return nullptr;
  }
}

void pnc_experiment_free(pnc_experiment* e) { delete e; }

int pnc_experiment_set(pnc_experiment* e, const char* key, const char* value) {
  if (e == nullptr) return PNC_EINVAL;
  if (key == nullptr || value == nullptr)
    return fail(e, PNC_EINVAL, "null key or value");
  return set_one(e, key, value);
}

int pnc_experiment_run(pnc_experiment* e) {
  if (e == nullptr) return PNC_EINVAL;
  try {
    e->rows = pnc::run_experiment(e->cfg);
    e->ran = true;
    return PNC_OK;
  } catch (const std::invalid_argument& ex) {
    e->ran = false;
    return fail(e, PNC_EINVAL, ex.what());
  } catch (const std::exception& ex) {
    e->ran = false;
    return fail(e, PNC_ERUNTIME, ex.what());
  }
}

size_t pnc_experiment_row_count(const pnc_experiment* e) {
  return e == nullptr ? 0 : e->rows.size();
}

int pnc_experiment_row(const pnc_experiment* e, size_t index,
                       pnc_metric_row* out) {
  if (e == nullptr || out == nullptr) return PNC_EINVAL;
  if (index >= e->rows.size())
    return fail(const_cast<pnc_experiment*>(e), PNC_EINVAL,
                "row index out of range");
  const pnc::MetricRow& r = e->rows[index];
  std::snprintf(out->scheme, sizeof(out->scheme), "%s", r.scheme.c_str());
  out->snr_db = r.snr_db;
  out->iteration = r.iteration;
  out->ber = r.ber;
  out->mse = r.mse;
  out->frames = r.frames;
  out->seconds = r.seconds;
  return PNC_OK;
}

int pnc_experiment_write_csv(const pnc_experiment* e, const char* path) {
  if (e == nullptr) return PNC_EINVAL;
  auto* me = const_cast<pnc_experiment*>(e);
  if (path == nullptr) return fail(me, PNC_EINVAL, "null path");
  if (!e->ran) return fail(me, PNC_EINVAL, "experiment has not been run");
  try {
    pnc::write_csv(e->rows, path);
    return PNC_OK;
  } catch (const std::exception& ex) {
    return fail(me, PNC_EIO, ex.what());
  }
}

int pnc_experiment_write_gnuplot(const pnc_experiment* e, const char* csv_path,
                                 const char* script_path) {
  if (e == nullptr) return PNC_EINVAL;
  auto* me = const_cast<pnc_experiment*>(e);
  if (csv_path == nullptr || script_path == nullptr)
    return fail(me, PNC_EINVAL, "null path");
  if (!e->ran) return fail(me, PNC_EINVAL, "experiment has not been run");
  try {
    pnc::write_gnuplot_script(e->rows, csv_path, script_path);
    return PNC_OK;
  } catch (const std::exception& ex) {
    return fail(me, PNC_EIO, ex.what());
  }
}

const char* pnc_experiment_error(const pnc_experiment* e) {
  return e == nullptr ? "" : e->error.c_str();
}

}  // extern "C"
