#include "core/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pnc {

namespace {

cplx draw_cn(double var, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

}  // namespace

std::vector<cplx> gen_gauss_markov_stream(double alpha, double var, int length,
                                          std::mt19937_64& rng) {
  if (!(alpha > 0.0) || alpha > 1.0 || !(var > 0.0) || length <= 0)
    throw std::invalid_argument("gen_gauss_markov: invalid config");
  std::vector<cplx> h(length);
  h[0] = draw_cn(var, rng);
  const double fade = std::sqrt(1.0 - alpha * alpha);
  for (int i = 1; i < length; ++i) h[i] = alpha * h[i - 1] + fade * draw_cn(var, rng);
  return h;
}

void gen_gauss_markov(const GaussMarkovConfig& cfg, std::mt19937_64& rng,
                      std::vector<cplx>& h_a, std::vector<cplx>& h_b) {
  h_a = gen_gauss_markov_stream(cfg.alpha, cfg.var_a, cfg.length, rng);
  h_b = gen_gauss_markov_stream(cfg.alpha, cfg.var_b, cfg.length, rng);
}

std::vector<cplx> gen_clarke_stream(double normalized_doppler, int num_scatterers,
                                    double var, int length, std::mt19937_64& rng) {
  if (!(normalized_doppler > 0.0) || normalized_doppler >= 0.5 ||
      num_scatterers < 8 || !(var > 0.0) || length <= 0)
    throw std::invalid_argument("gen_clarke: invalid config");
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  std::vector<double> omega(num_scatterers), phase(num_scatterers);
  for (int m = 0; m < num_scatterers; ++m) {
    omega[m] = 2.0 * std::numbers::pi * normalized_doppler * std::cos(u(rng));
    phase[m] = u(rng);
  }
  const double amp = std::sqrt(var / num_scatterers);
  std::vector<cplx> h(length);
  for (int i = 0; i < length; ++i) {
    cplx acc = 0.0;
    for (int m = 0; m < num_scatterers; ++m) {
      const double arg = omega[m] * i + phase[m];
      acc += cplx(std::cos(arg), std::sin(arg));
    }
    h[i] = amp * acc;
  }
  return h;
}

void gen_clarke(const ClarkeConfig& cfg, std::mt19937_64& rng,
                std::vector<cplx>& h_a, std::vector<cplx>& h_b) {
  h_a = gen_clarke_stream(cfg.normalized_doppler, cfg.num_scatterers, cfg.var_a,
                          cfg.length, rng);
  h_b = gen_clarke_stream(cfg.normalized_doppler, cfg.num_scatterers, cfg.var_b,
                          cfg.length, rng);
}

std::vector<cplx> gen_unit_noise(int length, std::mt19937_64& rng) {
  std::vector<cplx> n(length);
  for (auto& z : n) z = draw_cn(1.0, rng);
  return n;
}

std::vector<cplx> transmit(const FramePair& frame, const ChannelTrace& trace) {
  const std::size_t len = frame.symbols_a.size();
  if (trace.h_a.size() != len || trace.h_b.size() != len || trace.noise.size() != len)
    throw std::invalid_argument("transmit: frame/trace length mismatch");
  std::vector<cplx> y(len);
  for (std::size_t i = 0; i < len; ++i)
    y[i] = trace.h_a[i] * frame.symbols_a[i] + trace.h_b[i] * frame.symbols_b[i] +
           trace.noise[i];
  return y;
}

}  // namespace pnc
