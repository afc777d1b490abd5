#pragma once

#include <random>
#include <vector>

#include "core/numerics.hpp"
#include "core/txchain.hpp"

namespace pnc {

// First-order Gauss-Markov fading: h_i = alpha*h_{i-1} + sqrt(1-alpha^2)*z_i,
// z_i ~ CN(0, var). Stationary with per-tap variance var.
struct GaussMarkovConfig {
  double alpha = 0.99;
  double var_a = 1.0;
  double var_b = 1.0;
  int length = 0;
};

// Clarke's model, sum-of-sinusoids with uniform arrival angles and phases.
struct ClarkeConfig {
  double normalized_doppler = 0.005;  // f_d * T_s
  int num_scatterers = 64;
  double var_a = 1.0;
  double var_b = 1.0;
  int length = 0;
};

struct ChannelTrace {
  std::vector<cplx> h_a, h_b;
  std::vector<cplx> noise;  // already scaled to variance n0
  double n0 = 0.0;
};

std::vector<cplx> gen_gauss_markov_stream(double alpha, double var, int length,
                                          std::mt19937_64& rng);
void gen_gauss_markov(const GaussMarkovConfig& cfg, std::mt19937_64& rng,
                      std::vector<cplx>& h_a, std::vector<cplx>& h_b);

std::vector<cplx> gen_clarke_stream(double normalized_doppler, int num_scatterers,
                                    double var, int length, std::mt19937_64& rng);
void gen_clarke(const ClarkeConfig& cfg, std::mt19937_64& rng,
                std::vector<cplx>& h_a, std::vector<cplx>& h_b);

// Unit-variance CN(0,1) noise; the harness scales by sqrt(N0) per SNR point so
// one realization is replayed across receivers and SNRs.
std::vector<cplx> gen_unit_noise(int length, std::mt19937_64& rng);

// y_i = h_{A,i} x_{A,i} + h_{B,i} x_{B,i} + n_i
std::vector<cplx> transmit(const FramePair& frame, const ChannelTrace& trace);

}  // namespace pnc
