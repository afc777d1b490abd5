#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/numerics.hpp"
#include "core/txchain.hpp"

namespace pnc {

// Probability table over the joint symbol-pair alphabet (x_A, x_B) at one
// frame position. Data positions carry an N_m^2 table indexed ia*N_m+ib over
// constellation indices; pilot positions are a point mass on the known pair.
struct PairAPP {
  Modulation mod = Modulation::BPSK;
  bool is_pilot = false;
  cplx pilot_xa{}, pilot_xb{};
  std::array<double, 16> p{};

  int table_size() const {
    const int nm = constellation_size(mod);
    return is_pilot ? 1 : nm * nm;
  }
  cplx point_a(int idx) const {
    return is_pilot ? pilot_xa
                    : constellation_point(mod, idx / constellation_size(mod));
  }
  cplx point_b(int idx) const {
    return is_pilot ? pilot_xb
                    : constellation_point(mod, idx % constellation_size(mod));
  }
  double prob(int idx) const { return is_pilot ? 1.0 : p[idx]; }
  void normalize();
};

// Joint source-bit table over (s_A, s_B), indexed s_A + 2*s_B.
struct BitPairAPP {
  std::array<double, 4> p{};
  void normalize();
};

// Graph/code parameters for the BP decoder. Unlike CodeConfig, repetition 1
// (plain accumulator chain, cycle-free graph) is allowed here; it is the
// exactness reference for the sum-product tests.
struct DecoderConfig {
  int info_len = 0;
  int repetition = 3;
  std::uint64_t interleaver_seed = 0;
};

// Message arrays for one RA factor graph over an S-ary XOR alphabet.
// S = 4 clusters the two users' coded bits into one node; S = 2 is the
// single-user decoder used by the PIC/SIC paths. Reusable across decodes.
class DecoderWorkspace {
 public:
  DecoderWorkspace(const DecoderConfig& cfg, Modulation mod, int num_users);

  int coded_len() const { return n_; }
  int info_len() const { return cfg_.info_len; }
  int states() const { return states_; }
  int units_per_symbol() const { return units_per_symbol_; }
  int num_symbols() const { return n_ / units_per_symbol_; }

  // Sum-product flooding over the graph. likelihoods[d] is the table for data
  // symbol d: S^units_per_symbol entries, unit-state-major
  // (index u0*S^(U-1) + u1 for U=2).
  void run(const std::vector<std::array<double, 16>>& likelihoods, int n_iters);

  // Posterior and extrinsic tables for data symbol d, over the same index
  // space as the input likelihood table.
  void symbol_app(int d, std::array<double, 16>& out) const;
  void symbol_extrinsic(int d, std::array<double, 16>& out) const;
  // Posterior of info bit j: S entries (pair states for S=4, bits for S=2).
  void info_app(int j, std::array<double, 4>& out) const;

 private:
  void variable_pass();
  void check_pass();
  void unit_graph_belief(int k, double* out) const;

  DecoderConfig cfg_;
  int n_ = 0;
  int states_ = 4;
  int units_per_symbol_ = 1;
  std::vector<int> info_of_check_;            // info bit index per check k
  std::vector<std::vector<int>> checks_of_info_;

  using Msg = std::array<double, 4>;
  std::vector<Msg> chk_fwd_;   // check k -> c_k
  std::vector<Msg> chk_bwd_;   // check k+1 -> c_k
  std::vector<Msg> chk_info_;  // check k -> u_{j(k)}
  std::vector<Msg> lik_msg_;   // symbol factor -> c_k
  std::vector<Msg> v_cur_, v_prev_, v_info_;
  const std::vector<std::array<double, 16>>* lik_ = nullptr;
};

// Likelihood tables for every frame position given channel estimates:
// data position i gets exp(-|y_i - h_i^T x_i|^2 / N0) over the pair alphabet,
// pilot positions a point mass on the configured pilot pair.
std::vector<PairAPP> init_symbol_likelihoods(const std::vector<cplx>& y,
                                             const std::vector<cplx>& h_a,
                                             const std::vector<cplx>& h_b,
                                             double n0, const FrameLayout& layout,
                                             Modulation mod);

struct DecodeResult {
  std::vector<PairAPP> pair_apps;   // size L, pilots as point masses
  std::vector<PairAPP> extrinsic;   // size L, graph-side tables at data positions
  std::vector<BitPairAPP> bit_apps; // size info_len
};

DecodeResult bp_decode(DecoderWorkspace& ws,
                       const std::vector<PairAPP>& likelihoods,
                       const FrameLayout& layout, int n_iters);

// Network-coded decisions: argmax_s sum_{sA^sB=s} p(sA,sB), ties toward 0.
std::vector<std::uint8_t> xor_reduce(const std::vector<BitPairAPP>& bit_apps);

struct SingleUserResult {
  std::vector<std::array<double, 4>> sym_apps;  // per data symbol, N_m entries
  std::vector<std::array<double, 2>> bit_apps;  // per info bit
};

struct MultiUserResult {
  SingleUserResult a, b;
  std::vector<PairAPP> pair_apps;       // product-of-marginals joint tables
  std::vector<BitPairAPP> bit_pair_apps;
};

// Two single-user decoders exchanging soft interference estimates
// `exchanges` times; each decoder sees the other user's posterior mean
// subtracted and its residual variance folded into the noise.
MultiUserResult pic_decode(const std::vector<cplx>& y, const std::vector<cplx>& h_a,
                           const std::vector<cplx>& h_b, double n0,
                           const FrameLayout& layout, const DecoderConfig& cfg,
                           Modulation mod, int n_iters, int exchanges);

// MMSE successive cancelation: linear-MMSE soft estimate of the stronger user
// subtracted, weaker user decoded, its reconstruction subtracted, stronger
// user decoded. Ordering by frame-averaged |h|.
MultiUserResult sic_decode(const std::vector<cplx>& y, const std::vector<cplx>& h_a,
                           const std::vector<cplx>& h_b, double n0,
                           const FrameLayout& layout, const DecoderConfig& cfg,
                           Modulation mod, int n_iters);

}  // namespace pnc
