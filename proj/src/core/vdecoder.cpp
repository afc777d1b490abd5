#include "core/vdecoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pnc {

namespace {

constexpr double kProbFloor = 1e-300;

void normalize_table(double* p, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += p[i];
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    for (int i = 0; i < n; ++i) p[i] = 1.0 / n;
    return;
  }
  for (int i = 0; i < n; ++i) p[i] = std::max(p[i] / sum, kProbFloor);
}

// Convolution over the XOR group on {0..S-1}: out[q] = sum_r a[r] b[q^r].
void xor_conv(const double* a, const double* b, double* out, int s) {
  for (int q = 0; q < s; ++q) {
    double acc = 0.0;
    for (int r = 0; r < s; ++r) acc += a[r] * b[q ^ r];
    out[q] = acc;
  }
}

void pointwise(const double* a, const double* b, double* out, int s) {
  for (int q = 0; q < s; ++q) out[q] = a[q] * b[q];
}

}  // namespace

void PairAPP::normalize() {
  if (is_pilot) return;
  const int nm = constellation_size(mod);
  normalize_table(p.data(), nm * nm);
}

void BitPairAPP::normalize() { normalize_table(p.data(), 4); }

DecoderWorkspace::DecoderWorkspace(const DecoderConfig& cfg, Modulation mod,
                                   int num_users)
    : cfg_(cfg) {
  if (cfg.info_len <= 0 || cfg.repetition < 1)
    throw std::invalid_argument("DecoderWorkspace: invalid code config");
  if (num_users != 1 && num_users != 2)
    throw std::invalid_argument("DecoderWorkspace: 1 or 2 users");
  n_ = cfg.info_len * cfg.repetition;
  states_ = num_users == 2 ? 4 : 2;
  units_per_symbol_ = bits_per_symbol(mod);
  if (n_ % units_per_symbol_ != 0)
    throw std::invalid_argument("DecoderWorkspace: odd coded length for QPSK");

  const auto perm = make_permutation(n_, cfg.interleaver_seed);
  info_of_check_.resize(n_);
  checks_of_info_.assign(cfg.info_len, {});
  for (int k = 0; k < n_; ++k) {
    info_of_check_[k] = static_cast<int>(perm[k]) / cfg.repetition;
    checks_of_info_[info_of_check_[k]].push_back(k);
  }
  chk_fwd_.resize(n_);
  chk_bwd_.resize(n_);
  chk_info_.resize(n_);
  lik_msg_.resize(n_);
  v_cur_.resize(n_);
  v_prev_.resize(n_);
  v_info_.resize(n_);
}

void DecoderWorkspace::unit_graph_belief(int k, double* out) const {
  pointwise(chk_fwd_[k].data(), chk_bwd_[k].data(), out, states_);
  normalize_table(out, states_);
}

void DecoderWorkspace::variable_pass() {
  const int s = states_;
  if (units_per_symbol_ == 2) {
    // Refresh the symbol-factor messages from the partner unit's graph belief.
    for (int d = 0; d < num_symbols(); ++d) {
      const int k0 = 2 * d, k1 = 2 * d + 1;
      const auto& t = (*lik_)[d];
      double g0[4], g1[4];
      unit_graph_belief(k0, g0);
      unit_graph_belief(k1, g1);
      for (int u0 = 0; u0 < s; ++u0) {
        double acc = 0.0;
        for (int u1 = 0; u1 < s; ++u1) acc += t[u0 * s + u1] * g1[u1];
        lik_msg_[k0][u0] = acc;
      }
      for (int u1 = 0; u1 < s; ++u1) {
        double acc = 0.0;
        for (int u0 = 0; u0 < s; ++u0) acc += t[u0 * s + u1] * g0[u0];
        lik_msg_[k1][u1] = acc;
      }
      normalize_table(lik_msg_[k0].data(), s);
      normalize_table(lik_msg_[k1].data(), s);
    }
  }
  for (int k = 0; k < n_; ++k) {
    pointwise(lik_msg_[k].data(), chk_bwd_[k].data(), v_cur_[k].data(), s);
    normalize_table(v_cur_[k].data(), s);
    if (k + 1 < n_) {
      pointwise(lik_msg_[k].data(), chk_fwd_[k].data(), v_prev_[k + 1].data(), s);
      normalize_table(v_prev_[k + 1].data(), s);
    }
  }
  for (int j = 0; j < cfg_.info_len; ++j) {
    const auto& checks = checks_of_info_[j];
    for (std::size_t c = 0; c < checks.size(); ++c) {
      auto& out = v_info_[checks[c]];
      out.fill(1.0);
      for (std::size_t o = 0; o < checks.size(); ++o) {
        if (o == c) continue;
        pointwise(out.data(), chk_info_[checks[o]].data(), out.data(), s);
      }
      normalize_table(out.data(), s);
    }
  }
}

void DecoderWorkspace::check_pass() {
  const int s = states_;
  // Check 0 has degree 2: c_0 equals its info symbol.
  chk_fwd_[0] = v_info_[0];
  chk_info_[0] = v_cur_[0];
  for (int k = 1; k < n_; ++k) {
    xor_conv(v_prev_[k].data(), v_info_[k].data(), chk_fwd_[k].data(), s);
    xor_conv(v_cur_[k].data(), v_info_[k].data(), chk_bwd_[k - 1].data(), s);
    xor_conv(v_prev_[k].data(), v_cur_[k].data(), chk_info_[k].data(), s);
    normalize_table(chk_fwd_[k].data(), s);
    normalize_table(chk_bwd_[k - 1].data(), s);
    normalize_table(chk_info_[k].data(), s);
  }
}

void DecoderWorkspace::run(const std::vector<std::array<double, 16>>& likelihoods,
                           int n_iters) {
  if (static_cast<int>(likelihoods.size()) != num_symbols())
    throw std::invalid_argument("DecoderWorkspace::run: likelihood count mismatch");
  if (n_iters < 1) throw std::invalid_argument("DecoderWorkspace::run: n_iters >= 1");
  lik_ = &likelihoods;
  const double uni = 1.0 / states_;
  for (int k = 0; k < n_; ++k) {
    chk_fwd_[k].fill(uni);
    chk_bwd_[k].fill(uni);
    chk_info_[k].fill(uni);
    lik_msg_[k].fill(uni);
  }
  if (units_per_symbol_ == 1) {
    for (int k = 0; k < n_; ++k) {
      for (int q = 0; q < states_; ++q) lik_msg_[k][q] = likelihoods[k][q];
      normalize_table(lik_msg_[k].data(), states_);
    }
  }
  for (int it = 0; it < n_iters; ++it) {
    variable_pass();
    check_pass();
  }
  if (units_per_symbol_ == 2) variable_pass();  // final symbol-factor refresh
}

void DecoderWorkspace::symbol_app(int d, std::array<double, 16>& out) const {
  const int s = states_;
  if (units_per_symbol_ == 1) {
    double g[4];
    unit_graph_belief(d, g);
    for (int q = 0; q < s; ++q) out[q] = (*lik_)[d][q] * g[q];
    normalize_table(out.data(), s);
    return;
  }
  double g0[4], g1[4];
  unit_graph_belief(2 * d, g0);
  unit_graph_belief(2 * d + 1, g1);
  const auto& t = (*lik_)[d];
  for (int u0 = 0; u0 < s; ++u0)
    for (int u1 = 0; u1 < s; ++u1) out[u0 * s + u1] = t[u0 * s + u1] * g0[u0] * g1[u1];
  normalize_table(out.data(), s * s);
}

void DecoderWorkspace::symbol_extrinsic(int d, std::array<double, 16>& out) const {
  const int s = states_;
  if (units_per_symbol_ == 1) {
    double g[4];
    unit_graph_belief(d, g);
    for (int q = 0; q < s; ++q) out[q] = g[q];
    return;
  }
  double g0[4], g1[4];
  unit_graph_belief(2 * d, g0);
  unit_graph_belief(2 * d + 1, g1);
  for (int u0 = 0; u0 < s; ++u0)
    for (int u1 = 0; u1 < s; ++u1) out[u0 * s + u1] = g0[u0] * g1[u1];
  normalize_table(out.data(), s * s);
}

void DecoderWorkspace::info_app(int j, std::array<double, 4>& out) const {
  out.fill(1.0);
  for (int k : checks_of_info_[j])
    pointwise(out.data(), chk_info_[k].data(), out.data(), states_);
  normalize_table(out.data(), states_);
}

std::vector<PairAPP> init_symbol_likelihoods(const std::vector<cplx>& y,
                                             const std::vector<cplx>& h_a,
                                             const std::vector<cplx>& h_b,
                                             double n0, const FrameLayout& layout,
                                             Modulation mod) {
  if (!(n0 > 0.0)) throw std::invalid_argument("init_symbol_likelihoods: N0 <= 0");
  const std::size_t len = static_cast<std::size_t>(layout.total_len);
  if (y.size() != len || h_a.size() != len || h_b.size() != len)
    throw std::invalid_argument("init_symbol_likelihoods: length mismatch");
  const int nm = constellation_size(mod);
  std::vector<PairAPP> out(len);
  for (std::size_t p = 0; p < layout.pilot_pos.size(); ++p) {
    auto& t = out[layout.pilot_pos[p]];
    t.mod = mod;
    t.is_pilot = true;
    t.pilot_xa = layout.pilot_a[p % 2];
    t.pilot_xb = layout.pilot_b[p % 2];
  }
  for (int i : layout.data_pos) {
    auto& t = out[i];
    t.mod = mod;
    double dmin = 0.0;
    std::array<double, 16> dist{};
    for (int ia = 0; ia < nm; ++ia)
      for (int ib = 0; ib < nm; ++ib) {
        const cplx r = y[i] - h_a[i] * constellation_point(mod, ia) -
                       h_b[i] * constellation_point(mod, ib);
        const double d = std::norm(r) / n0;
        dist[ia * nm + ib] = d;
        if (ia == 0 && ib == 0) dmin = d;
        dmin = std::min(dmin, d);
      }
    for (int q = 0; q < nm * nm; ++q) t.p[q] = std::exp(dmin - dist[q]);
    t.normalize();
  }
  return out;
}

namespace {

// Engine-table index of a joint pair (ia, ib) for unit u (0 or 1):
// state = A-bit + 2*B-bit of that unit.
inline int pair_state(Modulation mod, int ia, int ib, int unit) {
  if (mod == Modulation::BPSK) return (ia & 1) + 2 * (ib & 1);
  return ((ia >> unit) & 1) + 2 * ((ib >> unit) & 1);
}

std::vector<std::array<double, 16>> pair_tables_for_engine(
    const std::vector<PairAPP>& likelihoods, const FrameLayout& layout,
    Modulation mod) {
  const int nm = constellation_size(mod);
  std::vector<std::array<double, 16>> tabs(layout.data_pos.size());
  for (std::size_t d = 0; d < layout.data_pos.size(); ++d) {
    const auto& t = likelihoods[layout.data_pos[d]];
    for (int ia = 0; ia < nm; ++ia)
      for (int ib = 0; ib < nm; ++ib) {
        if (mod == Modulation::BPSK) {
          tabs[d][pair_state(mod, ia, ib, 0)] = t.p[ia * nm + ib];
        } else {
          const int u0 = pair_state(mod, ia, ib, 0);
          const int u1 = pair_state(mod, ia, ib, 1);
          tabs[d][u0 * 4 + u1] = t.p[ia * nm + ib];
        }
      }
  }
  return tabs;
}

void engine_table_to_pair(const std::array<double, 16>& tab, Modulation mod,
                          PairAPP& out) {
  const int nm = constellation_size(mod);
  out.mod = mod;
  out.is_pilot = false;
  for (int ia = 0; ia < nm; ++ia)
    for (int ib = 0; ib < nm; ++ib) {
      if (mod == Modulation::BPSK) {
        out.p[ia * nm + ib] = tab[pair_state(mod, ia, ib, 0)];
      } else {
        const int u0 = pair_state(mod, ia, ib, 0);
        const int u1 = pair_state(mod, ia, ib, 1);
        out.p[ia * nm + ib] = tab[u0 * 4 + u1];
      }
    }
  out.normalize();
}

}  // namespace

DecodeResult bp_decode(DecoderWorkspace& ws, const std::vector<PairAPP>& likelihoods,
                       const FrameLayout& layout, int n_iters) {
  if (ws.states() != 4)
    throw std::invalid_argument("bp_decode: workspace is not a pair decoder");
  const Modulation mod =
      ws.units_per_symbol() == 2 ? Modulation::QPSK : Modulation::BPSK;
  const auto tabs = pair_tables_for_engine(likelihoods, layout, mod);
  ws.run(tabs, n_iters);

  DecodeResult res;
  res.pair_apps.resize(layout.total_len);
  res.extrinsic.resize(layout.total_len);
  for (std::size_t p = 0; p < layout.pilot_pos.size(); ++p) {
    res.pair_apps[layout.pilot_pos[p]] = likelihoods[layout.pilot_pos[p]];
    res.extrinsic[layout.pilot_pos[p]] = likelihoods[layout.pilot_pos[p]];
  }
  std::array<double, 16> tab;
  for (std::size_t d = 0; d < layout.data_pos.size(); ++d) {
    ws.symbol_app(static_cast<int>(d), tab);
    engine_table_to_pair(tab, mod, res.pair_apps[layout.data_pos[d]]);
    ws.symbol_extrinsic(static_cast<int>(d), tab);
    engine_table_to_pair(tab, mod, res.extrinsic[layout.data_pos[d]]);
  }
  res.bit_apps.resize(ws.info_len());
  std::array<double, 4> bt;
  for (int j = 0; j < ws.info_len(); ++j) {
    ws.info_app(j, bt);
    res.bit_apps[j].p = bt;  // pair state (sA + 2*sB) matches BitPairAPP layout
    res.bit_apps[j].normalize();
  }
  return res;
}

std::vector<std::uint8_t> xor_reduce(const std::vector<BitPairAPP>& bit_apps) {
  std::vector<std::uint8_t> out(bit_apps.size());
  for (std::size_t j = 0; j < bit_apps.size(); ++j) {
    const auto& p = bit_apps[j].p;
    const double p0 = p[0] + p[3];  // (0,0), (1,1)
    const double p1 = p[1] + p[2];  // (1,0), (0,1)
    out[j] = p1 > p0 ? 1 : 0;
  }
  return out;
}

namespace {

struct SoftSymbols {
  std::vector<cplx> mean;
  std::vector<double> var;
};

// Per-data-symbol single-user likelihood tables with the other user's soft
// interference removed and its residual variance folded into the noise.
std::vector<std::array<double, 16>> su_likelihoods(
    const std::vector<cplx>& y, const std::vector<cplx>& h_self,
    const std::vector<cplx>& h_other, const SoftSymbols& other,
    double n0, const FrameLayout& layout, Modulation mod) {
  const int nm = constellation_size(mod);
  std::vector<std::array<double, 16>> tabs(layout.data_pos.size());
  for (std::size_t d = 0; d < layout.data_pos.size(); ++d) {
    const int i = layout.data_pos[d];
    const double nv = n0 + std::norm(h_other[i]) * other.var[d];
    const cplx resid = y[i] - h_other[i] * other.mean[d];
    double dist[4];
    double dmin = 0.0;
    for (int x = 0; x < nm; ++x) {
      dist[x] = std::norm(resid - h_self[i] * constellation_point(mod, x)) / nv;
      if (x == 0) dmin = dist[x];
      dmin = std::min(dmin, dist[x]);
    }
    if (mod == Modulation::BPSK) {
      for (int x = 0; x < nm; ++x) tabs[d][x] = std::exp(dmin - dist[x]);
      normalize_table(tabs[d].data(), nm);
    } else {
      // symbol index x = b0 + 2*b1 -> engine index b0*2 + b1
      for (int x = 0; x < nm; ++x)
        tabs[d][(x & 1) * 2 + (x >> 1)] = std::exp(dmin - dist[x]);
      normalize_table(tabs[d].data(), 4);
    }
  }
  return tabs;
}

SingleUserResult su_extract(DecoderWorkspace& ws, Modulation mod) {
  SingleUserResult res;
  const int nm = constellation_size(mod);
  res.sym_apps.resize(ws.num_symbols());
  std::array<double, 16> tab;
  for (int d = 0; d < ws.num_symbols(); ++d) {
    ws.symbol_app(d, tab);
    if (mod == Modulation::BPSK) {
      res.sym_apps[d] = {tab[0], tab[1], 0.0, 0.0};
    } else {
      for (int x = 0; x < nm; ++x) res.sym_apps[d][x] = tab[(x & 1) * 2 + (x >> 1)];
    }
  }
  res.bit_apps.resize(ws.info_len());
  std::array<double, 4> bt;
  for (int j = 0; j < ws.info_len(); ++j) {
    ws.info_app(j, bt);
    res.bit_apps[j] = {bt[0], bt[1]};
    const double s = bt[0] + bt[1];
    res.bit_apps[j][0] /= s;
    res.bit_apps[j][1] /= s;
  }
  return res;
}

SoftSymbols soft_from_apps(const SingleUserResult& res, Modulation mod) {
  const int nm = constellation_size(mod);
  SoftSymbols s;
  s.mean.resize(res.sym_apps.size());
  s.var.resize(res.sym_apps.size());
  for (std::size_t d = 0; d < res.sym_apps.size(); ++d) {
    cplx m = 0.0;
    for (int x = 0; x < nm; ++x) m += res.sym_apps[d][x] * constellation_point(mod, x);
    s.mean[d] = m;
    s.var[d] = std::max(1.0 - std::norm(m), 0.0);  // unit symbol energy
  }
  return s;
}

MultiUserResult assemble_joint(const SingleUserResult& a, const SingleUserResult& b,
                               const FrameLayout& layout, Modulation mod) {
  MultiUserResult res;
  res.a = a;
  res.b = b;
  const int nm = constellation_size(mod);
  res.pair_apps.resize(layout.total_len);
  for (std::size_t p = 0; p < layout.pilot_pos.size(); ++p) {
    auto& t = res.pair_apps[layout.pilot_pos[p]];
    t.mod = mod;
    t.is_pilot = true;
    t.pilot_xa = layout.pilot_a[p % 2];
    t.pilot_xb = layout.pilot_b[p % 2];
  }
  for (std::size_t d = 0; d < layout.data_pos.size(); ++d) {
    auto& t = res.pair_apps[layout.data_pos[d]];
    t.mod = mod;
    for (int ia = 0; ia < nm; ++ia)
      for (int ib = 0; ib < nm; ++ib)
        t.p[ia * nm + ib] = a.sym_apps[d][ia] * b.sym_apps[d][ib];
    t.normalize();
  }
  res.bit_pair_apps.resize(a.bit_apps.size());
  for (std::size_t j = 0; j < a.bit_apps.size(); ++j) {
    auto& t = res.bit_pair_apps[j];
    for (int sa = 0; sa < 2; ++sa)
      for (int sb = 0; sb < 2; ++sb)
        t.p[sa + 2 * sb] = a.bit_apps[j][sa] * b.bit_apps[j][sb];
    t.normalize();
  }
  return res;
}

}  // namespace

MultiUserResult pic_decode(const std::vector<cplx>& y, const std::vector<cplx>& h_a,
                           const std::vector<cplx>& h_b, double n0,
                           const FrameLayout& layout, const DecoderConfig& cfg,
                           Modulation mod, int n_iters, int exchanges) {
  if (exchanges < 1) throw std::invalid_argument("pic_decode: exchanges >= 1");
  DecoderWorkspace ws_a(cfg, mod, 1), ws_b(cfg, mod, 1);
  const std::size_t nd = layout.data_pos.size();
  SoftSymbols soft_a{std::vector<cplx>(nd, 0.0), std::vector<double>(nd, 1.0)};
  SoftSymbols soft_b = soft_a;
  SingleUserResult res_a, res_b;
  for (int p = 0; p < exchanges; ++p) {
    const auto lik_a = su_likelihoods(y, h_a, h_b, soft_b, n0, layout, mod);
    const auto lik_b = su_likelihoods(y, h_b, h_a, soft_a, n0, layout, mod);
    ws_a.run(lik_a, n_iters);
    ws_b.run(lik_b, n_iters);
    res_a = su_extract(ws_a, mod);
    res_b = su_extract(ws_b, mod);
    soft_a = soft_from_apps(res_a, mod);
    soft_b = soft_from_apps(res_b, mod);
  }
  return assemble_joint(res_a, res_b, layout, mod);
}

MultiUserResult sic_decode(const std::vector<cplx>& y, const std::vector<cplx>& h_a,
                           const std::vector<cplx>& h_b, double n0,
                           const FrameLayout& layout, const DecoderConfig& cfg,
                           Modulation mod, int n_iters) {
  double pow_a = 0.0, pow_b = 0.0;
  for (int i = 0; i < layout.total_len; ++i) {
    pow_a += std::abs(h_a[i]);
    pow_b += std::abs(h_b[i]);
  }
  const bool a_strong = pow_a >= pow_b;
  const auto& h_s = a_strong ? h_a : h_b;
  const auto& h_w = a_strong ? h_b : h_a;

  const std::size_t nd = layout.data_pos.size();
  // Linear-MMSE soft estimate of the stronger user, weaker treated as noise.
  SoftSymbols est_s{std::vector<cplx>(nd), std::vector<double>(nd)};
  for (std::size_t d = 0; d < nd; ++d) {
    const int i = layout.data_pos[d];
    const double denom = std::norm(h_s[i]) + std::norm(h_w[i]) + n0;
    est_s.mean[d] = std::conj(h_s[i]) * y[i] / denom;
    est_s.var[d] = 1.0 - std::norm(h_s[i]) / denom;
  }
  DecoderWorkspace ws_w(cfg, mod, 1), ws_s(cfg, mod, 1);
  ws_w.run(su_likelihoods(y, h_w, h_s, est_s, n0, layout, mod), n_iters);
  auto res_w = su_extract(ws_w, mod);

  const auto soft_w = soft_from_apps(res_w, mod);
  ws_s.run(su_likelihoods(y, h_s, h_w, soft_w, n0, layout, mod), n_iters);
  auto res_s = su_extract(ws_s, mod);

  return a_strong ? assemble_joint(res_s, res_w, layout, mod)
                  : assemble_joint(res_w, res_s, layout, mod);
}

}  // namespace pnc
