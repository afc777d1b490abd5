#include "core/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace pnc {

namespace {

void check_prior(const ChannelPrior& prior) {
  if (!(prior.alpha > 0.0) || prior.alpha > 1.0 || !(prior.var_a > 0.0) ||
      !(prior.var_b > 0.0))
    throw std::invalid_argument("ChannelPrior: invalid parameters");
}

// Solves M s = c columnwise for hermitian M.
CMat2 hermitian_solve_mat(const CMat2& m, const CMat2& c) {
  cplx b0[2] = {c.a00, c.a10}, b1[2] = {c.a01, c.a11};
  cplx x0[2], x1[2];
  cmat2_hermitian_solve(m, b0, x0);
  cmat2_hermitian_solve(m, b1, x1);
  return {x0[0], x1[0], x0[1], x1[1]};
}

CMat2 symmetrize(const CMat2& a) {
  const CMat2 ah = a.adjoint();
  return (a + ah) * 0.5;
}

}  // namespace

PairMoments pair_moments(const PairAPP& app) {
  PairMoments m;
  for (int idx = 0; idx < app.table_size(); ++idx) {
    const double p = app.prob(idx);
    const cplx xa = app.point_a(idx);
    const cplx xb = app.point_b(idx);
    m.ex_a += p * xa;
    m.ex_b += p * xb;
    m.e2_a += p * std::norm(xa);
    m.e2_b += p * std::norm(xb);
    m.cross += p * std::conj(xa) * xb;
  }
  return m;
}

ChannelEstimate mmse_pilot_init(const std::vector<cplx>& y,
                                const FrameLayout& layout,
                                const ChannelPrior& prior, double n0) {
  check_prior(prior);
  if (!(n0 > 0.0)) throw std::invalid_argument("mmse_pilot_init: N0 <= 0");
  if (static_cast<int>(y.size()) != layout.total_len)
    throw std::invalid_argument("mmse_pilot_init: length mismatch");
  const CMat2 q = CMat2::diag(prior.var_a, prior.var_b);
  const CMat2 x{layout.pilot_a[0], layout.pilot_b[0],
                layout.pilot_a[1], layout.pilot_b[1]};
  // Gram matrix of the pilot observation: X Q X^H + N0 I.
  const CMat2 g = x.mul(q).mul(x.adjoint()) + CMat2::identity() * n0;
  const CMat2 qxh = q.mul(x.adjoint());

  ChannelEstimate est;
  est.h_a.assign(layout.total_len, 0.0);
  est.h_b.assign(layout.total_len, 0.0);
  const int blocks = layout.num_blocks();
  const int block_len = layout.pilot_interval + 2;
  for (int b = 0; b < blocks; ++b) {
    const cplx yp[2] = {y[layout.pilot_pos[2 * b]], y[layout.pilot_pos[2 * b + 1]]};
    cplx z[2];
    cmat2_hermitian_solve(g, yp, z);
    const cplx ha = qxh.a00 * z[0] + qxh.a01 * z[1];
    const cplx hb = qxh.a10 * z[0] + qxh.a11 * z[1];
    for (int i = b * block_len; i < (b + 1) * block_len; ++i) {
      est.h_a[i] = ha;
      est.h_b[i] = hb;
    }
  }
  return est;
}

GaussianBelief em_message(const PairAPP& app, cplx y, double n0) {
  if (!(n0 > 0.0)) throw std::invalid_argument("em_message: N0 <= 0");
  const PairMoments m = pair_moments(app);
  const CMat2 w = CMat2{m.e2_a, m.cross, std::conj(m.cross), m.e2_b} * (1.0 / n0);
  const cplx xi[2] = {std::conj(m.ex_a) * y / n0, std::conj(m.ex_b) * y / n0};
  return GaussianBelief::canonical2(xi, w);
}

GaussianBelief sage_message(const PairAPP& app, cplx y, double n0, int user,
                            cplx h_other) {
  if (!(n0 > 0.0)) throw std::invalid_argument("sage_message: N0 <= 0");
  if (user != 0 && user != 1) throw std::invalid_argument("sage_message: user");
  const PairMoments m = pair_moments(app);
  if (user == 0)
    return GaussianBelief::canonical1(
        (std::conj(m.ex_a) * y - m.cross * h_other) / n0, m.e2_a / n0);
  return GaussianBelief::canonical1(
      (std::conj(m.ex_b) * y - std::conj(m.cross) * h_other) / n0, m.e2_b / n0);
}

GaussianBelief gm_predict(const GaussianBelief& in, const ChannelPrior& prior) {
  check_prior(prior);
  if (in.dim() != 2) throw std::invalid_argument("gm_predict: dim 2 expected");
  const double a = prior.alpha;
  if (a >= 1.0) return in;
  const double a2 = a * a, c = 1.0 - a2;
  const CMat2 cinv = CMat2::diag(1.0 / (c * prior.var_a), 1.0 / (c * prior.var_b));
  const CMat2 m = in.W() + cinv * a2;
  const CMat2 s = hermitian_solve_mat(m, cinv);  // M^{-1} C^{-1}
  const CMat2 w = symmetrize(cinv - cinv.mul(s) * a2);
  cplx mx[2];
  cmat2_hermitian_solve(m, in.xi(), mx);
  const cplx xi[2] = {a * cinv.a00 * mx[0], a * cinv.a11 * mx[1]};
  return GaussianBelief::canonical2(xi, w);
}

GaussianBelief gm_retrodict(const GaussianBelief& in, const ChannelPrior& prior) {
  check_prior(prior);
  if (in.dim() != 2) throw std::invalid_argument("gm_retrodict: dim 2 expected");
  const double a = prior.alpha;
  if (a >= 1.0) return in;
  const double a2 = a * a, c = 1.0 - a2;
  const CMat2 cinv = CMat2::diag(1.0 / (c * prior.var_a), 1.0 / (c * prior.var_b));
  const CMat2 m = in.W() + cinv;
  const CMat2 s = hermitian_solve_mat(m, cinv);
  const CMat2 w = symmetrize((cinv - cinv.mul(s)) * a2);
  cplx mx[2];
  cmat2_hermitian_solve(m, in.xi(), mx);
  const cplx xi[2] = {a * cinv.a00 * mx[0], a * cinv.a11 * mx[1]};
  return GaussianBelief::canonical2(xi, w);
}

GaussianBelief gm_predict1(const GaussianBelief& in, double alpha, double var) {
  if (in.dim() != 1) throw std::invalid_argument("gm_predict1: dim 1 expected");
  if (!(alpha > 0.0) || alpha > 1.0 || !(var > 0.0))
    throw std::invalid_argument("gm_predict1: invalid prior");
  if (alpha >= 1.0) return in;
  const double a2 = alpha * alpha;
  const double cinv = 1.0 / ((1.0 - a2) * var);
  const double m = in.W().a00.real() + a2 * cinv;
  const double w = cinv - a2 * cinv * cinv / m;
  return GaussianBelief::canonical1(alpha * cinv * in.xi()[0] / m, w);
}

GaussianBelief gm_retrodict1(const GaussianBelief& in, double alpha, double var) {
  if (in.dim() != 1) throw std::invalid_argument("gm_retrodict1: dim 1 expected");
  if (!(alpha > 0.0) || alpha > 1.0 || !(var > 0.0))
    throw std::invalid_argument("gm_retrodict1: invalid prior");
  if (alpha >= 1.0) return in;
  const double a2 = alpha * alpha;
  const double cinv = 1.0 / ((1.0 - a2) * var);
  const double m = in.W().a00.real() + cinv;
  const double w = a2 * (cinv - cinv * cinv / m);
  return GaussianBelief::canonical1(alpha * cinv * in.xi()[0] / m, w);
}

std::vector<GaussianBelief> forward_sweep(const std::vector<GaussianBelief>& obs,
                                          const ChannelPrior& prior) {
  check_prior(prior);
  if (obs.empty()) throw std::invalid_argument("forward_sweep: empty");
  std::vector<GaussianBelief> fwd(obs.size());
  const cplx zero_xi[2] = {0.0, 0.0};
  fwd[0] = GaussianBelief::canonical2(
      zero_xi, CMat2::diag(1.0 / prior.var_a, 1.0 / prior.var_b));
  for (std::size_t i = 1; i < obs.size(); ++i)
    fwd[i] = gm_predict(fwd[i - 1].product(obs[i - 1]), prior);
  return fwd;
}

std::vector<GaussianBelief> backward_sweep(const std::vector<GaussianBelief>& obs,
                                           const ChannelPrior& prior) {
  check_prior(prior);
  if (obs.empty()) throw std::invalid_argument("backward_sweep: empty");
  std::vector<GaussianBelief> bwd(obs.size());
  bwd.back() = GaussianBelief::flat(2);
  for (std::size_t i = obs.size() - 1; i > 0; --i)
    bwd[i - 1] = gm_retrodict(bwd[i].product(obs[i]), prior);
  return bwd;
}

std::vector<GaussianBelief> forward_sweep1(const std::vector<GaussianBelief>& obs,
                                           double alpha, double var) {
  if (obs.empty()) throw std::invalid_argument("forward_sweep1: empty");
  std::vector<GaussianBelief> fwd(obs.size());
  fwd[0] = GaussianBelief::canonical1(0.0, 1.0 / var);
  for (std::size_t i = 1; i < obs.size(); ++i)
    fwd[i] = gm_predict1(fwd[i - 1].product(obs[i - 1]), alpha, var);
  return fwd;
}

std::vector<GaussianBelief> backward_sweep1(const std::vector<GaussianBelief>& obs,
                                            double alpha, double var) {
  if (obs.empty()) throw std::invalid_argument("backward_sweep1: empty");
  std::vector<GaussianBelief> bwd(obs.size());
  bwd.back() = GaussianBelief::flat(1);
  for (std::size_t i = obs.size() - 1; i > 0; --i)
    bwd[i - 1] = gm_retrodict1(bwd[i].product(obs[i]), alpha, var);
  return bwd;
}

ChannelEstimate combine_estimate(const std::vector<GaussianBelief>& fwd,
                                 const std::vector<GaussianBelief>& obs,
                                 const std::vector<GaussianBelief>& bwd) {
  if (fwd.size() != obs.size() || bwd.size() != obs.size())
    throw std::invalid_argument("combine_estimate: length mismatch");
  ChannelEstimate est;
  est.h_a.resize(obs.size());
  est.h_b.resize(obs.size());
  cplx m[2];
  for (std::size_t i = 0; i < obs.size(); ++i) {
    fwd[i].product(obs[i]).product(bwd[i]).mean(m);
    est.h_a[i] = m[0];
    est.h_b[i] = m[1];
  }
  return est;
}

ChannelEstimate em_update(const std::vector<cplx>& y,
                          const std::vector<PairAPP>& pair_apps,
                          const ChannelPrior& prior, double n0) {
  if (y.size() != pair_apps.size())
    throw std::invalid_argument("em_update: length mismatch");
  std::vector<GaussianBelief> obs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    obs[i] = em_message(pair_apps[i], y[i], n0);
  const auto fwd = forward_sweep(obs, prior);
  const auto bwd = backward_sweep(obs, prior);
  return combine_estimate(fwd, obs, bwd);
}

std::vector<cplx> sage_update(const std::vector<cplx>& y,
                              const std::vector<PairAPP>& pair_apps,
                              const ChannelPrior& prior, double n0, int user,
                              const std::vector<cplx>& h_other) {
  if (y.size() != pair_apps.size() || y.size() != h_other.size())
    throw std::invalid_argument("sage_update: length mismatch");
  check_prior(prior);
  const double var = user == 0 ? prior.var_a : prior.var_b;
  std::vector<GaussianBelief> obs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    obs[i] = sage_message(pair_apps[i], y[i], n0, user, h_other[i]);
  const auto fwd = forward_sweep1(obs, prior.alpha, var);
  const auto bwd = backward_sweep1(obs, prior.alpha, var);
  std::vector<cplx> out(y.size());
  cplx m[2];
  for (std::size_t i = 0; i < y.size(); ++i) {
    fwd[i].product(obs[i]).product(bwd[i]).mean(m);
    out[i] = m[0];
  }
  return out;
}

}  // namespace pnc
