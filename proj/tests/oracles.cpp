#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pnc::test {

namespace {

Eigen::MatrixXcd ar1_covariance(int len, double alpha, double var) {
  Eigen::MatrixXcd cov(len, len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j)
      cov(i, j) = var * std::pow(alpha, std::abs(i - j));
  return cov;
}

}  // namespace

void smoother_oracle(const std::vector<GaussianBelief>& obs,
                     const ChannelPrior& prior, std::vector<cplx>& mean_a,
                     std::vector<cplx>& mean_b) {
  const int len = static_cast<int>(obs.size());
  const int n = 2 * len;  // stacked [h_a0, h_b0, h_a1, h_b1, ...]
  Eigen::MatrixXcd prec = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd cov_a = ar1_covariance(len, prior.alpha, prior.var_a);
  const Eigen::MatrixXcd cov_b = ar1_covariance(len, prior.alpha, prior.var_b);
  const Eigen::MatrixXcd pa = cov_a.inverse();
  const Eigen::MatrixXcd pb = cov_b.inverse();
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j) {
      prec(2 * i, 2 * j) = pa(i, j);
      prec(2 * i + 1, 2 * j + 1) = pb(i, j);
    }
  Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < len; ++i) {
    if (obs[i].dim() != 2) throw std::invalid_argument("smoother_oracle: dim");
    const CMat2& w = obs[i].W();
    prec(2 * i, 2 * i) += w.a00;
    prec(2 * i, 2 * i + 1) += w.a01;
    prec(2 * i + 1, 2 * i) += w.a10;
    prec(2 * i + 1, 2 * i + 1) += w.a11;
    xi(2 * i) += obs[i].xi()[0];
    xi(2 * i + 1) += obs[i].xi()[1];
  }
  const Eigen::VectorXcd mean = prec.ldlt().solve(xi);
  mean_a.resize(len);
  mean_b.resize(len);
  for (int i = 0; i < len; ++i) {
    mean_a[i] = mean(2 * i);
    mean_b[i] = mean(2 * i + 1);
  }
}

std::vector<cplx> smoother_oracle1(const std::vector<GaussianBelief>& obs,
                                   double alpha, double var) {
  const int len = static_cast<int>(obs.size());
  Eigen::MatrixXcd prec = ar1_covariance(len, alpha, var).inverse();
  Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(len);
  for (int i = 0; i < len; ++i) {
    if (obs[i].dim() != 1) throw std::invalid_argument("smoother_oracle1: dim");
    prec(i, i) += obs[i].W().a00;
    xi(i) += obs[i].xi()[0];
  }
  const Eigen::VectorXcd mean = prec.ldlt().solve(xi);
  std::vector<cplx> out(len);
  for (int i = 0; i < len; ++i) out[i] = mean(i);
  return out;
}

PairEnumeration enumerate_pair_code(const DecoderConfig& cfg, Modulation mod,
                                    const FrameLayout& layout,
                                    const std::vector<PairAPP>& lik) {
  if (cfg.info_len > 8)
    throw std::invalid_argument("enumerate_pair_code: info_len too large");
  const int nm = constellation_size(mod);
  const int m = cfg.info_len;
  const int n_words = 1 << m;
  const int n_data = layout.data_len;

  // Precompute all codewords as data-symbol constellation indices.
  std::vector<std::vector<int>> sym_idx(n_words, std::vector<int>(n_data));
  const CodeConfig enc{cfg.info_len, cfg.repetition, cfg.interleaver_seed};
  for (int w = 0; w < n_words; ++w) {
    std::vector<std::uint8_t> bits(m);
    for (int j = 0; j < m; ++j) bits[j] = (w >> j) & 1;
    std::vector<std::uint8_t> cw;
    if (cfg.repetition >= 2) {
      cw = ra_encode(bits, enc);
    } else {
      // repetition 1: accumulator over the interleaved bits directly
      cw = interleave(bits, cfg.interleaver_seed);
      std::uint8_t acc = 0;
      for (auto& b : cw) {
        acc ^= b;
        b = acc;
      }
    }
    for (int d = 0; d < n_data; ++d) {
      if (mod == Modulation::BPSK)
        sym_idx[w][d] = cw[d];
      else
        sym_idx[w][d] = (cw[2 * d] & 1) + 2 * (cw[2 * d + 1] & 1);
    }
  }

  PairEnumeration out;
  out.symbol_marginals.assign(n_data, {});
  out.bit_pair_marginals.assign(m, {});
  std::vector<double> logp_all(static_cast<std::size_t>(n_words) * n_words);
  double mx = -1e300;
  for (int wa = 0; wa < n_words; ++wa)
    for (int wb = 0; wb < n_words; ++wb) {
      double logp = 0.0;
      for (int d = 0; d < n_data; ++d) {
        const auto& t = lik[layout.data_pos[d]];
        logp += std::log(t.p[sym_idx[wa][d] * nm + sym_idx[wb][d]]);
      }
      logp_all[static_cast<std::size_t>(wa) * n_words + wb] = logp;
      mx = std::max(mx, logp);
    }
  double total = 0.0;
  for (int wa = 0; wa < n_words; ++wa)
    for (int wb = 0; wb < n_words; ++wb) {
      const double p =
          std::exp(logp_all[static_cast<std::size_t>(wa) * n_words + wb] - mx);
      total += p;
      for (int d = 0; d < n_data; ++d)
        out.symbol_marginals[d][sym_idx[wa][d] * nm + sym_idx[wb][d]] += p;
      for (int j = 0; j < m; ++j)
        out.bit_pair_marginals[j][((wa >> j) & 1) + 2 * ((wb >> j) & 1)] += p;
    }
  for (auto& t : out.symbol_marginals)
    for (auto& v : t) v /= total;
  for (auto& t : out.bit_pair_marginals)
    for (auto& v : t) v /= total;
  return out;
}

SingleEnumeration enumerate_single_code(
    const DecoderConfig& cfg, Modulation mod,
    const std::vector<std::array<double, 4>>& sym_lik) {
  if (cfg.info_len > 16)
    throw std::invalid_argument("enumerate_single_code: info_len too large");
  const int m = cfg.info_len;
  const int n_words = 1 << m;
  const int n_data = static_cast<int>(sym_lik.size());

  SingleEnumeration out;
  out.symbol_marginals.assign(n_data, {});
  out.bit_marginals.assign(m, {});
  const CodeConfig enc{cfg.info_len, cfg.repetition, cfg.interleaver_seed};
  std::vector<std::vector<int>> idx_all(n_words, std::vector<int>(n_data));
  std::vector<double> logp_all(n_words);
  double mx = -1e300;
  for (int w = 0; w < n_words; ++w) {
    std::vector<std::uint8_t> bits(m);
    for (int j = 0; j < m; ++j) bits[j] = (w >> j) & 1;
    const auto cw = ra_encode(bits, enc);
    for (int d = 0; d < n_data; ++d)
      idx_all[w][d] = mod == Modulation::BPSK
                          ? cw[d]
                          : (cw[2 * d] & 1) + 2 * (cw[2 * d + 1] & 1);
    double logp = 0.0;
    for (int d = 0; d < n_data; ++d) logp += std::log(sym_lik[d][idx_all[w][d]]);
    logp_all[w] = logp;
    mx = std::max(mx, logp);
  }
  double total = 0.0;
  for (int w = 0; w < n_words; ++w) {
    const double p = std::exp(logp_all[w] - mx);
    total += p;
    for (int d = 0; d < n_data; ++d) out.symbol_marginals[d][idx_all[w][d]] += p;
    for (int j = 0; j < m; ++j) out.bit_marginals[j][(w >> j) & 1] += p;
  }
  for (auto& t : out.symbol_marginals)
    for (auto& v : t) v /= total;
  for (auto& t : out.bit_marginals)
    for (auto& v : t) v /= total;
  return out;
}

double log_posterior(const std::vector<cplx>& y, const ChannelEstimate& est,
                     const DecoderConfig& cfg, Modulation mod,
                     const FrameLayout& layout, const ChannelPrior& prior,
                     double n0) {
  // AR(1) trajectory prior for both user tracks.
  auto prior_logpdf = [&](const std::vector<cplx>& h, double var) {
    double lp = -std::log(std::numbers::pi * var) - std::norm(h[0]) / var;
    const double c = (1.0 - prior.alpha * prior.alpha) * var;
    for (std::size_t i = 1; i < h.size(); ++i)
      lp += -std::log(std::numbers::pi * c) -
            std::norm(h[i] - prior.alpha * h[i - 1]) / c;
    return lp;
  };
  double lp = prior_logpdf(est.h_a, prior.var_a) +
              prior_logpdf(est.h_b, prior.var_b);

  const int m = cfg.info_len;
  const int n_words = 1 << m;
  const CodeConfig enc{cfg.info_len, cfg.repetition, cfg.interleaver_seed};
  std::vector<double> loglik;
  loglik.reserve(static_cast<std::size_t>(n_words) * n_words);
  for (int wa = 0; wa < n_words; ++wa) {
    std::vector<std::uint8_t> bits_a(m), bits_b(m);
    for (int j = 0; j < m; ++j) bits_a[j] = (wa >> j) & 1;
    for (int wb = 0; wb < n_words; ++wb) {
      for (int j = 0; j < m; ++j) bits_b[j] = (wb >> j) & 1;
      const FramePair fp = build_frame_pair(bits_a, bits_b, enc, layout, mod);
      double ll = 0.0;
      for (int i = 0; i < layout.total_len; ++i)
        ll -= std::norm(y[i] - est.h_a[i] * fp.symbols_a[i] -
                        est.h_b[i] * fp.symbols_b[i]) /
              n0;
      loglik.push_back(ll);
    }
  }
  double mx = loglik[0];
  for (double v : loglik) mx = std::max(mx, v);
  double acc = 0.0;
  for (double v : loglik) acc += std::exp(v - mx);
  // Uniform codeword-pair prior and the Gaussian normalization are constant
  // in h; they drop out of monotonicity comparisons.
  return lp + mx + std::log(acc);
}

}  // namespace pnc::test
