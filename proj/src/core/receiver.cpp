#include "core/receiver.hpp"

#include <stdexcept>

namespace pnc {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::em_bp: return "em_bp";
    case Scheme::sage_bp: return "sage_bp";
    case Scheme::sage_bp_pic: return "sage_bp_pic";
    case Scheme::em_sic: return "em_sic";
    case Scheme::multi_em_single_bp: return "multi_em_single_bp";
    case Scheme::mmse_only: return "mmse_only";
    case Scheme::full_csi: return "full_csi";
  }
  return "?";
}

bool parse_scheme(const std::string& name, Scheme& out) {
  for (Scheme s : {Scheme::em_bp, Scheme::sage_bp, Scheme::sage_bp_pic,
                   Scheme::em_sic, Scheme::multi_em_single_bp, Scheme::mmse_only,
                   Scheme::full_csi}) {
    if (name == scheme_name(s)) {
      out = s;
      return true;
    }
  }
  return false;
}

namespace {

std::vector<std::uint8_t> hard_xor(const MultiUserResult& r) {
  std::vector<std::uint8_t> out(r.a.bit_apps.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::uint8_t sa = r.a.bit_apps[j][1] > r.a.bit_apps[j][0] ? 1 : 0;
    const std::uint8_t sb = r.b.bit_apps[j][1] > r.b.bit_apps[j][0] ? 1 : 0;
    out[j] = sa ^ sb;
  }
  return out;
}

double est_delta(const ChannelEstimate& a, const ChannelEstimate& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.h_a.size(); ++i)
    acc += std::norm(a.h_a[i] - b.h_a[i]) + std::norm(a.h_b[i] - b.h_b[i]);
  return acc / (2.0 * a.h_a.size());
}

// Extrinsic tables frozen, local channel likelihoods refreshed.
std::vector<PairAPP> combine_extrinsic(const std::vector<PairAPP>& ext,
                                       const std::vector<PairAPP>& lik) {
  std::vector<PairAPP> out(lik.size());
  for (std::size_t i = 0; i < lik.size(); ++i) {
    if (lik[i].is_pilot) {
      out[i] = lik[i];
      continue;
    }
    out[i] = lik[i];
    const int n = lik[i].table_size();
    for (int q = 0; q < n; ++q) out[i].p[q] = ext[i].p[q] * lik[i].p[q];
    out[i].normalize();
  }
  return out;
}

}  // namespace

ReceiverReport run_receiver(const std::vector<cplx>& y, const FrameLayout& layout,
                            Modulation mod, const DecoderConfig& dcfg,
                            const ChannelPrior& prior, double n0,
                            const ReceiverConfig& rcfg, const ChannelTrace* truth) {
  if (static_cast<int>(y.size()) != layout.total_len)
    throw std::invalid_argument("run_receiver: frame length mismatch");
  if (dcfg.info_len * dcfg.repetition != layout.data_len * bits_per_symbol(mod))
    throw std::invalid_argument("run_receiver: code and layout disagree");
  if (rcfg.em_iters < 0 || rcfg.ncd1 < 1 || rcfg.ncd2 < 1 ||
      rcfg.pic_exchanges < 1 || rcfg.inner_em_per_bp < 1)
    throw std::invalid_argument("run_receiver: invalid iteration counts");

  ReceiverReport rep;
  const Scheme scheme = rcfg.scheme;

  const bool joint_bp = scheme == Scheme::em_bp || scheme == Scheme::sage_bp ||
                        scheme == Scheme::multi_em_single_bp ||
                        scheme == Scheme::mmse_only || scheme == Scheme::full_csi;

  auto decode_at = [&](const ChannelEstimate& est, DecoderWorkspace& ws,
                       int iters) {
    rep.bp_iterations_run += iters;
    const auto lik = init_symbol_likelihoods(y, est.h_a, est.h_b, n0, layout, mod);
    return bp_decode(ws, lik, layout, iters);
  };

  if (scheme == Scheme::full_csi) {
    if (truth == nullptr)
      throw std::invalid_argument("run_receiver: full_csi needs the true trace");
    ChannelEstimate est{truth->h_a, truth->h_b};
    if (static_cast<int>(est.h_a.size()) != layout.total_len)
      throw std::invalid_argument("run_receiver: trace length mismatch");
    DecoderWorkspace ws(dcfg, mod, 2);
    const auto dec = decode_at(est, ws, rcfg.ncd2);
    rep.xor_bits = xor_reduce(dec.bit_apps);
    rep.xor_per_iter.push_back(rep.xor_bits);
    rep.estimates.push_back(std::move(est));
    return rep;
  }

  const int k_max = scheme == Scheme::mmse_only ? 0 : rcfg.em_iters;
  ChannelEstimate cur = mmse_pilot_init(y, layout, prior, n0);
  rep.estimates.push_back(cur);

  if (joint_bp) {
    DecoderWorkspace ws(dcfg, mod, 2);
    for (int k = 1; k <= k_max; ++k) {
      const int bp_iters = scheme == Scheme::multi_em_single_bp ? 1 : rcfg.ncd1;
      const auto dec = decode_at(cur, ws, bp_iters);
      rep.xor_per_iter.push_back(xor_reduce(dec.bit_apps));

      ChannelEstimate next;
      if (scheme == Scheme::sage_bp) {
        // Two stages per iteration: re-decode at the refreshed A track
        // before the B track is updated.
        next.h_a = sage_update(y, dec.pair_apps, prior, n0, 0, cur.h_b);
        const ChannelEstimate mid{next.h_a, cur.h_b};
        const auto dec2 = decode_at(mid, ws, rcfg.ncd1);
        next.h_b = sage_update(y, dec2.pair_apps, prior, n0, 1, next.h_a);
      } else if (scheme == Scheme::multi_em_single_bp) {
        next = em_update(y, dec.pair_apps, prior, n0);
        for (int j = 1; j < rcfg.inner_em_per_bp; ++j) {
          const auto lik =
              init_symbol_likelihoods(y, next.h_a, next.h_b, n0, layout, mod);
          next = em_update(y, combine_extrinsic(dec.extrinsic, lik), prior, n0);
        }
      } else {
        next = em_update(y, dec.pair_apps, prior, n0);
      }
      rep.estimates.push_back(next);
      rep.em_iterations_run = k;
      const double delta = est_delta(next, cur);
      cur = std::move(next);
      if (rcfg.early_stop_delta > 0.0 && delta < rcfg.early_stop_delta) break;
    }
    const auto dec = decode_at(cur, ws, rcfg.ncd2);
    rep.xor_bits = xor_reduce(dec.bit_apps);
    rep.xor_per_iter.push_back(rep.xor_bits);
    return rep;
  }

  // Interference-cancelation decoders.
  auto pic_at = [&](const ChannelEstimate& est, int iters) {
    rep.bp_iterations_run += 2 * iters * rcfg.pic_exchanges;
    return pic_decode(y, est.h_a, est.h_b, n0, layout, dcfg, mod, iters,
                      rcfg.pic_exchanges);
  };
  auto sic_at = [&](const ChannelEstimate& est, int iters) {
    rep.bp_iterations_run += 2 * iters;
    return sic_decode(y, est.h_a, est.h_b, n0, layout, dcfg, mod, iters);
  };
  for (int k = 1; k <= k_max; ++k) {
    ChannelEstimate next;
    if (scheme == Scheme::sage_bp_pic) {
      const auto dec = pic_at(cur, rcfg.ncd1);
      rep.xor_per_iter.push_back(xor_reduce(dec.bit_pair_apps));
      next.h_a = sage_update(y, dec.pair_apps, prior, n0, 0, cur.h_b);
      const ChannelEstimate mid{next.h_a, cur.h_b};
      const auto dec2 = pic_at(mid, rcfg.ncd1);
      next.h_b = sage_update(y, dec2.pair_apps, prior, n0, 1, next.h_a);
    } else {
      const auto dec = sic_at(cur, rcfg.ncd1);
      rep.xor_per_iter.push_back(hard_xor(dec));
      next = em_update(y, dec.pair_apps, prior, n0);
    }
    rep.estimates.push_back(next);
    rep.em_iterations_run = k;
    const double delta = est_delta(next, cur);
    cur = std::move(next);
    if (rcfg.early_stop_delta > 0.0 && delta < rcfg.early_stop_delta) break;
  }
  if (scheme == Scheme::sage_bp_pic) {
    rep.xor_bits = xor_reduce(pic_at(cur, rcfg.ncd2).bit_pair_apps);
  } else {
    rep.xor_bits = hard_xor(sic_at(cur, rcfg.ncd2));
  }
  rep.xor_per_iter.push_back(rep.xor_bits);
  return rep;
}

}  // namespace pnc
