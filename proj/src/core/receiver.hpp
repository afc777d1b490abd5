#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/channel.hpp"
#include "core/estimator.hpp"
#include "core/vdecoder.hpp"

namespace pnc {

enum class Scheme {
  em_bp,                // joint EM channel tracking with clustered BP decoding
  sage_bp,              // per-user SAGE tracking with clustered BP decoding
  sage_bp_pic,          // SAGE tracking with parallel interference cancelation
  em_sic,               // EM tracking with MMSE successive cancelation
  multi_em_single_bp,   // several EM updates per single-iteration BP decode
  mmse_only,            // pilot-block MMSE estimate, one decode, no tracking
  full_csi,             // genie channel knowledge, one decode
};

const char* scheme_name(Scheme s);
bool parse_scheme(const std::string& name, Scheme& out);

struct ReceiverConfig {
  Scheme scheme = Scheme::em_bp;
  int em_iters = 5;        // estimation iterations K
  int ncd1 = 6;            // decoder iterations inside each estimation step
  int ncd2 = 6;            // decoder iterations of the final decode
  int pic_exchanges = 2;
  int inner_em_per_bp = 1; // estimation steps per decode, multi scheme only
  double early_stop_delta = 0.0;  // mean |h^(k)-h^(k-1)|^2 threshold, 0 = off
};

// Per-iteration bookkeeping: estimates[k] is the channel estimate after k
// estimation steps (k = 0 is the pilot-only or genie starting point) and
// xor_per_iter[k] the network-coded decisions of the decode run at
// estimates[k]. The last decode uses ncd2 iterations; earlier ones ncd1.
struct ReceiverReport {
  std::vector<std::uint8_t> xor_bits;
  std::vector<std::vector<std::uint8_t>> xor_per_iter;
  std::vector<ChannelEstimate> estimates;
  int em_iterations_run = 0;
  int bp_iterations_run = 0;  // decoder iterations summed over all decodes
};

// `truth` is required for full_csi and ignored otherwise.
ReceiverReport run_receiver(const std::vector<cplx>& y, const FrameLayout& layout,
                            Modulation mod, const DecoderConfig& dcfg,
                            const ChannelPrior& prior, double n0,
                            const ReceiverConfig& rcfg,
                            const ChannelTrace* truth = nullptr);

}  // namespace pnc
