#include "core/txchain.hpp"

#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace pnc {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

cplx constellation_point(Modulation m, int index) {
  if (m == Modulation::BPSK) return index == 0 ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
  switch (index) {
    case 0: return {kInvSqrt2, kInvSqrt2};    // (0,0)
    case 1: return {kInvSqrt2, -kInvSqrt2};   // (1,0)
    case 2: return {-kInvSqrt2, kInvSqrt2};   // (0,1)
    default: return {-kInvSqrt2, -kInvSqrt2}; // (1,1)
  }
}

std::vector<std::uint32_t> make_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::mt19937_64 rng(splitmix64(seed ^ 0xa02bdbf7bb3c0a7ULL));
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> d(0, i - 1);
    std::swap(perm[i - 1], perm[d(rng)]);
  }
  return perm;
}

std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t>& bits,
                                     std::uint64_t seed) {
  const auto perm = make_permutation(bits.size(), seed);
  std::vector<std::uint8_t> out(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) out[k] = bits[perm[k]];
  return out;
}

std::vector<std::uint8_t> deinterleave(const std::vector<std::uint8_t>& bits,
                                       std::uint64_t seed) {
  const auto perm = make_permutation(bits.size(), seed);
  std::vector<std::uint8_t> out(bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) out[perm[k]] = bits[k];
  return out;
}

std::vector<std::uint8_t> ra_encode(const std::vector<std::uint8_t>& bits,
                                    const CodeConfig& cfg) {
  if (static_cast<int>(bits.size()) != cfg.info_len)
    throw std::invalid_argument("ra_encode: bit count does not match info_len");
  if (cfg.repetition < 2 || cfg.info_len <= 0)
    throw std::invalid_argument("ra_encode: invalid code config");
  std::vector<std::uint8_t> rep(cfg.coded_len());
  for (int t = 0; t < cfg.coded_len(); ++t) rep[t] = bits[t / cfg.repetition] & 1;
  auto interleaved = interleave(rep, cfg.interleaver_seed);
  // Accumulator starts at 0, no termination bits.
  std::uint8_t acc = 0;
  for (auto& b : interleaved) {
    acc ^= b;
    b = acc;
  }
  return interleaved;
}

std::vector<cplx> map_symbols(const std::vector<std::uint8_t>& bits, Modulation mod) {
  if (mod == Modulation::BPSK) {
    std::vector<cplx> out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
      out[i] = constellation_point(mod, bits[i] & 1);
    return out;
  }
  if (bits.size() % 2 != 0)
    throw std::invalid_argument("map_symbols: QPSK needs an even bit count");
  std::vector<cplx> out(bits.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int idx = (bits[2 * i] & 1) + 2 * (bits[2 * i + 1] & 1);
    out[i] = constellation_point(mod, idx);
  }
  return out;
}

FrameLayout FrameLayout::make(int data_len, int pilot_interval) {
  if (data_len <= 0 || pilot_interval <= 0 || data_len % pilot_interval != 0)
    throw std::invalid_argument("FrameLayout: pilot interval must divide data length");
  FrameLayout lo;
  lo.data_len = data_len;
  lo.pilot_interval = pilot_interval;
  const int blocks = data_len / pilot_interval;
  lo.total_len = data_len + 2 * blocks;
  lo.is_pilot.assign(lo.total_len, 0);
  lo.data_pos.reserve(data_len);
  lo.pilot_pos.reserve(2 * blocks);
  int pos = 0;
  for (int b = 0; b < blocks; ++b) {
    lo.is_pilot[pos] = 1;
    lo.pilot_pos.push_back(pos++);
    lo.is_pilot[pos] = 1;
    lo.pilot_pos.push_back(pos++);
    for (int d = 0; d < pilot_interval; ++d) lo.data_pos.push_back(pos++);
  }
  return lo;
}

FramePair build_frame_pair(const std::vector<std::uint8_t>& bits_a,
                           const std::vector<std::uint8_t>& bits_b,
                           const CodeConfig& cfg, const FrameLayout& layout,
                           Modulation mod) {
  FramePair fp;
  fp.layout = layout;
  fp.modulation = mod;
  fp.source_bits_a = bits_a;
  fp.source_bits_b = bits_b;
  fp.codeword_a = ra_encode(bits_a, cfg);
  fp.codeword_b = ra_encode(bits_b, cfg);
  const auto data_a = map_symbols(fp.codeword_a, mod);
  const auto data_b = map_symbols(fp.codeword_b, mod);
  if (static_cast<int>(data_a.size()) != layout.data_len)
    throw std::invalid_argument("build_frame_pair: code/layout length mismatch");

  fp.symbols_a.assign(layout.total_len, 0.0);
  fp.symbols_b.assign(layout.total_len, 0.0);
  for (std::size_t d = 0; d < data_a.size(); ++d) {
    fp.symbols_a[layout.data_pos[d]] = data_a[d];
    fp.symbols_b[layout.data_pos[d]] = data_b[d];
  }
  for (std::size_t p = 0; p < layout.pilot_pos.size(); ++p) {
    fp.symbols_a[layout.pilot_pos[p]] = layout.pilot_a[p % 2];
    fp.symbols_b[layout.pilot_pos[p]] = layout.pilot_b[p % 2];
  }
  return fp;
}

}  // namespace pnc
