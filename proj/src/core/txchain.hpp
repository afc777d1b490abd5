#pragma once

#include <cstdint>
#include <vector>

#include "core/numerics.hpp"

namespace pnc {

enum class Modulation { BPSK, QPSK };

inline int bits_per_symbol(Modulation m) { return m == Modulation::BPSK ? 1 : 2; }
inline int constellation_size(Modulation m) { return m == Modulation::BPSK ? 2 : 4; }

// Constellation point for a symbol index. BPSK index = bit (0 -> +1, 1 -> -1).
// QPSK index = b0 + 2*b1 with the Gray labeling
// (0,0)->(1+j)/sqrt2, (0,1)->(-1+j)/sqrt2, (1,1)->(-1-j)/sqrt2, (1,0)->(1-j)/sqrt2.
cplx constellation_point(Modulation m, int index);

// Repeat-accumulate code: repeat each bit, interleave, running-XOR accumulate.
struct CodeConfig {
  int info_len = 0;
  int repetition = 3;
  std::uint64_t interleaver_seed = 0;

  int coded_len() const { return info_len * repetition; }
};

// Seeded Fisher-Yates permutation of {0..n-1}.
std::vector<std::uint32_t> make_permutation(std::size_t n, std::uint64_t seed);

std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t>& bits,
                                     std::uint64_t seed);
std::vector<std::uint8_t> deinterleave(const std::vector<std::uint8_t>& bits,
                                       std::uint64_t seed);

std::vector<std::uint8_t> ra_encode(const std::vector<std::uint8_t>& bits,
                                    const CodeConfig& cfg);

std::vector<cplx> map_symbols(const std::vector<std::uint8_t>& bits, Modulation mod);

// Frame of l data symbols in l/delta blocks of [P1, P2, delta data symbols].
// Terminal A sends pilots (1, 1); terminal B sends (1, -1).
struct FrameLayout {
  int data_len = 0;        // l
  int pilot_interval = 0;  // delta
  int total_len = 0;       // L = l + 2*(l/delta)

  std::vector<std::uint8_t> is_pilot;  // size L
  std::vector<int> data_pos;           // frame index of each data symbol, tx order
  std::vector<int> pilot_pos;          // frame index of each pilot symbol
  cplx pilot_a[2] = {1.0, 1.0};
  cplx pilot_b[2] = {1.0, -1.0};

  static FrameLayout make(int data_len, int pilot_interval);
  int num_blocks() const { return data_len / pilot_interval; }
  // Block that owns frame position i.
  int block_of(int pos) const { return pos / (pilot_interval + 2); }
};

struct FramePair {
  std::vector<std::uint8_t> source_bits_a, source_bits_b;
  std::vector<std::uint8_t> codeword_a, codeword_b;
  std::vector<cplx> symbols_a, symbols_b;  // length L, pilots included
  FrameLayout layout;
  Modulation modulation = Modulation::BPSK;
};

FramePair build_frame_pair(const std::vector<std::uint8_t>& bits_a,
                           const std::vector<std::uint8_t>& bits_b,
                           const CodeConfig& cfg, const FrameLayout& layout,
                           Modulation mod);

}  // namespace pnc
