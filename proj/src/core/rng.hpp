#pragma once

#include <cstdint>
#include <random>

namespace pnc {

// splitmix64 step; used to derive independent per-frame RNG streams from the
// master seed without any global RNG state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream for (master_seed, frame_index, salt). Distinct salts separate the
// bit, channel and noise draws of one frame.
inline std::mt19937_64 derive_stream(std::uint64_t master_seed,
                                     std::uint64_t frame_index,
                                     std::uint64_t salt) {
  std::uint64_t s = splitmix64(master_seed ^ splitmix64(frame_index + 1));
  s = splitmix64(s ^ splitmix64(salt + 0x5851f42d4c957f2dULL));
  return std::mt19937_64(s);
}

}  // namespace pnc
