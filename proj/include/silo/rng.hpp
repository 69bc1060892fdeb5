#pragma once

#include <cstdint>

namespace silo {

// PCG32 (XSH-RR output, 64-bit LCG state; O'Neill 2014). Chosen because it is
// tiny, fast, and gives bit-identical sequences on every platform, unlike the
// standard-library distributions. Substreams are selected through the
// increment, so stream k of a seed never overlaps stream j != k.
//
// Convention used throughout the simulator: stream 0 is reserved for run
// setup (mixed-strategy assignment draws), replication p uses stream p + 1.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer in [0, bound). bound must be >= 1.
  std::uint32_t next_below(std::uint32_t bound) {
    if (bound <= 1) return 0;
    std::uint32_t threshold = (0u - bound) % bound;
    for (;;) {
      std::uint32_t r = next_u32();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace silo
