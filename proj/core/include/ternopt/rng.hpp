#pragma once

#include <cstdint>

namespace ternopt {

// splitmix64 generator. Every random draw in the project flows through this
// class so that instances and heuristics are reproducible bit-for-bit across
// platforms. The uniform-real and bounded-int mappings below are part of the
// file-format contract (golden instances depend on them); do not change them.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1): top 53 bits scaled by 2^-53.
  double next_real01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double next_real(double lo, double hi) {
    return lo + (hi - lo) * next_real01();
  }

  // Uniform integer in [0, n). Rejection-free bounded scaling: the bias is
  // at most n / 2^64, irrelevant for the ranges used here.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Uniform integer in [lo, hi] inclusive.
  long long next_int(long long lo, long long hi) {
    return lo + static_cast<long long>(
                    next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  // Independent child stream (used for per-restart seeds). Mixing the parent
  // seed with the stream index through the splitmix64 finalizer keeps streams
  // decorrelated while remaining a pure function of (seed, idx).
  static Rng derive(std::uint64_t seed, std::uint64_t idx) {
    Rng mixer(seed ^ (0x9E3779B97F4A7C15ULL * (idx + 1)));
    return Rng(mixer.next_u64());
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace ternopt
