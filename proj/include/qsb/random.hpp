#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace qsb {

// SplitMix64. Small state, so one generator per sample is cheap; this is what
// makes per-sample seed derivation practical.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double sign() { return ((*this)() & 1U) ? 1.0 : -1.0; }
  double log_uniform(double log10_lo, double log10_hi) {
    return std::pow(10.0, uniform(log10_lo, log10_hi));
  }

 private:
  std::uint64_t state_;
};

// Seed for sample `index` of a run with master seed `master`. Results depend
// only on (master, index), never on worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 mix(master ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
  mix();
  return mix();
}

inline SplitMix64 sample_rng(std::uint64_t master, std::uint64_t index) {
  return SplitMix64(derive_seed(master, index));
}

}  // namespace qsb
