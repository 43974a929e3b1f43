#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qsb/canonical_map.hpp"
#include "qsb/pl_function.hpp"
#include "qsb/qs_group.hpp"
#include "qsb/random.hpp"

namespace qsb::testing {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// PL function with up to `max_breaks` breakpoints in [-5, 5] and slopes in [-3, 3].
inline PLFunction random_pl(SplitMix64& rng, int max_breaks = 4) {
  const int n = static_cast<int>(rng() % static_cast<unsigned>(max_breaks + 1));
  if (n == 0) return PLFunction::affine(rng.uniform(-3.0, 3.0), rng.uniform(-2.0, 2.0));
  std::vector<double> ys(n);
  for (auto& y : ys) y = rng.uniform(-5.0, 5.0);
  std::sort(ys.begin(), ys.end());
  std::vector<PLFunction::Breakpoint> bps;
  double value = rng.uniform(-2.0, 2.0);
  for (int k = 0; k < n; ++k) {
    if (k > 0) value += rng.uniform(-3.0, 3.0) * (ys[k] - ys[k - 1]);
    bps.push_back({ys[k], value});
  }
  return PLFunction::from_breakpoints(bps, rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
}

inline CanonicalQSMap random_map(SplitMix64& rng) {
  const double a = rng.sign() * std::exp(rng.uniform(-1.5, 1.5));
  return CanonicalQSMap::make(a, rng.uniform(-3.0, 3.0), random_pl(rng));
}

inline QSGroupElement random_element(SplitMix64& rng) {
  QSGroupElement g;
  g.C = random_pl(rng);
  g.b = rng.uniform(-3.0, 3.0);
  g.t = rng.uniform(-1.5, 1.5);
  g.sigma = static_cast<int>(rng() & 1U);
  return g;
}

}  // namespace qsb::testing
