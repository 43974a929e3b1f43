#pragma once

#include <cmath>
#include <string>

#include "qsb/errors.hpp"

namespace qsb::roots {

struct Bracket {
  double lo;
  double hi;
};

// Find lo <= start <= hi with above(lo) == true and above(hi) == false, by
// doubling the step away from `start`. `above` must be a threshold predicate:
// true below some root, false above it.
template <class Pred>
Bracket expand_bracket(Pred&& above, double start, double max_span) {
  double step = 1.0;
  double lo = start;
  while (!above(lo)) {
    lo = start - step;
    step *= 2.0;
    if (step > 2.0 * max_span) {
      throw NumericalError(ErrorKind::NonBracketable,
                           "no lower bracket within span " + std::to_string(max_span));
    }
  }
  step = 1.0;
  double hi = start;
  while (above(hi)) {
    hi = start + step;
    step *= 2.0;
    if (step > 2.0 * max_span) {
      throw NumericalError(ErrorKind::NonBracketable,
                           "no upper bracket within span " + std::to_string(max_span));
    }
  }
  return {lo, hi};
}

// Bisection on a threshold predicate; returns the midpoint of the final
// bracket once its width is <= tol (or no further split is representable).
template <class Pred>
double bisect_threshold(Pred&& above, Bracket b, double tol) {
  double lo = b.lo;
  double hi = b.hi;
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (above(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Bisection for a sign change of f on [lo, hi] (f(lo) < 0 < f(hi) or reverse).
template <class Fn>
double bisect_sign_change(Fn&& f, double lo, double hi, double tol) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) {
    throw NumericalError(ErrorKind::NonBracketable, "bracket endpoints share a sign");
  }
  const bool increasing = flo < 0.0;
  return bisect_threshold([&](double u) { return (f(u) < 0.0) == increasing; }, {lo, hi}, tol);
}

}  // namespace qsb::roots
