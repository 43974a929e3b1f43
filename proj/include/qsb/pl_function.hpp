#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qsb {

inline constexpr std::size_t kDefaultBreakpointLimit = 1'000'000;

// Continuous piecewise-linear function R -> R with linear extensions past the
// first and last breakpoint. With no breakpoints it is the affine function
// anchor + slope * y (left and right slopes coincide).
//
// Values are kept in a normal form: breakpoint abscissae strictly increasing,
// abscissae closer than 1e-12 (relative) merged, and breakpoints whose two
// adjacent slopes agree to 1e-12 (relative) removed. The family is closed under
// the operations below, which is what keeps map composition and inversion exact.
class PLFunction {
 public:
  struct Breakpoint {
    double y;
    double value;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
  };

  PLFunction() = default;

  static PLFunction constant(double value);
  static PLFunction affine(double slope, double intercept);
  // Throws InvalidArgument on non-finite data or non-increasing abscissae.
  static PLFunction from_breakpoints(std::vector<Breakpoint> breakpoints, double left_slope,
                                     double right_slope);

  double operator()(double y) const;

  std::span<const Breakpoint> breakpoints() const { return breakpoints_; }
  double left_slope() const { return left_slope_; }
  double right_slope() const { return right_slope_; }
  // Value at 0 of the affine form; only meaningful without breakpoints.
  double anchor() const { return anchor_; }
  // max |slope| over all segments including both extensions.
  double lipschitz() const { return lip_; }

  // Slopes of every piece, left extension first, right extension last.
  std::vector<double> segment_slopes() const;

  bool is_affine() const { return breakpoints_.empty(); }
  bool is_constant() const { return is_affine() && left_slope_ == 0.0; }

  PLFunction scaled(double k) const;          // k * f
  PLFunction shifted(double k) const;         // f + k
  PLFunction plus_linear(double slope) const; // f(y) + slope * y
  // y -> f(alpha * y + beta); alpha must be nonzero.
  PLFunction precompose_affine(double alpha, double beta) const;

  static PLFunction sum(const PLFunction& f, const PLFunction& g,
                        std::size_t breakpoint_limit = kDefaultBreakpointLimit);

  friend bool operator==(const PLFunction&, const PLFunction&) = default;

 private:
  void normalize();

  std::vector<Breakpoint> breakpoints_;
  double left_slope_ = 0.0;
  double right_slope_ = 0.0;
  double anchor_ = 0.0;
  double lip_ = 0.0;
};

}  // namespace qsb
