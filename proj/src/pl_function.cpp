#include "qsb/pl_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qsb/errors.hpp"

namespace qsb {

namespace {

constexpr double kMergeTol = 1e-12;

bool close_abscissae(double a, double b) {
  return std::abs(b - a) <= kMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool same_slope(double a, double b) {
  return std::abs(a - b) <= kMergeTol * std::max({1.0, std::abs(a), std::abs(b)});
}

double segment_slope(const PLFunction::Breakpoint& p, const PLFunction::Breakpoint& q) {
  return (q.value - p.value) / (q.y - p.y);
}

}  // namespace

PLFunction PLFunction::constant(double value) { return affine(0.0, value); }

PLFunction PLFunction::affine(double slope, double intercept) {
  if (!std::isfinite(slope) || !std::isfinite(intercept)) {
    throw NumericalError(ErrorKind::InvalidArgument, "affine function needs finite coefficients");
  }
  PLFunction f;
  f.left_slope_ = slope;
  f.right_slope_ = slope;
  f.anchor_ = intercept;
  f.lip_ = std::abs(slope);
  return f;
}

PLFunction PLFunction::from_breakpoints(std::vector<Breakpoint> breakpoints, double left_slope,
                                        double right_slope) {
  if (!std::isfinite(left_slope) || !std::isfinite(right_slope)) {
    throw NumericalError(ErrorKind::InvalidArgument, "extension slopes must be finite");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto& b = breakpoints[i];
    if (!std::isfinite(b.y) || !std::isfinite(b.value)) {
      throw NumericalError(ErrorKind::InvalidArgument, "breakpoints must be finite");
    }
    if (i > 0 && !(breakpoints[i - 1].y < b.y)) {
      throw NumericalError(ErrorKind::InvalidArgument,
                           "breakpoint abscissae must be strictly increasing (index " +
                               std::to_string(i) + ")");
    }
  }
  PLFunction f;
  f.breakpoints_ = std::move(breakpoints);
  f.left_slope_ = left_slope;
  f.right_slope_ = right_slope;
  f.normalize();
  return f;
}

double PLFunction::operator()(double y) const {
  if (breakpoints_.empty()) return anchor_ + left_slope_ * y;
  const auto& first = breakpoints_.front();
  const auto& last = breakpoints_.back();
  if (y <= first.y) return first.value + left_slope_ * (y - first.y);
  if (y >= last.y) return last.value + right_slope_ * (y - last.y);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y,
                                   [](double v, const Breakpoint& b) { return v < b.y; });
  const auto& q = *it;
  const auto& p = *(it - 1);
  const double w = (y - p.y) / (q.y - p.y);
  return p.value + w * (q.value - p.value);
}

std::vector<double> PLFunction::segment_slopes() const {
  std::vector<double> out;
  out.reserve(breakpoints_.size() + 1);
  out.push_back(left_slope_);
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    out.push_back(segment_slope(breakpoints_[i - 1], breakpoints_[i]));
  }
  if (!breakpoints_.empty()) out.push_back(right_slope_);
  return out;
}

void PLFunction::normalize() {
  if (breakpoints_.empty()) {
    right_slope_ = left_slope_;
    lip_ = std::abs(left_slope_);
    return;
  }
  const double value_at_zero = (*this)(0.0);

  std::vector<Breakpoint> merged;
  merged.reserve(breakpoints_.size());
  for (const auto& b : breakpoints_) {
    if (!merged.empty() && close_abscissae(merged.back().y, b.y)) continue;
    merged.push_back(b);
  }

  std::vector<Breakpoint> kept;
  kept.reserve(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const double in = kept.empty() ? left_slope_ : segment_slope(kept.back(), merged[i]);
    const double out =
        i + 1 < merged.size() ? segment_slope(merged[i], merged[i + 1]) : right_slope_;
    if (same_slope(in, out)) continue;
    kept.push_back(merged[i]);
  }
  breakpoints_ = std::move(kept);

  if (breakpoints_.empty()) {
    anchor_ = value_at_zero;
    right_slope_ = left_slope_;
  } else {
    anchor_ = 0.0;
  }
  lip_ = 0.0;
  for (double s : segment_slopes()) lip_ = std::max(lip_, std::abs(s));
}

PLFunction PLFunction::scaled(double k) const {
  if (k == 0.0) return constant(0.0);
  PLFunction f = *this;
  for (auto& b : f.breakpoints_) b.value *= k;
  f.left_slope_ *= k;
  f.right_slope_ *= k;
  f.anchor_ *= k;
  f.lip_ *= std::abs(k);
  return f;
}

PLFunction PLFunction::shifted(double k) const {
  PLFunction f = *this;
  for (auto& b : f.breakpoints_) b.value += k;
  if (f.breakpoints_.empty()) f.anchor_ += k;
  return f;
}

PLFunction PLFunction::plus_linear(double slope) const {
  PLFunction f = *this;
  for (auto& b : f.breakpoints_) b.value += slope * b.y;
  f.left_slope_ += slope;
  f.right_slope_ += slope;
  f.normalize();
  return f;
}

PLFunction PLFunction::precompose_affine(double alpha, double beta) const {
  if (alpha == 0.0 || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw NumericalError(ErrorKind::InvalidArgument, "argument map must be invertible and finite");
  }
  if (breakpoints_.empty()) return affine(left_slope_ * alpha, anchor_ + left_slope_ * beta);
  PLFunction f;
  f.breakpoints_.reserve(breakpoints_.size());
  for (const auto& b : breakpoints_) f.breakpoints_.push_back({(b.y - beta) / alpha, b.value});
  if (alpha > 0.0) {
    f.left_slope_ = left_slope_ * alpha;
    f.right_slope_ = right_slope_ * alpha;
  } else {
    std::reverse(f.breakpoints_.begin(), f.breakpoints_.end());
    f.left_slope_ = right_slope_ * alpha;
    f.right_slope_ = left_slope_ * alpha;
  }
  f.normalize();
  return f;
}

PLFunction PLFunction::sum(const PLFunction& f, const PLFunction& g, std::size_t breakpoint_limit) {
  if (f.breakpoints_.empty() && g.breakpoints_.empty()) {
    return affine(f.left_slope_ + g.left_slope_, f.anchor_ + g.anchor_);
  }
  const std::size_t total = f.breakpoints_.size() + g.breakpoints_.size();
  if (total > breakpoint_limit) {
    throw NumericalError(ErrorKind::BreakpointLimit,
                         "sum would carry " + std::to_string(total) + " breakpoints (limit " +
                             std::to_string(breakpoint_limit) + ")");
  }
  std::vector<double> ys;
  ys.reserve(total);
  for (const auto& b : f.breakpoints_) ys.push_back(b.y);
  for (const auto& b : g.breakpoints_) ys.push_back(b.y);
  std::inplace_merge(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(f.breakpoints_.size()),
                     ys.end());

  PLFunction h;
  h.breakpoints_.reserve(ys.size());
  for (double y : ys) {
    if (!h.breakpoints_.empty() && close_abscissae(h.breakpoints_.back().y, y)) continue;
    h.breakpoints_.push_back({y, f(y) + g(y)});
  }
  h.left_slope_ = f.left_slope_ + g.left_slope_;
  h.right_slope_ = f.right_slope_ + g.right_slope_;
  h.normalize();
  return h;
}

}  // namespace qsb
