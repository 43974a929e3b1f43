#include "qsb/qs_group.hpp"

#include <algorithm>
#include <cmath>

namespace qsb {

ShearElement act_dilation(double t, const ShearElement& h) {
  const double et = std::exp(t);
  auto C = h.C.precompose_affine(std::exp(-t), 0.0).scaled(et).shifted(h.b * t * et);
  return {std::move(C), et * h.b};
}

ShearElement act_flip(const ShearElement& h) {
  return {h.C.precompose_affine(-1.0, 0.0).scaled(-1.0), -h.b};
}

ShearElement shear_mul(const ShearElement& h1, const ShearElement& h2,
                       std::size_t breakpoint_limit) {
  return {PLFunction::sum(h2.C, h1.C.precompose_affine(1.0, h2.b), breakpoint_limit),
          h1.b + h2.b};
}

ShearElement shear_inv(const ShearElement& h) {
  return {h.C.precompose_affine(1.0, -h.b).scaled(-1.0), -h.b};
}

namespace {

// Conjugation by pi^sigma lambda_t. The two actions commute.
ShearElement act(double t, int sigma, const ShearElement& h) {
  auto out = act_dilation(t, h);
  return sigma ? act_flip(out) : out;
}

}  // namespace

QSGroupElement group_identity() { return {}; }

QSGroupElement group_mul(const QSGroupElement& g1, const QSGroupElement& g2,
                         std::size_t breakpoint_limit) {
  // M1 F1 M2 F2 = M1 M2 (M2^{-1} F1 M2) F2
  const auto moved = act(-g2.t, g2.sigma, g1.shear());
  auto h = shear_mul(moved, g2.shear(), breakpoint_limit);
  return {std::move(h.C), h.b, g1.t + g2.t, g1.sigma ^ g2.sigma};
}

QSGroupElement group_inv(const QSGroupElement& g) {
  // (M F)^{-1} = M^{-1} (M F^{-1} M^{-1})
  auto h = act(g.t, g.sigma, shear_inv(g.shear()));
  return {std::move(h.C), h.b, -g.t, g.sigma};
}

CanonicalQSMap realize(const QSGroupElement& g) {
  const double et = std::exp(g.t);
  const double s = g.sigma ? -1.0 : 1.0;
  // pi^s lambda_t F_{C,b}: (s e^t x + s(e^t C(y) + t e^t (y + b)), s e^t (y + b))
  auto c = g.C.scaled(et).plus_linear(g.t * et).shifted(g.t * et * g.b).scaled(s);
  return CanonicalQSMap::make(s * et, s * et * g.b, std::move(c));
}

QSGroupElement factorize(const CanonicalQSMap& f) {
  QSGroupElement g;
  g.sigma = f.a < 0.0 ? 1 : 0;
  g.t = std::log(std::abs(f.a));
  g.b = f.b / f.a;
  g.C = f.c.scaled(1.0 / f.a).plus_linear(-g.t).shifted(-g.t * g.b);
  return g;
}

namespace {

bool close(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool approx_equal(const PLFunction& f, const PLFunction& g, double rel_tol) {
  const auto fb = f.breakpoints();
  const auto gb = g.breakpoints();
  if (fb.size() != gb.size()) return false;
  for (std::size_t i = 0; i < fb.size(); ++i) {
    if (!close(fb[i].y, gb[i].y, rel_tol) || !close(fb[i].value, gb[i].value, rel_tol)) {
      return false;
    }
  }
  return close(f.left_slope(), g.left_slope(), rel_tol) &&
         close(f.right_slope(), g.right_slope(), rel_tol) &&
         close(f.anchor(), g.anchor(), rel_tol);
}

bool approx_equal(const QSGroupElement& g1, const QSGroupElement& g2, double rel_tol) {
  return g1.sigma == g2.sigma && close(g1.t, g2.t, rel_tol) && close(g1.b, g2.b, rel_tol) &&
         approx_equal(g1.C, g2.C, rel_tol);
}

}  // namespace qsb
