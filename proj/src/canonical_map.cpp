#include "qsb/canonical_map.hpp"

#include <algorithm>
#include <cmath>

#include "qsb/errors.hpp"

namespace qsb {

CanonicalQSMap CanonicalQSMap::make(double a, double b, PLFunction c) {
  if (a == 0.0 || !std::isfinite(a) || !std::isfinite(b)) {
    throw NumericalError(ErrorKind::InvalidArgument, "canonical map needs finite a != 0 and finite b");
  }
  return CanonicalQSMap{a, b, std::move(c)};
}

BoundaryPoint apply(const CanonicalQSMap& f, BoundaryPoint p) {
  return {f.a * p.x + f.c(p.y), f.a * p.y + f.b};
}

CanonicalQSMap identity_map() { return {1.0, 0.0, PLFunction::constant(0.0)}; }

CanonicalQSMap make_translation(double u, double v) {
  return CanonicalQSMap::make(1.0, v, PLFunction::constant(u));
}

CanonicalQSMap make_flip() { return {-1.0, 0.0, PLFunction::constant(0.0)}; }

CanonicalQSMap make_lambda(double t) {
  const double et = std::exp(t);
  return CanonicalQSMap::make(et, 0.0, PLFunction::affine(t * et, 0.0));
}

CanonicalQSMap make_Tg(double gx, double gy, double gt) {
  const double et = std::exp(gt);
  return CanonicalQSMap::make(et, gy, PLFunction::affine(gt * et, gx));
}

CanonicalQSMap compose(const CanonicalQSMap& f1, const CanonicalQSMap& f2,
                       std::size_t breakpoint_limit) {
  // F1(F2(x,y)) = (a1 a2 x + a1 c2(y) + c1(a2 y + b2), a1 a2 y + a1 b2 + b1)
  auto c = PLFunction::sum(f2.c.scaled(f1.a), f1.c.precompose_affine(f2.a, f2.b),
                           breakpoint_limit);
  return CanonicalQSMap::make(f1.a * f2.a, f1.a * f2.b + f1.b, std::move(c));
}

CanonicalQSMap invert(const CanonicalQSMap& f) {
  const double inv = 1.0 / f.a;
  // c'(y) = -(1/a) c(y/a - b/a)
  auto c = f.c.precompose_affine(inv, -f.b * inv).scaled(-inv);
  return CanonicalQSMap::make(inv, -f.b * inv, std::move(c));
}

double lipschitz_bound(const CanonicalQSMap& f) {
  const double abs_a = std::abs(f.a);
  return abs_a + f.c.lipschitz() + std::abs(f.a * std::log(abs_a));
}

std::string_view to_string(MapClass c) {
  switch (c) {
    case MapClass::Isometry: return "Isometry";
    case MapClass::Similarity: return "Similarity";
    case MapClass::GeneralQS: return "GeneralQS";
  }
  return "?";
}

Classification classify(const CanonicalQSMap& f) {
  constexpr double tol = 1e-12;
  if (!f.c.is_affine()) return {MapClass::GeneralQS, 0.0};
  const double slope = f.c.left_slope();
  const double abs_a = std::abs(f.a);
  if (std::abs(abs_a - 1.0) <= tol && std::abs(slope) <= tol) return {MapClass::Isometry, 1.0};
  const double expected = f.a * std::log(abs_a);
  if (std::abs(slope - expected) <= tol * std::max(1.0, std::abs(expected))) {
    return {MapClass::Similarity, abs_a};
  }
  return {MapClass::GeneralQS, 0.0};
}

}  // namespace qsb
