#pragma once

#include <cstddef>

#include "qsb/canonical_map.hpp"
#include "qsb/pl_function.hpp"

namespace qsb {

// Element (C, b) of the shear subgroup: F_{C,b}(x, y) = (x + C(y), y + b).
// Under composition (C1,b1)(C2,b2) = (C2 + C1(. + b2), b1 + b2), i.e. the
// opposite of the semidirect product of Lipschitz functions by translations.
struct ShearElement {
  PLFunction C = PLFunction::constant(0.0);
  double b = 0.0;

  friend bool operator==(const ShearElement&, const ShearElement&) = default;
};

// (C, b, t, sigma) in (shears) x| (R x Z2). Realized as pi^sigma o lambda_t o F_{C,b}.
struct QSGroupElement {
  PLFunction C = PLFunction::constant(0.0);
  double b = 0.0;
  double t = 0.0;
  int sigma = 0;  // 0 or 1

  ShearElement shear() const { return {C, b}; }

  friend bool operator==(const QSGroupElement&, const QSGroupElement&) = default;
};

// lambda_t F_{C,b} lambda_t^{-1}: C'(y) = e^t C(e^{-t} y) + b t e^t, b' = e^t b.
ShearElement act_dilation(double t, const ShearElement& h);
// pi F_{C,b} pi: C''(y) = -C(-y), b'' = -b.
ShearElement act_flip(const ShearElement& h);

ShearElement shear_mul(const ShearElement& h1, const ShearElement& h2,
                       std::size_t breakpoint_limit = kDefaultBreakpointLimit);
ShearElement shear_inv(const ShearElement& h);

QSGroupElement group_identity();
QSGroupElement group_mul(const QSGroupElement& g1, const QSGroupElement& g2,
                         std::size_t breakpoint_limit = kDefaultBreakpointLimit);
QSGroupElement group_inv(const QSGroupElement& g);

CanonicalQSMap realize(const QSGroupElement& g);
QSGroupElement factorize(const CanonicalQSMap& f);

// Field-wise comparison at a relative tolerance (breakpoints, slopes, b, t, sigma).
bool approx_equal(const PLFunction& f, const PLFunction& g, double rel_tol);
bool approx_equal(const QSGroupElement& g1, const QSGroupElement& g2, double rel_tol);

}  // namespace qsb
