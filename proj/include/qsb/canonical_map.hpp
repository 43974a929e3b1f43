#pragma once

#include <cstddef>
#include <string_view>

#include "qsb/boundary_point.hpp"
#include "qsb/pl_function.hpp"

namespace qsb {

// F(x, y) = (a x + c(y), a y + b) with a != 0 and c Lipschitz (piecewise linear here).
// Every quasisymmetric self-map of (R^2, D) has this form.
struct CanonicalQSMap {
  double a = 1.0;
  double b = 0.0;
  PLFunction c;

  // Throws InvalidArgument when a == 0 or a coefficient is not finite.
  static CanonicalQSMap make(double a, double b, PLFunction c);

  friend bool operator==(const CanonicalQSMap&, const CanonicalQSMap&) = default;
};

BoundaryPoint apply(const CanonicalQSMap& f, BoundaryPoint p);

CanonicalQSMap identity_map();
// (x, y) -> (x + u, y + v)
CanonicalQSMap make_translation(double u, double v);
// (x, y) -> (-x, -y)
CanonicalQSMap make_flip();
// (x, y) -> (e^t (x + t y), e^t y); scales D by e^t.
CanonicalQSMap make_lambda(double t);
// Boundary map of left translation by g = ((gx, gy), gt).
CanonicalQSMap make_Tg(double gx, double gy, double gt);

// F1 o F2
CanonicalQSMap compose(const CanonicalQSMap& f1, const CanonicalQSMap& f2,
                       std::size_t breakpoint_limit = kDefaultBreakpointLimit);
CanonicalQSMap invert(const CanonicalQSMap& f);

// |a| + Lip(c) + |a ln|a||, an upper bound for D(F p, F q) / D(p, q).
double lipschitz_bound(const CanonicalQSMap& f);

enum class MapClass { Isometry, Similarity, GeneralQS };

std::string_view to_string(MapClass c);

struct Classification {
  MapClass kind;
  double factor;  // similarity factor |a| (1 for isometries, 0 for GeneralQS)
};

// Isometry: |a| = 1 and c constant. Similarity: c(y) = a ln|a| y + c0.
// Slopes are compared exactly on the piecewise-linear representation (1e-12).
Classification classify(const CanonicalQSMap& f);

}  // namespace qsb
