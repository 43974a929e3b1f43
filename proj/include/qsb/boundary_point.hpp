#pragma once

#include <array>
#include <cmath>

namespace qsb {

// A point of the punctured boundary, identified with the plane.
struct BoundaryPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;
  friend BoundaryPoint operator+(BoundaryPoint p, BoundaryPoint q) { return {p.x + q.x, p.y + q.y}; }
  friend BoundaryPoint operator-(BoundaryPoint p, BoundaryPoint q) { return {p.x - q.x, p.y - q.y}; }

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

// Row-major 2x2 matrix.
struct Mat2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

  double operator()(int r, int c) const { return m[2 * r + c]; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return Mat2{{a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                 a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)}};
  }

  BoundaryPoint apply(BoundaryPoint v) const {
    return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y};
  }
};

// e^{tA} for A = [[1,1],[0,1]]: [[e^t, t e^t], [0, e^t]].
inline Mat2 exp_tA(double t) {
  const double et = std::exp(t);
  return Mat2{{et, t * et, 0.0, et}};
}

// u ln|u| with the convention 0 ln 0 = 0. Subnormal-scale inputs are treated as 0.
inline double xlogx(double u) {
  if (std::abs(u) < 1e-300) return 0.0;
  return u * std::log(std::abs(u));
}

}  // namespace qsb
