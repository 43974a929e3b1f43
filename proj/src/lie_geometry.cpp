#include "qsb/lie_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qsb/errors.hpp"
#include "qsb/parallel.hpp"
#include "qsb/quasimetrics.hpp"
#include "qsb/random.hpp"

namespace qsb {

MetricLieAlgebra::MetricLieAlgebra(const Table& brackets) : brackets_(brackets) {
  auto c = [&](int i, int j, int k) { return brackets_[i][j](k); };
  // Koszul: 2<D_{e_i} e_j, e_k> = c_ijk - c_jki + c_kij
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Vec3 v = Vec3::Zero();
      for (int k = 0; k < 3; ++k) v(k) = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
      nabla_[i][j] = v;
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 r = curvature(Vec3::Unit(i), Vec3::Unit(j), Vec3::Unit(k));
        for (int l = 0; l < 3; ++l) riemann_[i][j][k][l] = r(l);
      }
    }
  }
}

MetricLieAlgebra MetricLieAlgebra::solvable_GA() {
  Table t{};
  for (auto& row : t) row.fill(Vec3::Zero());
  t[2][0] = Vec3(1, 0, 0);
  t[0][2] = -t[2][0];
  t[2][1] = Vec3(1, 1, 0);
  t[1][2] = -t[2][1];
  return MetricLieAlgebra(t);
}

MetricLieAlgebra MetricLieAlgebra::so3() {
  Table t{};
  for (auto& row : t) row.fill(Vec3::Zero());
  t[0][1] = Vec3(0, 0, 1);
  t[1][0] = -t[0][1];
  t[1][2] = Vec3(1, 0, 0);
  t[2][1] = -t[1][2];
  t[2][0] = Vec3(0, 1, 0);
  t[0][2] = -t[2][0];
  return MetricLieAlgebra(t);
}

MetricLieAlgebra MetricLieAlgebra::diagonal(double l1, double l2) {
  Table t{};
  for (auto& row : t) row.fill(Vec3::Zero());
  t[2][0] = Vec3(l1, 0, 0);
  t[0][2] = -t[2][0];
  t[2][1] = Vec3(0, l2, 0);
  t[1][2] = -t[2][1];
  return MetricLieAlgebra(t);
}

Vec3 MetricLieAlgebra::bracket(const Vec3& x, const Vec3& y) const {
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out += x(i) * y(j) * brackets_[i][j];
  }
  return out;
}

Vec3 MetricLieAlgebra::levi_civita(const Vec3& x, const Vec3& y) const {
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out += x(i) * y(j) * nabla_[i][j];
  }
  return out;
}

Vec3 MetricLieAlgebra::curvature(const Vec3& x, const Vec3& y, const Vec3& z) const {
  return levi_civita(x, levi_civita(y, z)) - levi_civita(y, levi_civita(x, z)) -
         levi_civita(bracket(x, y), z);
}

double MetricLieAlgebra::jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        const Vec3 a = Vec3::Unit(i), b = Vec3::Unit(j), c = Vec3::Unit(k);
        const Vec3 s = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) +
                       bracket(c, bracket(a, b));
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

double MetricLieAlgebra::antisymmetry_residual() const {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      worst = std::max(worst, (brackets_[i][j] + brackets_[j][i]).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

TangentPlane TangentPlane::from_vectors(const Vec3& a, const Vec3& b) {
  const double na = a.norm();
  if (!(na > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "plane vector is zero");
  const Vec3 u = a / na;
  Vec3 v = b - b.dot(u) * u;
  const double nv = v.norm();
  if (!(nv > 1e-12 * std::max(1.0, b.norm()))) {
    throw NumericalError(ErrorKind::InvalidArgument, "plane vectors are parallel");
  }
  v /= nv;
  // one re-orthogonalization pass
  v -= v.dot(u) * u;
  v.normalize();
  return {u, v};
}

TangentPlane TangentPlane::from_angles(double alpha, double beta, double gamma) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  const Vec3 u(sa * cb, sa * sb, ca);
  const Vec3 p(ca * cb, ca * sb, -sa);
  const Vec3 q(-sb, cb, 0.0);
  return {u, std::cos(gamma) * p + std::sin(gamma) * q};
}

double sectional_curvature(const MetricLieAlgebra& g, const TangentPlane& plane) {
  const Vec3& u = plane.u;
  const Vec3& v = plane.v;
  double k = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double uv = u(i) * v(j);
      if (uv == 0.0) continue;
      for (int a = 0; a < 3; ++a) {
        for (int l = 0; l < 3; ++l) k += uv * v(a) * u(l) * g.R(i, j, a, l);
      }
    }
  }
  return k;
}

double claimed_curvature_lower() { return -(6.0 + std::sqrt(29.0)) / 4.0; }
double claimed_curvature_upper() { return -(6.0 - std::sqrt(29.0)) / 4.0; }

std::array<double, 2> curvature_operator_extremes(const MetricLieAlgebra& g) {
  // orthonormal bivector basis e1^e2, e1^e3, e2^e3
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  Eigen::Matrix3d M;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      M(r, c) = g.R(pairs[r][0], pairs[r][1], pairs[c][1], pairs[c][0]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(0.5 * (M + M.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(2)};
}

namespace {

using Angles = std::array<double, 3>;

double K_at(const MetricLieAlgebra& g, const Angles& a) {
  return sectional_curvature(g, TangentPlane::from_angles(a[0], a[1], a[2]));
}

// Minimizes f on [lo, hi].
double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Cyclic coordinate golden-section search minimizing sign * K.
std::pair<double, Angles> refine(const MetricLieAlgebra& g, Angles x, double sign, double h0,
                                 int sweeps) {
  double best = sign * K_at(g, x);
  double h = h0;
  for (int s = 0; s < sweeps; ++s) {
    for (int c = 0; c < 3; ++c) {
      auto f = [&](double v) {
        Angles y = x;
        y[c] = v;
        return sign * K_at(g, y);
      };
      const double v = golden_section(f, x[c] - h, x[c] + h, 1e-12);
      const double fv = f(v);
      if (fv < best) {
        best = fv;
        x[c] = v;
      }
    }
    h = std::max(0.9 * h, 1e-7);
  }
  return {sign * best, x};
}

struct Candidate {
  double value;  // already signed: smaller is better
  Angles at;
};

void keep_best(std::vector<Candidate>& list, const Candidate& c, std::size_t n) {
  if (list.size() < n) {
    list.push_back(c);
    return;
  }
  auto worst = std::max_element(list.begin(), list.end(), [](const Candidate& a, const Candidate& b) {
    return a.value < b.value;
  });
  if (c.value < worst->value) *worst = c;
}

}  // namespace

CurvatureExtremes curvature_extremes(const MetricLieAlgebra& g, const ExtremesOptions& opts) {
  const int n = std::max(2, opts.grid);
  const std::size_t starts = static_cast<std::size_t>(std::max(1, opts.starts));
  const double da = std::numbers::pi / n;
  const double db = 2.0 * std::numbers::pi / n;
  const double dg = std::numbers::pi / n;

  // per-slab candidate lists, merged in slab order for determinism
  std::vector<std::vector<Candidate>> lows(n), highs(n);
  parallel_for(static_cast<std::size_t>(n), opts.threads, [&](std::size_t ia) {
    for (int ib = 0; ib < n; ++ib) {
      for (int ig = 0; ig < n; ++ig) {
        const Angles a{(ia + 0.5) * da, (ib + 0.5) * db, (ig + 0.5) * dg};
        const double k = K_at(g, a);
        keep_best(lows[ia], {k, a}, starts);
        keep_best(highs[ia], {-k, a}, starts);
      }
    }
  });
  std::vector<Candidate> low, high;
  for (int ia = 0; ia < n; ++ia) {
    for (const auto& c : lows[ia]) keep_best(low, c, starts);
    for (const auto& c : highs[ia]) keep_best(high, c, starts);
  }

  const double h0 = 2.0 * db;
  CurvatureExtremes out{std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity(), {}, {}};
  for (const auto& c : low) {
    auto [v, at] = refine(g, c.at, 1.0, h0, opts.sweeps);
    if (v < out.min) {
      out.min = v;
      out.argmin = at;
    }
  }
  for (const auto& c : high) {
    auto [v, at] = refine(g, c.at, -1.0, h0, opts.sweeps);
    if (v > out.max) {
      out.max = v;
      out.argmax = at;
    }
  }
  return out;
}

std::vector<PlaneSample> random_plane_curvatures(const MetricLieAlgebra& g, std::size_t n,
                                                 std::uint64_t seed, unsigned threads) {
  std::vector<PlaneSample> out(n);
  parallel_for(n, threads, [&](std::size_t i) {
    auto rng = sample_rng(seed, i);
    const Angles a{std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 2.0 * std::numbers::pi),
                   rng.uniform(0.0, std::numbers::pi)};
    out[i] = {a, K_at(g, a)};
  });
  return out;
}

TauCheck check_tau_isometry(const MetricLieAlgebra& g) {
  const Eigen::Matrix3d T = Eigen::Vector3d(-1.0, -1.0, 1.0).asDiagonal();
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  TauCheck out{};
  out.orthogonality_residual = (T.transpose() * T - I).cwiseAbs().maxCoeff();
  out.involution_residual = (T * T - I).cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Vec3 lhs = T * g.bracket(Vec3::Unit(i), Vec3::Unit(j));
      const Vec3 rhs = g.bracket(T * Vec3::Unit(i), T * Vec3::Unit(j));
      out.automorphism_residual =
          std::max(out.automorphism_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  out.pass = out.orthogonality_residual < 1e-14 && out.involution_residual < 1e-14 &&
             out.automorphism_residual < 1e-14;
  return out;
}

GPoint lift_F_Cb(const PLFunction& C, double b, GPoint p) { return {p.x + C(p.y), p.y + b, p.t}; }

HorosphereDistortion horosphere_distortion(const PLFunction& C, double b, double t,
                                           BoundaryPoint v, BoundaryPoint w) {
  const auto fv = lift_F_Cb(C, b, {v.x, v.y, t});
  const auto fw = lift_F_Cb(C, b, {w.x, w.y, t});
  return {horosphere_distance(t, v, w),
          horosphere_distance(t, {fv.x, fv.y}, {fw.x, fw.y})};
}

}  // namespace qsb
