#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "qsb/boundary_point.hpp"
#include "qsb/pl_function.hpp"

namespace qsb {

using Vec3 = Eigen::Vector3d;

// A 3-dimensional Lie algebra with an orthonormal basis e1, e2, e3, given by its
// structure constants c[i][j][k] = <[e_i, e_j], e_k>. Left-invariant geometry is
// computed at the identity only.
//
// Curvature convention: R(x,y)z = D_x D_y z - D_y D_x z - D_[x,y] z and
// K(u,v) = <R(u,v)v, u>, so round spheres have K > 0.
class MetricLieAlgebra {
 public:
  using Table = std::array<std::array<Vec3, 3>, 3>;  // table[i][j] = [e_i, e_j]

  explicit MetricLieAlgebra(const Table& brackets);

  // [e3,e1] = e1, [e3,e2] = e1 + e2, [e1,e2] = 0: ad(e3) acts on span(e1,e2) by A.
  static MetricLieAlgebra solvable_GA();
  // Bi-invariant so(3): [e1,e2] = e3 and cyclic. K = 1/4 on every plane.
  static MetricLieAlgebra so3();
  // ad(e3) = diag(l1, l2) on span(e1, e2).
  static MetricLieAlgebra diagonal(double l1, double l2);

  Vec3 bracket(const Vec3& x, const Vec3& y) const;
  Vec3 levi_civita(const Vec3& x, const Vec3& y) const;
  Vec3 curvature(const Vec3& x, const Vec3& y, const Vec3& z) const;

  // max over basis triples of |Jacobi sum|
  double jacobi_residual() const;
  double antisymmetry_residual() const;

  // <R(e_i,e_j)e_k, e_l>
  double R(int i, int j, int k, int l) const { return riemann_[i][j][k][l]; }

 private:
  Table brackets_;
  std::array<std::array<Vec3, 3>, 3> nabla_{};  // nabla_[i][j] = D_{e_i} e_j
  double riemann_[3][3][3][3] = {};
};

struct TangentPlane {
  Vec3 u;
  Vec3 v;

  // Gram-Schmidt; throws InvalidArgument for (near) parallel inputs.
  static TangentPlane from_vectors(const Vec3& a, const Vec3& b);
  // u from the polar/azimuth angles (alpha, beta); v at angle gamma in the
  // orthogonal complement of u.
  static TangentPlane from_angles(double alpha, double beta, double gamma);
};

double sectional_curvature(const MetricLieAlgebra& g, const TangentPlane& plane);

// Published pinching constants -(6 + sqrt 29)/4 and -(6 - sqrt 29)/4. The
// curvature operator of solvable_GA() gives -(5 +- 2 sqrt 5)/4 instead.
double claimed_curvature_lower();
double claimed_curvature_upper();

struct CurvatureExtremes {
  double min;
  double max;
  std::array<double, 3> argmin;  // (alpha, beta, gamma)
  std::array<double, 3> argmax;
};

struct ExtremesOptions {
  int grid = 180;         // per angle
  int starts = 8;         // best grid cells refined per extreme
  int sweeps = 400;       // cyclic golden-section sweeps per start
  unsigned threads = 1;
};

// Grid over the three plane angles, then cyclic golden-section refinement
// from the best cells.
CurvatureExtremes curvature_extremes(const MetricLieAlgebra& g, const ExtremesOptions& opts = {});

// Extremes of K as eigenvalues of the curvature operator on bivectors. In
// dimension 3 every unit bivector is a plane, so these are exact.
std::array<double, 2> curvature_operator_extremes(const MetricLieAlgebra& g);

struct PlaneSample {
  std::array<double, 3> angles;
  double K;
};

// Planes from seeded uniform angles (alpha via cos alpha uniform).
std::vector<PlaneSample> random_plane_curvatures(const MetricLieAlgebra& g, std::size_t n,
                                                 std::uint64_t seed, unsigned threads = 1);

struct TauCheck {
  double orthogonality_residual;
  double automorphism_residual;
  double involution_residual;
  bool pass;
};

// The differential diag(-1,-1,1) of ((x,y),t) -> ((-x,-y),t) at the identity.
TauCheck check_tau_isometry(const MetricLieAlgebra& g);

struct GPoint {
  double x;
  double y;
  double t;
};

// ((x + C(y), y + b), t)
GPoint lift_F_Cb(const PLFunction& C, double b, GPoint p);

struct HorosphereDistortion {
  double before;
  double after;
  double gap() const { return after - before; }
};

HorosphereDistortion horosphere_distortion(const PLFunction& C, double b, double t,
                                           BoundaryPoint v, BoundaryPoint w);

}  // namespace qsb
