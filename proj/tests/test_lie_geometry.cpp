#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qsb/errors.hpp"
#include "qsb/lie_geometry.hpp"
#include "test_support.hpp"

using namespace qsb;

namespace {

const Vec3 e1 = Vec3::UnitX();
const Vec3 e2 = Vec3::UnitY();
const Vec3 e3 = Vec3::UnitZ();

double K(const MetricLieAlgebra& g, const Vec3& a, const Vec3& b) {
  return sectional_curvature(g, TangentPlane::from_vectors(a, b));
}

}  // namespace

TEST_CASE("bracket table of the solvable algebra") {
  const auto g = MetricLieAlgebra::solvable_GA();
  CHECK(g.jacobi_residual() < 1e-14);
  CHECK(g.antisymmetry_residual() == 0.0);
  CHECK((g.bracket(e3, e1) - e1).norm() == 0.0);
  CHECK((g.bracket(e3, e2) - (e1 + e2)).norm() == 0.0);
  CHECK(g.bracket(e1, e2).norm() == 0.0);
}

TEST_CASE("Levi-Civita connection") {
  const auto g = MetricLieAlgebra::solvable_GA();
  const Vec3 d11 = g.levi_civita(e1, e1);
  CHECK(d11.x() == doctest::Approx(0.0));
  CHECK(d11.y() == doctest::Approx(0.0));
  CHECK((g.levi_civita(e3, e1) - g.levi_civita(e1, e3) - e1).norm() < 1e-15);
  CHECK((g.levi_civita(e1, e2) - g.levi_civita(e2, e1)).norm() < 1e-15);

  SplitMix64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Vec3 x = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec3 y = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec3 z = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK((g.levi_civita(x, y) - g.levi_civita(y, x) - g.bracket(x, y)).norm() < 1e-14);
    CHECK(g.levi_civita(x, y).dot(z) + y.dot(g.levi_civita(x, z)) == doctest::Approx(0.0));
  }
}

TEST_CASE("curvature oracles") {
  SplitMix64 rng(2);
  const auto s = MetricLieAlgebra::so3();
  for (int k = 0; k < 50; ++k) {
    const Vec3 a(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec3 b(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(K(s, a, b) == doctest::Approx(0.25));
  }
  const auto h = MetricLieAlgebra::diagonal(1, 1);
  for (int k = 0; k < 50; ++k) {
    const Vec3 a(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    const Vec3 b(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(K(h, a, b) == doctest::Approx(-1.0));
  }
  // ad(e3) = diag(l1, l2): K(e1,e2) = -l1 l2, K(e1,e3) = -l1^2, K(e2,e3) = -l2^2
  const auto d = MetricLieAlgebra::diagonal(1, 2);
  CHECK(K(d, e1, e2) == doctest::Approx(-2.0));
  CHECK(K(d, e1, e3) == doctest::Approx(-1.0));
  CHECK(K(d, e2, e3) == doctest::Approx(-4.0));
  const auto ext = curvature_operator_extremes(d);
  CHECK(ext[0] == doctest::Approx(-4.0));
  CHECK(ext[1] == doctest::Approx(-1.0));
}

TEST_CASE("curvature of the solvable algebra on coordinate planes") {
  // Hand-evaluated curvature operator in the basis e2^e3, e3^e1, e1^e2:
  // [[-1.75, 1, 0], [1, -0.75, 0], [0, 0, -0.75]]
  const auto g = MetricLieAlgebra::solvable_GA();
  CHECK(K(g, e2, e3) == doctest::Approx(-1.75));
  CHECK(K(g, e3, e1) == doctest::Approx(-0.75));
  CHECK(K(g, e1, e2) == doctest::Approx(-0.75));
  const double lo = -(5 + 2 * std::sqrt(5.0)) / 4, hi = -(5 - 2 * std::sqrt(5.0)) / 4;
  const auto ext = curvature_operator_extremes(g);
  CHECK(ext[0] == doctest::Approx(lo).epsilon(1e-12));
  CHECK(ext[1] == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("extremal search reaches the operator eigenvalues") {
  const auto g = MetricLieAlgebra::solvable_GA();
  ExtremesOptions opts;
  opts.threads = 2;
  const auto ext = curvature_extremes(g, opts);
  const auto op = curvature_operator_extremes(g);
  CHECK(ext.min == doctest::Approx(op[0]).epsilon(1e-9));
  CHECK(ext.max == doctest::Approx(op[1]).epsilon(1e-9));
  const auto [a, b, c] = ext.argmin;
  CHECK(sectional_curvature(g, TangentPlane::from_angles(a, b, c)) == doctest::Approx(ext.min));
  CHECK(claimed_curvature_lower() == doctest::Approx(-2.846291).epsilon(1e-6));
  CHECK(claimed_curvature_upper() == doctest::Approx(-0.153709).epsilon(1e-5));
}

TEST_CASE("property: random planes are negatively curved within the operator range") {
  const auto g = MetricLieAlgebra::solvable_GA();
  const auto op = curvature_operator_extremes(g);
  const auto samples = random_plane_curvatures(g, 10000, 3, 2);
  CHECK(samples.size() == 10000);
  for (const auto& s : samples) {
    CHECK(s.K < 0.0);
    CHECK(s.K >= op[0] - 1e-12);
    CHECK(s.K <= op[1] + 1e-12);
  }
  const auto again = random_plane_curvatures(g, 10000, 3, 1);
  CHECK(again[9999].K == samples[9999].K);
}

TEST_CASE("property: sectional curvature depends only on the plane") {
  const auto g = MetricLieAlgebra::solvable_GA();
  SplitMix64 rng(4);
  for (int k = 0; k < 500; ++k) {
    const auto p = TangentPlane::from_angles(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI),
                                             rng.uniform(0, 2 * M_PI));
    CHECK(std::abs(p.u.norm() - 1) < 1e-12);
    CHECK(std::abs(p.v.norm() - 1) < 1e-12);
    CHECK(std::abs(p.u.dot(p.v)) < 1e-12);
    const double k0 = sectional_curvature(g, p);
    CHECK(std::abs(sectional_curvature(g, {p.v, p.u}) - k0) < 1e-12);
    const double th = rng.uniform(0, 2 * M_PI);
    const TangentPlane r{std::cos(th) * p.u + std::sin(th) * p.v,
                         -std::sin(th) * p.u + std::cos(th) * p.v};
    CHECK(std::abs(sectional_curvature(g, r) - k0) < 1e-12);
  }
  CHECK_THROWS_AS(TangentPlane::from_vectors(e1, 2 * e1), NumericalError);
}

TEST_CASE("tau is an isometric automorphism") {
  const auto c = check_tau_isometry(MetricLieAlgebra::solvable_GA());
  CHECK(c.pass);
  CHECK(c.orthogonality_residual == 0.0);
  CHECK(c.automorphism_residual == 0.0);
  CHECK(c.involution_residual == 0.0);
}

TEST_CASE("lifted shear maps") {
  const auto zero = PLFunction::constant(0);
  const auto p = lift_F_Cb(zero, 0, {1.5, -2, 0.3});
  CHECK(p.x == 1.5);
  CHECK(p.y == -2.0);
  CHECK(p.t == 0.3);
  const auto q = lift_F_Cb(zero, 1, {0, 0, 5});
  CHECK(q.x == 0.0);
  CHECK(q.y == 1.0);
  CHECK(q.t == 5.0);

  SplitMix64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const auto C = testing::random_pl(rng);
    const double b = rng.uniform(-3, 3);
    const GPoint g{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const auto h = lift_F_Cb(C, b, g);
    CHECK(h.t == g.t);
    const auto trace = apply(CanonicalQSMap::make(1, b, C), {g.x, g.y});
    CHECK(h.x == trace.x);
    CHECK(h.y == trace.y);
  }
}

TEST_CASE("horosphere distortion") {
  const auto zero = PLFunction::constant(0);
  for (double t : {-2.0, 0.0, 3.0}) {
    CHECK(horosphere_distortion(zero, 0, t, {1, 2}, {-1, 0}).gap() == 0.0);
    CHECK(horosphere_distortion(zero, 1.5, t, {1, 2}, {-1, 0}).gap() == doctest::Approx(0.0));
  }
  const auto d = horosphere_distortion(PLFunction::affine(1, 0), 0, 0, {0, 0}, {0, 1});
  CHECK(d.before == doctest::Approx(1.0));
  CHECK(d.after == doctest::Approx(std::sqrt(2.0)));
}
