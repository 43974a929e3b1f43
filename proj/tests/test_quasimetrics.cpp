#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qsb/errors.hpp"
#include "qsb/quasimetrics.hpp"
#include "test_support.hpp"

using namespace qsb;
using qsb::testing::rel_close;

namespace {

constexpr double kE = std::numbers::e;

// 2x2 matrix exponential by truncated Taylor series of tA.
Mat2 exp_taylor(double t) {
  Mat2 sum{{1, 0, 0, 1}};
  Mat2 term{{1, 0, 0, 1}};
  const Mat2 tA{{t, t, 0, t}};
  for (int k = 1; k < 60; ++k) {
    term = term * tA;
    for (double& v : term.m) v /= k;
    for (int i = 0; i < 4; ++i) sum.m[i] += term.m[i];
  }
  return sum;
}

// Smallest root of norm(e^{-tA} v) = 1 found by a dense scan from below, then bisection.
template <class Norm>
double scan_oracle(BoundaryPoint v, Norm norm) {
  auto g = [&](double t) {
    const double e = std::exp(-t);
    return norm(e * (v.x - t * v.y), e * v.y) - 1.0;
  };
  double lo = -50.0;
  for (double t = -50.0; t < 50.0; t += 1e-3) {
    if (g(t) <= 0.0) {
      double a = lo, b = t;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        (g(m) > 0.0 ? a : b) = m;
      }
      return std::exp(0.5 * (a + b));
    }
    lo = t;
  }
  return NAN;
}

double sup_oracle(BoundaryPoint v) {
  return scan_oracle(v, [](double a, double b) { return std::max(std::abs(a), std::abs(b)); });
}
double euclid_oracle(BoundaryPoint v) {
  return scan_oracle(v, [](double a, double b) { return std::hypot(a, b); });
}

}  // namespace

TEST_CASE("exp_tA matches the Taylor series") {
  for (double t : {0.0, 1.0, -1.0, 0.37, -2.5}) {
    const Mat2 a = exp_tA(t), b = exp_taylor(t);
    for (int i = 0; i < 4; ++i) CHECK(a.m[i] == doctest::Approx(b.m[i]).epsilon(1e-13));
  }
  CHECK(exp_tA(1.0)(0, 1) == doctest::Approx(kE));
  CHECK(exp_tA(-1.0)(0, 1) == doctest::Approx(-1.0 / kE));
  CHECK(exp_tA(0.0).m == Mat2{}.m);
}

TEST_CASE("exp_tA is a one-parameter group") {
  SplitMix64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const double s = rng.uniform(-3, 3), t = rng.uniform(-3, 3);
    const Mat2 lhs = exp_tA(s) * exp_tA(t), rhs = exp_tA(s + t);
    for (int i = 0; i < 4; ++i) CHECK(rel_close(lhs.m[i], rhs.m[i], 1e-12));
  }
}

TEST_CASE("horosphere distance") {
  CHECK(horosphere_distance(0, {1, 0}, {0, 0}) == 1.0);
  CHECK(horosphere_distance(1, {1, 0}, {0, 0}) == doctest::Approx(1.0 / kE));
  CHECK(horosphere_distance(0, {3, 4}, {3, 4}) == 0.0);
}

TEST_CASE("closed-form D") {
  CHECK(dist_D({0, 0}, {5, 0}) == 5.0);
  CHECK(dist_D({2, -7}, {2, -7}) == 0.0);
  CHECK(dist_D({0, 0}, {0, kE}) == doctest::Approx(kE));
}

TEST_CASE("D_s examples") {
  CHECK(dist_Ds({0, 0}, {5, 0}) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(dist_Ds({0, 0}, {0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist_Ds({0, 0}, {kE + 1, 1}) == doctest::Approx(kE).epsilon(1e-11));
  CHECK(dist_Ds({1, 1}, {1, 1}) == 0.0);
}

TEST_CASE("D_e examples") {
  CHECK(dist_De({0, 0}, {5, 0}) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(dist_De({0, 0}, {0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dist_De({1, 1}, {1, 1}) == 0.0);
}

TEST_CASE("D_s and D_e agree with a dense-scan oracle") {
  SplitMix64 rng(11);
  for (int k = 0; k < 60; ++k) {
    const BoundaryPoint v{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    CHECK(rel_close(dist_Ds({0, 0}, v), sup_oracle(v), 1e-9));
    CHECK(rel_close(dist_De({0, 0}, v), euclid_oracle(v), 1e-9));
  }
}

TEST_CASE("norm comparison constant") {
  const double a = std::sqrt(6.0 - std::sqrt(29.0)) / 2.0;
  CHECK(norm_comparison_constant() == doctest::Approx(std::pow(2.0, 1.0 / (2.0 * a))));
  CHECK(norm_comparison_constant() == doctest::Approx(2.420532).epsilon(1e-6));
  CHECK(norm_comparison_constant() == doctest::Approx(2.4207).epsilon(1e-3));

  const auto c = norm_comparison_check({0, 0}, {5, 0});
  CHECK(c.holds);
  CHECK(c.ds == doctest::Approx(5.0));
  CHECK(c.de == doctest::Approx(5.0));
}

TEST_CASE("sandwich examples") {
  auto s = comparison_DsD_check({0, 0}, {kE + 1, 1});
  CHECK(s.d == doctest::Approx(kE + 1));
  CHECK(s.ds == doctest::Approx(kE));
  CHECK(s.holds);
  s = comparison_DsD_check({0, 0}, {5, 0});
  CHECK(s.d == 5.0);
  CHECK(s.ds == doctest::Approx(5.0));
  s = comparison_DsD_check({0, 0}, {0, 1});
  CHECK(s.d == 1.0);
  CHECK(s.ds == doctest::Approx(1.0));
}

TEST_CASE("Hausdorff distance between horizontal lines") {
  CHECK(hausdorff_distance_lines(3, 3) == 0.0);
  CHECK(hausdorff_distance_lines(0, 1) == doctest::Approx(1.0));
  CHECK(hausdorff_distance_lines(0, kE) == doctest::Approx(kE));
  const double coarse = hausdorff_distance_lines_truncated(0, kE, 4);
  const double fine = hausdorff_distance_lines_truncated(0, kE, 64);
  CHECK(std::abs(fine - kE) <= std::abs(coarse - kE) + 1e-12);
  CHECK(fine == doctest::Approx(kE).epsilon(0.02));
}

TEST_CASE("axiom profile") {
  SUBCASE("horizontal triples give a metric") {
    SamplerConfig cfg;
    cfg.distribution = PairDistribution::HorizontalLine;
    cfg.count = 500;
    const auto prof = profile_quasimetric(QuasimetricKind::ClosedFormD, cfg);
    CHECK(prof.quasi_triangle_constant == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(prof.snowflake_epsilon == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(prof.sample_count > 0);
  }
  SUBCASE("vertical triple violates the triangle inequality") {
    const std::vector<PointTriple> t{{{0, 0}, {0, 10}, {0, 20}}};
    const auto prof = profile_quasimetric(QuasimetricKind::ClosedFormD, t);
    // d(x,z) = 20 ln 20 against d(x,y) + d(y,z) = 20 ln 10
    CHECK(prof.quasi_triangle_constant ==
          doctest::Approx(std::log(20.0) / std::log(10.0)).epsilon(1e-12));
    const double a = 10 * std::log(10.0), c = 20 * std::log(20.0);
    const double eps = prof.snowflake_epsilon;
    CHECK(eps < 1.0);
    CHECK(2 * std::pow(a, eps) == doctest::Approx(std::pow(c, eps)).epsilon(1e-9));
    CHECK(eps == doctest::Approx(std::log(2.0) / std::log(c / a)).epsilon(1e-9));
  }
  SUBCASE("identical points are skipped") {
    const std::vector<PointTriple> t{{{1, 1}, {1, 1}, {1, 1}}};
    const auto prof = profile_quasimetric(QuasimetricKind::ClosedFormD, t);
    CHECK(prof.sample_count == 0);
    CHECK(prof.quasi_triangle_constant == 1.0);
  }
}

TEST_CASE("property: symmetry, translation invariance, horizontal restriction") {
  SamplerConfig cfg;
  cfg.count = 3000;
  cfg.seed = 5;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const auto [p, q] = sample_pair(cfg, i);
    for (auto kind : {QuasimetricKind::ClosedFormD, QuasimetricKind::SuperNormDs,
                      QuasimetricKind::EuclideanDe}) {
      const double d = dist(kind, p, q);
      CHECK(rel_close(d, dist(kind, q, p), 1e-9));
      // Shifting loses absolute precision in q - p, so only well-separated pairs.
      if (d > 1e-3 && d < 1e6) {
        const BoundaryPoint s{1.5, -2.25};
        CHECK(rel_close(d, dist(kind, p + s, q + s), 1e-7));
      }
    }
    CHECK(dist_D(p, {q.x, p.y}) == doctest::Approx(std::abs(q.x - p.x)));
  }
}

TEST_CASE("property: sandwich and the two D_s routes") {
  SamplerConfig cfg;
  cfg.count = 20000;
  cfg.seed = 9;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < cfg.count; ++i) {
    const auto [p, q] = sample_pair(cfg, i);
    if (!comparison_DsD_check(p, q).holds) ++violations;
    if (!norm_comparison_check(p, q).holds) ++violations;
    if (i % 10 == 0) {
      const double a = dist_Ds(p, q), b = dist_Ds_bisection(p, q);
      CHECK(rel_close(a, b, 1e-9));
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("sphere points lie on the sphere") {
  SplitMix64 rng(21);
  for (auto kind : {QuasimetricKind::ClosedFormD, QuasimetricKind::SuperNormDs,
                    QuasimetricKind::EuclideanDe}) {
    for (int k = 0; k < 200; ++k) {
      const BoundaryPoint c{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const double r = std::exp(rng.uniform(-5, 5));
      const BoundaryPoint p = sphere_point(kind, c, r, rng.uniform());
      CHECK(rel_close(dist(kind, c, p), r, 1e-9));
    }
  }
}

TEST_CASE("kind and distribution parsing") {
  CHECK(parse_kind("D") == QuasimetricKind::ClosedFormD);
  CHECK(parse_kind(to_string(QuasimetricKind::EuclideanDe)) == QuasimetricKind::EuclideanDe);
  CHECK_FALSE(parse_kind("nope").has_value());
  CHECK_FALSE(parse_distribution("nope").has_value());
}
