#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qsb/canonical_map.hpp"
#include "qsb/errors.hpp"
#include "qsb/quasimetrics.hpp"
#include "test_support.hpp"

using namespace qsb;
using qsb::testing::random_map;
using qsb::testing::random_pl;
using qsb::testing::rel_close;

namespace {

constexpr double kE = std::numbers::e;

PLFunction abs_pl(double k) { return PLFunction::from_breakpoints({{0.0, 0.0}}, -k, k); }

bool same_point(BoundaryPoint p, BoundaryPoint q, double tol) {
  return rel_close(p.x, q.x, tol) && rel_close(p.y, q.y, tol);
}

}  // namespace

TEST_CASE("apply") {
  CHECK(apply(identity_map(), {3, 4}) == BoundaryPoint{3, 4});
  const auto lam = CanonicalQSMap::make(kE, 0, PLFunction::affine(kE, 0));
  const auto p = apply(lam, {1, 1});
  CHECK(p.x == doctest::Approx(2 * kE));
  CHECK(p.y == doctest::Approx(kE));
  CHECK(apply(make_flip(), {2, -5}) == BoundaryPoint{-2, 5});
  CHECK_THROWS_AS(CanonicalQSMap::make(0, 0, {}), NumericalError);
  CHECK_THROWS_AS(CanonicalQSMap::make(1, NAN, {}), NumericalError);
}

TEST_CASE("make_lambda and T_g") {
  CHECK(make_lambda(0) == identity_map());
  const auto l = make_lambda(std::log(2.0));
  CHECK(l.a == doctest::Approx(2.0));
  CHECK(l.b == 0.0);
  CHECK(l.c.is_affine());
  CHECK(l.c.left_slope() == doctest::Approx(2 * std::log(2.0)));

  SplitMix64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const double t = rng.uniform(-2, 2);
    const BoundaryPoint p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(same_point(apply(make_Tg(0, 0, t), p), apply(make_lambda(t), p), 1e-12));
    const double u = rng.uniform(-5, 5), v = rng.uniform(-5, 5);
    CHECK(same_point(apply(make_Tg(u, v, 0), p), {p.x + u, p.y + v}, 1e-12));
  }
}

TEST_CASE("scaling law") {
  SplitMix64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const double t = rng.uniform(-3, 3);
    const BoundaryPoint p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const BoundaryPoint q{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const auto l = make_lambda(t);
    const double lhs = dist_D(apply(l, p), apply(l, q));
    CHECK(std::abs(lhs - std::exp(t) * dist_D(p, q)) <= 1e-9 * std::exp(t) * dist_D(p, q));
  }
}

TEST_CASE("compose and invert examples") {
  SplitMix64 rng(3);
  const auto f = random_map(rng);
  CHECK(compose(f, identity_map()) == f);
  const auto ls = compose(make_lambda(0.4), make_lambda(-1.1));
  const auto l = make_lambda(-0.7);
  CHECK(ls.a == doctest::Approx(l.a));
  CHECK(ls.c.left_slope() == doctest::Approx(l.c.left_slope()));
  CHECK(compose(make_flip(), make_flip()) == identity_map());

  const auto inv2 = invert(CanonicalQSMap::make(2, 0, PLFunction::constant(0)));
  CHECK(inv2.a == 0.5);
  CHECK(inv2.b == 0.0);
  CHECK(inv2.c.is_constant());
  const auto il = invert(make_lambda(0.8));
  CHECK(il.a == doctest::Approx(make_lambda(-0.8).a));
  CHECK(il.c.left_slope() == doctest::Approx(make_lambda(-0.8).c.left_slope()));
  const auto it = invert(make_translation(2, -3));
  CHECK(same_point(apply(it, {0, 0}), {-2, 3}, 1e-15));
}

TEST_CASE("lipschitz bound examples") {
  CHECK(lipschitz_bound(CanonicalQSMap::make(2, 0, {})) ==
        doctest::Approx(2 + 2 * std::log(2.0)));
  CHECK(lipschitz_bound(CanonicalQSMap::make(2, 0, {})) == doctest::Approx(3.3863).epsilon(1e-4));
  CHECK(lipschitz_bound(identity_map()) == 1.0);
  CHECK(lipschitz_bound(CanonicalQSMap::make(1, 0, abs_pl(3))) == 4.0);
}

TEST_CASE("classify") {
  CHECK(classify(make_translation(1, 2)).kind == MapClass::Isometry);
  CHECK(classify(make_flip()).kind == MapClass::Isometry);
  const auto c = classify(make_lambda(0.6));
  CHECK(c.kind == MapClass::Similarity);
  CHECK(c.factor == doctest::Approx(std::exp(0.6)));
  const auto f = CanonicalQSMap::make(1, 0, abs_pl(1));
  CHECK(classify(f).kind == MapClass::GeneralQS);
  // witness pair: D((0,0),(0,0.1)) = -0.1 ln 0.1, the image pair adds 0.1 to dx
  const BoundaryPoint p{0, 0}, q{0, 0.1};
  CHECK(dist_D(apply(f, p), apply(f, q)) != doctest::Approx(dist_D(p, q)));
}

TEST_CASE("PLFunction construction errors") {
  CHECK_THROWS_AS(PLFunction::from_breakpoints({{1, 0}, {1, 2}}, 0, 0), NumericalError);
  CHECK_THROWS_AS(PLFunction::from_breakpoints({{2, 0}, {1, 2}}, 0, 0), NumericalError);
  CHECK_THROWS_AS(PLFunction::from_breakpoints({{0, NAN}}, 0, 0), NumericalError);
  const auto f = PLFunction::from_breakpoints({{0, 0}, {1, 1}, {2, 0}}, 0, 0);
  const auto g = f.precompose_affine(1, 0.5);
  try {
    PLFunction::sum(f, g, 4);
    FAIL("expected BreakpointLimit");
  } catch (const NumericalError& e) {
    CHECK(e.kind() == ErrorKind::BreakpointLimit);
  }
  // redundant breakpoints are removed
  CHECK(PLFunction::from_breakpoints({{0, 0}, {1, 1}}, 1, 1).is_affine());
}

TEST_CASE("property: round trip and associativity") {
  SplitMix64 rng(4);
  for (int k = 0; k < 300; ++k) {
    const auto f = random_map(rng), g = random_map(rng), h = random_map(rng);
    const auto fi = compose(f, invert(f));
    const auto fgh1 = compose(compose(f, g), h), fgh2 = compose(f, compose(g, h));
    for (int j = 0; j < 10; ++j) {
      const BoundaryPoint p{rng.uniform(-10, 10), rng.uniform(-10, 10)};
      CHECK(same_point(apply(fi, p), p, 1e-9));
      CHECK(same_point(apply(fgh1, p), apply(fgh2, p), 1e-9));
      CHECK(same_point(apply(compose(f, g), p), apply(f, apply(g, p)), 1e-9));
    }
  }
}

TEST_CASE("property: biLipschitz bound") {
  SplitMix64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const auto f = random_map(rng);
    const double L = lipschitz_bound(f), Linv = lipschitz_bound(invert(f));
    for (int j = 0; j < 200; ++j) {
      const BoundaryPoint p{rng.uniform(-10, 10), rng.uniform(-10, 10)};
      const BoundaryPoint q = p + BoundaryPoint{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      const double d = dist_D(p, q);
      if (d == 0) continue;
      const double r = dist_D(apply(f, p), apply(f, q)) / d;
      CHECK(r <= L * (1 + 1e-9));
      CHECK(r * Linv >= 1 - 1e-9);
    }
  }
}

TEST_CASE("property: isometries preserve D exactly") {
  SplitMix64 rng(6);
  for (int k = 0; k < 2000; ++k) {
    const auto g = compose(make_translation(rng.uniform(-5, 5), rng.uniform(-5, 5)),
                           (k & 1) ? make_flip() : identity_map());
    const BoundaryPoint p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const BoundaryPoint q{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(rel_close(dist_D(apply(g, p), apply(g, q)), dist_D(p, q), 1e-12));
  }
}

TEST_CASE("property: horizontal lines go to horizontal lines") {
  SplitMix64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const auto f = random_map(rng);
    const double y = rng.uniform(-5, 5);
    const double y1 = apply(f, {rng.uniform(-9, 9), y}).y;
    const double y2 = apply(f, {rng.uniform(-9, 9), y}).y;
    CHECK(y1 == y2);
  }
}

TEST_CASE("property: generators classify and close under composition") {
  SplitMix64 rng(8);
  for (int k = 0; k < 200; ++k) {
    const auto iso = compose(make_translation(rng.uniform(-3, 3), rng.uniform(-3, 3)),
                             (k & 1) ? make_flip() : identity_map());
    CHECK(classify(iso).kind == MapClass::Isometry);
    const double t = rng.uniform(-2, 2);
    if (std::abs(t) < 1e-3) continue;
    const auto sim = compose(make_lambda(t), iso);
    const auto c = classify(sim);
    CHECK(c.kind == MapClass::Similarity);
    CHECK(c.factor == doctest::Approx(std::exp(t)));
  }
}
