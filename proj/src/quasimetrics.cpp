#include "qsb/quasimetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qsb/errors.hpp"
#include "qsb/parallel.hpp"
#include "qsb/root_finding.hpp"

namespace qsb {

std::string_view to_string(QuasimetricKind kind) {
  switch (kind) {
    case QuasimetricKind::ClosedFormD: return "D";
    case QuasimetricKind::SuperNormDs: return "Ds";
    case QuasimetricKind::EuclideanDe: return "De";
  }
  return "?";
}

std::optional<QuasimetricKind> parse_kind(std::string_view text) {
  if (text == "D") return QuasimetricKind::ClosedFormD;
  if (text == "Ds") return QuasimetricKind::SuperNormDs;
  if (text == "De") return QuasimetricKind::EuclideanDe;
  return std::nullopt;
}

double horosphere_distance(double t, BoundaryPoint v, BoundaryPoint w) {
  const double dx = v.x - w.x;
  const double dy = v.y - w.y;
  // e^{-tA} = e^{-t} [[1, -t], [0, 1]]
  return std::exp(-t) * std::hypot(dx - t * dy, dy);
}

double dist_D(BoundaryPoint p, BoundaryPoint q) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  return std::max(std::abs(dy), std::abs(dx - xlogx(dy)));
}

double dist_Ds(BoundaryPoint p, BoundaryPoint q, const RootOptions& opts) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  if (dy == 0.0) return std::abs(dx);

  const double ady = std::abs(dy);
  const double t0 = std::log(ady);
  const double a = dx / dy - t0;
  if (std::abs(a) <= 1.0) return ady;

  // Beyond t0 the sup-norm is governed by e^{-u}|a - u|, u = t - t0. Both
  // equations are solved in log form; exp(ln a) loses the root for large |a|.
  if (!std::isfinite(a)) return dist_Ds_bisection(p, q, opts);
  double u = 0.0;
  if (a > 1.0) {
    // e^u = a - u on (0, ln a]
    u = roots::bisect_sign_change([a](double s) { return s - std::log(a - s); }, 0.0,
                                  std::log(a), opts.tolerance);
  } else {
    // e^u = u - a on (0, ln 3|a|]
    u = roots::bisect_sign_change([a](double s) { return s - std::log(s - a); }, 0.0,
                                  std::log(-3.0 * a), opts.tolerance);
  }
  return ady * std::exp(u);
}

double dist_Ds_bisection(BoundaryPoint p, BoundaryPoint q, const RootOptions& opts) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  // ln|e^{-tA}(dx,dy)|_sup > 0, evaluated in log form to stay finite for large |t|.
  auto above = [dx, dy](double t) {
    const double m = std::max(std::abs(dx - t * dy), std::abs(dy));
    return std::log(m) - t > 0.0;
  };
  const double start = dy != 0.0 ? std::log(std::abs(dy)) : std::log(std::abs(dx));
  const auto bracket = roots::expand_bracket(above, start, opts.max_span);
  return std::exp(roots::bisect_threshold(above, bracket, opts.tolerance));
}

double dist_De(BoundaryPoint p, BoundaryPoint q, const RootOptions& opts) {
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  auto excess = [dx, dy](double t) { return std::log(std::hypot(dx - t * dy, dy)) - t; };
  auto above = [&](double t) { return excess(t) > 0.0; };
  const auto bracket = roots::expand_bracket(above, std::log(std::hypot(dx, dy)), opts.max_span);

  if (opts.uniqueness_samples > 1) {
    int changes = 0;
    bool prev = above(bracket.lo);
    for (int k = 1; k <= opts.uniqueness_samples; ++k) {
      const double t = bracket.lo + (bracket.hi - bracket.lo) * k / opts.uniqueness_samples;
      const bool cur = above(t);
      if (cur != prev) ++changes;
      prev = cur;
    }
    if (changes > 1) {
      throw NumericalError(ErrorKind::MultipleCrossings,
                           "horosphere distance crosses 1 " + std::to_string(changes) + " times");
    }
  }
  return std::exp(roots::bisect_threshold(above, bracket, opts.tolerance));
}

double dist(QuasimetricKind kind, BoundaryPoint p, BoundaryPoint q, const RootOptions& opts) {
  switch (kind) {
    case QuasimetricKind::ClosedFormD: return dist_D(p, q);
    case QuasimetricKind::SuperNormDs: return dist_Ds(p, q, opts);
    case QuasimetricKind::EuclideanDe: return dist_De(p, q, opts);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double norm_comparison_constant() {
  const double a = std::sqrt(6.0 - std::sqrt(29.0)) / 2.0;
  return std::pow(2.0, 1.0 / (2.0 * a));
}

NormComparison norm_comparison_check(BoundaryPoint p, BoundaryPoint q, double slack,
                                     const RootOptions& opts) {
  NormComparison out{};
  out.ds = dist_Ds(p, q, opts);
  out.de = dist_De(p, q, opts);
  out.upper = norm_comparison_constant() * out.ds;
  out.holds = out.ds <= out.de * (1.0 + slack) && out.de <= out.upper * (1.0 + slack);
  return out;
}

SandwichComparison comparison_DsD_check(BoundaryPoint p, BoundaryPoint q, double slack,
                                        const RootOptions& opts) {
  SandwichComparison out{};
  out.d = dist_D(p, q);
  out.ds = dist_Ds(p, q, opts);
  out.holds = out.d / 3.0 <= out.ds * (1.0 + slack) && out.ds <= 3.0 * out.d * (1.0 + slack);
  return out;
}

double hausdorff_distance_lines(double y1, double y2) { return std::abs(y1 - y2); }

namespace {

// sup over x in [-R, R] (step h) of the D-distance from (x, y_from) to the
// grid {x0 + k h} on the line y_to.
double directed_line_distance(double y_from, double y_to, double R, double h, double window) {
  const double dy = y_to - y_from;
  const double shift = xlogx(dy);  // optimal partner sits at x + shift
  const double x0 = -window;
  const auto last = static_cast<long long>(std::floor(2.0 * window / h));
  const auto n = static_cast<long long>(std::floor(2.0 * R / h));
  double worst = 0.0;
  for (long long k = 0; k <= n; ++k) {
    const double x = -R + static_cast<double>(k) * h;
    long long j = std::llround((x + shift - x0) / h);
    j = std::clamp(j, 0LL, last);
    const double xb = x0 + static_cast<double>(j) * h;
    worst = std::max(worst, dist_D({x, y_from}, {xb, y_to}));
  }
  return worst;
}

}  // namespace

double hausdorff_distance_lines_truncated(double y1, double y2, double R) {
  if (!(R > 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "truncation must be positive");
  const double h = 1.0 / R;
  const double window = 2.0 * R + std::abs(xlogx(y2 - y1));
  return std::max(directed_line_distance(y1, y2, R, h, window),
                  directed_line_distance(y2, y1, R, h, window));
}

namespace {

// Boundary of the unit sup-norm ball, parametrized by perimeter fraction s.
BoundaryPoint unit_square_point(double s) {
  double p = 8.0 * (s - std::floor(s));
  if (p < 1.0) return {1.0, p};
  if (p < 3.0) return {1.0 - (p - 1.0), 1.0};
  if (p < 5.0) return {-1.0, 1.0 - (p - 3.0)};
  if (p < 7.0) return {-1.0 + (p - 5.0), -1.0};
  return {1.0, -1.0 + (p - 7.0)};
}

}  // namespace

BoundaryPoint sphere_point(QuasimetricKind kind, BoundaryPoint center, double r, double s) {
  switch (kind) {
    case QuasimetricKind::ClosedFormD: {
      const auto sq = unit_square_point(s);
      const double tau = r * sq.x;
      const double dy = r * sq.y;
      return {center.x + tau + xlogx(dy), center.y + dy};
    }
    case QuasimetricKind::SuperNormDs: {
      const auto v = exp_tA(std::log(r)).apply(unit_square_point(s));
      return center + v;
    }
    case QuasimetricKind::EuclideanDe: {
      const double angle = 2.0 * std::numbers::pi * s;
      const auto v = exp_tA(std::log(r)).apply({std::cos(angle), std::sin(angle)});
      return center + v;
    }
  }
  return center;
}

// ---------------------------------------------------------------------------

std::optional<PairDistribution> parse_distribution(std::string_view text) {
  if (text == "mixture") return PairDistribution::Mixture;
  if (text == "uniform") return PairDistribution::UniformBox;
  if (text == "logscale") return PairDistribution::LogScale;
  if (text == "degenerate") return PairDistribution::NearDegenerate;
  if (text == "horizontal") return PairDistribution::HorizontalLine;
  return std::nullopt;
}

namespace {

BoundaryPoint offset_for(PairDistribution dist, const SamplerConfig& cfg, SplitMix64& rng) {
  switch (dist) {
    case PairDistribution::UniformBox:
    case PairDistribution::Mixture:
      return {rng.uniform(-2.0 * cfg.box, 2.0 * cfg.box), rng.uniform(-2.0 * cfg.box, 2.0 * cfg.box)};
    case PairDistribution::LogScale: {
      const double dy = rng.sign() * rng.log_uniform(cfg.log10_lo, cfg.log10_hi);
      const double tau = rng.sign() * rng.log_uniform(cfg.log10_lo, cfg.log10_hi);
      return {tau + xlogx(dy), dy};
    }
    case PairDistribution::NearDegenerate: {
      double dy = 0.0;
      if (rng.uniform() < 0.5) {
        dy = rng.sign() * rng.log_uniform(std::max(cfg.log10_lo, -9.0), -6.0);
      } else {
        dy = rng.sign() * (1.0 + rng.sign() * rng.log_uniform(std::max(cfg.log10_lo, -9.0), -2.0));
      }
      // a = dx/dy - ln|dy| spread around the case boundaries |a| = 1
      const double a = rng.uniform(-3.0, 3.0);
      return {dy * (a + std::log(std::abs(dy))), dy};
    }
    case PairDistribution::HorizontalLine:
      return {rng.uniform(-2.0 * cfg.box, 2.0 * cfg.box), 0.0};
  }
  return {};
}

PairDistribution resolve(PairDistribution d, std::size_t index) {
  if (d != PairDistribution::Mixture) return d;
  switch (index % 3) {
    case 0: return PairDistribution::UniformBox;
    case 1: return PairDistribution::LogScale;
    default: return PairDistribution::NearDegenerate;
  }
}

}  // namespace

PointPair sample_pair(const SamplerConfig& cfg, std::size_t index) {
  auto rng = sample_rng(cfg.seed, index);
  const auto kind = resolve(cfg.distribution, index);
  BoundaryPoint p{rng.uniform(-cfg.box, cfg.box), rng.uniform(-cfg.box, cfg.box)};
  if (kind == PairDistribution::HorizontalLine) p.y = 0.0;
  return {p, p + offset_for(kind, cfg, rng)};
}

PointTriple sample_triple(const SamplerConfig& cfg, std::size_t index) {
  auto rng = sample_rng(cfg.seed, index);
  const auto kind = resolve(cfg.distribution, index);
  BoundaryPoint x{rng.uniform(-cfg.box, cfg.box), rng.uniform(-cfg.box, cfg.box)};
  if (kind == PairDistribution::HorizontalLine) x.y = 0.0;
  const auto y = x + offset_for(kind, cfg, rng);
  const auto z = y + offset_for(kind, cfg, rng);
  return {x, y, z};
}

// ---------------------------------------------------------------------------

namespace {

struct TripleDistances {
  double xz, xy, yz;
  bool usable;
};

}  // namespace

QuasimetricProfile profile_quasimetric(QuasimetricKind kind, std::span<const PointTriple> triples,
                                       const RootOptions& opts, unsigned threads) {
  std::vector<TripleDistances> d(triples.size());
  parallel_for(triples.size(), threads, [&](std::size_t i) {
    const auto& tr = triples[i];
    TripleDistances td{};
    td.xz = dist(kind, tr.x, tr.z, opts);
    td.xy = dist(kind, tr.x, tr.y, opts);
    td.yz = dist(kind, tr.y, tr.z, opts);
    // Coincident points make the ratio meaningless.
    td.usable = td.xz > 0.0 && td.xy > 0.0 && td.yz > 0.0;
    d[i] = td;
  });

  QuasimetricProfile out;
  double worst = 0.0;
  for (const auto& td : d) {
    if (!td.usable) continue;
    ++out.sample_count;
    worst = std::max(worst, td.xz / (td.xy + td.yz));
  }
  out.quasi_triangle_constant = std::max(1.0, worst);

  // The set of eps with rho^eps satisfying the triangle inequality on a triple
  // is an interval [0, eps*], so bisection over the whole sample is valid.
  auto all_hold = [&](double eps) {
    for (const auto& td : d) {
      if (!td.usable) continue;
      // (xz)^eps <= (xy)^eps + (yz)^eps, scaled by xz^eps
      const double lhs = 1.0;
      const double rhs = std::pow(td.xy / td.xz, eps) + std::pow(td.yz / td.xz, eps);
      if (lhs > rhs * (1.0 + 1e-14)) return false;
    }
    return true;
  };
  if (all_hold(1.0)) {
    out.snowflake_epsilon = 1.0;
  } else {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (all_hold(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.snowflake_epsilon = lo;
  }
  return out;
}

QuasimetricProfile profile_quasimetric(QuasimetricKind kind, const SamplerConfig& sampler,
                                       const RootOptions& opts, unsigned threads) {
  std::vector<PointTriple> triples(sampler.count);
  for (std::size_t i = 0; i < sampler.count; ++i) triples[i] = sample_triple(sampler, i);
  return profile_quasimetric(kind, triples, opts, threads);
}

}  // namespace qsb
