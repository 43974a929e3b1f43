#include "qsb/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsb/errors.hpp"
#include "qsb/parallel.hpp"
#include "qsb/random.hpp"

namespace qsb {

BlackBoxMap black_box(const CanonicalQSMap& f, std::string label) {
  auto inv = invert(f);
  return {[f](BoundaryPoint p) { return apply(f, p); },
          [inv](BoundaryPoint p) { return apply(inv, p); }, std::move(label)};
}

BlackBoxMap identity_black_box() {
  return {[](BoundaryPoint p) { return p; }, [](BoundaryPoint p) { return p; }, "identity"};
}

BlackBoxMap coordinate_swap() {
  auto swap = [](BoundaryPoint p) { return BoundaryPoint{p.y, p.x}; };
  return {swap, swap, "swap"};
}

double inverse_residual(const BlackBoxMap& f, std::span<const BoundaryPoint> probes) {
  if (!f.inverse) return 0.0;
  double worst = 0.0;
  for (const auto& p : probes) {
    const auto back = f.forward((*f.inverse)(p));
    worst = std::max({worst, std::abs(back.x - p.x), std::abs(back.y - p.y)});
  }
  return worst;
}

std::vector<BoundaryPoint> sample_points(std::size_t n, std::uint64_t seed, double box) {
  std::vector<BoundaryPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = sample_rng(seed, i);
    out[i].x = rng.uniform(-box, box);
    out[i].y = rng.uniform(-box, box);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<EtaPoint> eta_sweep(const BlackBoxMap& f, QuasimetricKind kind, const EtaConfig& cfg,
                                std::size_t samples) {
  std::vector<EtaPoint> out;
  out.reserve(cfg.ratios.size());
  for (std::size_t k = 0; k < cfg.ratios.size(); ++k) {
    const double ratio = cfg.ratios[k];
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
      throw NumericalError(ErrorKind::InvalidArgument, "eta ratios must be positive and finite");
    }
    const std::uint64_t ratio_seed = derive_seed(cfg.seed, k);
    std::vector<double> best(samples, -1.0);
    parallel_for(samples, cfg.threads, [&](std::size_t n) {
      auto rng = sample_rng(ratio_seed, n);
      const BoundaryPoint x{rng.uniform(-cfg.box, cfg.box), rng.uniform(-cfg.box, cfg.box)};
      const double R = rng.log_uniform(cfg.log10_scale_lo, cfg.log10_scale_hi);
      const auto z = sphere_point(kind, x, R, rng.uniform());
      const auto y = sphere_point(kind, x, ratio * R, rng.uniform());
      const auto fx = f.forward(x);
      const double den = dist(kind, fx, f.forward(z));
      if (!(den > 0.0) || !std::isfinite(den)) return;
      const double r = dist(kind, fx, f.forward(y)) / den;
      if (std::isfinite(r)) best[n] = r;
    });
    EtaPoint pt{ratio, 0.0, 0};
    for (double v : best) {
      if (v < 0.0) continue;
      pt.eta = std::max(pt.eta, v);
      ++pt.count;
    }
    out.push_back(pt);
  }
  return out;
}

double value_at_one(std::span<const EtaPoint> eta) {
  for (const auto& p : eta) {
    if (p.ratio == 1.0) return p.count ? p.eta : std::numeric_limits<double>::infinity();
  }
  return interpolate_eta(eta, 1.0);
}

}  // namespace

EtaEstimate eta_modulus_estimate(const BlackBoxMap& f, QuasimetricKind kind, const EtaConfig& cfg) {
  if (cfg.ratios.empty() || cfg.samples == 0) {
    throw NumericalError(ErrorKind::InvalidArgument, "eta estimate needs ratios and samples");
  }
  EtaEstimate est;
  est.points = eta_sweep(f, kind, cfg, cfg.samples);
  const auto doubled = eta_sweep(f, kind, cfg, 2 * cfg.samples);
  est.eta_at_one = value_at_one(est.points);
  est.eta_at_one_doubled = value_at_one(doubled);
  est.consistent = std::isfinite(est.eta_at_one) && est.eta_at_one > 0.0 &&
                   std::isfinite(est.eta_at_one_doubled) &&
                   std::abs(est.eta_at_one_doubled - est.eta_at_one) <= 0.05 * est.eta_at_one;
  return est;
}

std::vector<EtaPoint> monotone_envelope(std::span<const EtaPoint> eta) {
  std::vector<EtaPoint> out(eta.begin(), eta.end());
  std::sort(out.begin(), out.end(),
            [](const EtaPoint& a, const EtaPoint& b) { return a.ratio < b.ratio; });
  for (std::size_t i = 1; i < out.size(); ++i) out[i].eta = std::max(out[i].eta, out[i - 1].eta);
  return out;
}

namespace {

void require_positive_grid(std::span<const EtaPoint> eta) {
  if (eta.size() < 2) {
    throw NumericalError(ErrorKind::InvalidArgument, "modulus estimate needs at least two points");
  }
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!(eta[i].ratio > 0.0) || !(eta[i].eta > 0.0) || !std::isfinite(eta[i].eta)) {
      throw NumericalError(ErrorKind::InvalidArgument, "modulus values must be positive and finite");
    }
    if (i > 0 && !(eta[i].ratio > eta[i - 1].ratio)) {
      throw NumericalError(ErrorKind::InvalidArgument, "modulus ratios must be increasing");
    }
  }
}

// Log-log linear interpolation through (x0,y0), (x1,y1), evaluated at x.
double loglog(double x0, double y0, double x1, double y1, double x) {
  const double lx0 = std::log(x0);
  const double lx1 = std::log(x1);
  const double w = (std::log(x) - lx0) / (lx1 - lx0);
  return std::exp(std::log(y0) + w * (std::log(y1) - std::log(y0)));
}

}  // namespace

double interpolate_eta(std::span<const EtaPoint> eta, double ratio) {
  require_positive_grid(eta);
  std::size_t i = 0;
  while (i + 2 < eta.size() && ratio > eta[i + 1].ratio) ++i;
  return loglog(eta[i].ratio, eta[i].eta, eta[i + 1].ratio, eta[i + 1].eta, ratio);
}

double eta_inverse_at(std::span<const EtaPoint> eta, double value) {
  require_positive_grid(eta);
  for (std::size_t i = 1; i < eta.size(); ++i) {
    if (eta[i].eta < eta[i - 1].eta) {
      throw NumericalError(ErrorKind::NonMonotone, "modulus estimate decreases; undersampled");
    }
  }
  std::size_t i = 0;
  while (i + 2 < eta.size() && value > eta[i + 1].eta) ++i;
  const auto& p = eta[i];
  const auto& q = eta[i + 1];
  if (q.eta == p.eta) return value <= p.eta ? p.ratio : q.ratio;
  return loglog(p.eta, p.ratio, q.eta, q.ratio, value);
}

std::vector<EtaPoint> inverse_modulus(std::span<const EtaPoint> eta) {
  require_positive_grid(eta);
  for (std::size_t i = 1; i < eta.size(); ++i) {
    if (!(eta[i].eta > eta[i - 1].eta)) {
      throw NumericalError(ErrorKind::NonMonotone,
                           "modulus estimate is not strictly increasing at ratio " +
                               std::to_string(eta[i].ratio));
    }
  }
  std::vector<EtaPoint> out;
  out.reserve(eta.size());
  for (const auto& p : eta) {
    out.push_back({p.ratio, 1.0 / eta_inverse_at(eta, 1.0 / p.ratio), p.count});
  }
  return out;
}

double quasisimilarity_constant_bound(double eta1, double eta_inv1) {
  if (!(eta_inv1 > 0.0) || !(eta1 >= eta_inv1) || !std::isfinite(eta1)) {
    throw NumericalError(ErrorKind::InvalidArgument, "need eta(1) >= eta^{-1}(1) > 0");
  }
  return std::pow(eta1 / eta_inv1, 6.0);
}

DistanceRatioRange distance_ratio_range(const BlackBoxMap& f, QuasimetricKind kind,
                                        std::span<const PointPair> pairs) {
  DistanceRatioRange out{0.0, std::numeric_limits<double>::infinity(), 0};
  for (const auto& pr : pairs) {
    const double d = dist(kind, pr.p, pr.q);
    if (!(d > 0.0)) continue;
    const double r = dist(kind, f.forward(pr.p), f.forward(pr.q)) / d;
    if (!std::isfinite(r)) continue;
    out.sup = std::max(out.sup, r);
    out.inf = std::min(out.inf, r);
    ++out.count;
  }
  if (out.count == 0) out.inf = 0.0;
  return out;
}

QuasisimilarityCheck quasisimilarity_check(const BlackBoxMap& f, QuasimetricKind kind,
                                           const EtaConfig& eta_cfg,
                                           std::span<const PointPair> pairs, double slack) {
  const auto est = eta_modulus_estimate(f, kind, eta_cfg);
  const auto env = monotone_envelope(est.points);
  QuasisimilarityCheck out{};
  out.eta_one = interpolate_eta(env, 1.0);
  out.eta_inverse_one = eta_inverse_at(env, 1.0);
  out.K = quasisimilarity_constant_bound(out.eta_one, out.eta_inverse_one);
  out.range = distance_ratio_range(f, kind, pairs);
  out.measured = out.range.inf > 0.0 ? out.range.sup / out.range.inf
                                     : std::numeric_limits<double>::infinity();
  out.holds = out.measured <= out.K * (1.0 + slack);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> default_radii() { return {1e-2, 1e-3, 1e-4}; }

DilatationReport dilatation_report(const BlackBoxMap& f, BoundaryPoint p,
                                   std::span<const double> radii, QuasimetricKind kind,
                                   int probes) {
  if (radii.empty() || probes < 1) {
    throw NumericalError(ErrorKind::InvalidArgument, "dilatation needs radii and probes");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw NumericalError(ErrorKind::InvalidArgument,
                           "radii must be positive and strictly decreasing");
    }
  }
  DilatationReport rep;
  rep.point = p;
  rep.radii.assign(radii.begin(), radii.end());
  const auto fp = f.forward(p);
  for (double r : radii) {
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (int k = 0; k < probes; ++k) {
      const auto q = sphere_point(kind, p, r, static_cast<double>(k) / probes);
      const double d = dist(kind, fp, f.forward(q)) / r;
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    rep.L_values.push_back(hi);
    rep.l_values.push_back(lo);
  }
  rep.L_limit_est = rep.L_values.back();
  rep.l_limit_est = rep.l_values.back();
  if (radii.size() > 1) {
    // least-squares slope against log10 r
    const std::size_t n = radii.size();
    double mx = 0.0, mL = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += std::log10(radii[i]);
      mL += rep.L_values[i];
      ml += rep.l_values[i];
    }
    mx /= n;
    mL /= n;
    ml /= n;
    double sxx = 0.0, sxL = 0.0, sxl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = std::log10(radii[i]) - mx;
      sxx += dx * dx;
      sxL += dx * (rep.L_values[i] - mL);
      sxl += dx * (rep.l_values[i] - ml);
    }
    rep.L_trend = sxL / sxx;
    rep.l_trend = sxl / sxx;
  }
  return rep;
}

std::string_view to_string(ConformalVerdict v) {
  return v == ConformalVerdict::NotConformal ? "NotConformal" : "ConsistentWithConformal";
}

ConformalityResult conformality_test(const BlackBoxMap& f, std::span<const BoundaryPoint> points,
                                     std::span<const double> radii, double tolerance,
                                     QuasimetricKind kind) {
  ConformalityResult out{ConformalVerdict::ConsistentWithConformal, std::nullopt, 1.0, {}};
  for (const auto& p : points) {
    auto rep = dilatation_report(f, p, radii, kind);
    const double ratio = rep.l_limit_est > 0.0 ? rep.L_limit_est / rep.l_limit_est
                                               : std::numeric_limits<double>::infinity();
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      if (ratio > 1.0 + tolerance) out.witness = p;
    }
    out.reports.push_back(std::move(rep));
  }
  if (out.witness) out.verdict = ConformalVerdict::NotConformal;
  return out;
}

}  // namespace qsb
