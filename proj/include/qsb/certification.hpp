#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qsb/boundary_point.hpp"
#include "qsb/canonical_map.hpp"
#include "qsb/quasimetrics.hpp"

namespace qsb {

// A candidate planar map, not necessarily quasisymmetric.
struct BlackBoxMap {
  std::function<BoundaryPoint(BoundaryPoint)> forward;
  std::optional<std::function<BoundaryPoint(BoundaryPoint)>> inverse;
  std::string label;
};

BlackBoxMap black_box(const CanonicalQSMap& f, std::string label);
BlackBoxMap identity_black_box();
// (x, y) -> (y, x). Does not preserve the horizontal foliation.
BlackBoxMap coordinate_swap();

// Largest |forward(inverse(p)) - p| (sup norm) over the probes; 0 without an inverse.
double inverse_residual(const BlackBoxMap& f, std::span<const BoundaryPoint> probes);

// ---------------------------------------------------------------------------
// Quasisymmetry modulus

struct EtaPoint {
  double ratio;        // input ratio d(x,y)/d(x,z)
  double eta;          // sup of d(Fx,Fy)/d(Fx,Fz) seen at that ratio
  std::size_t count;   // triples that contributed
};

struct EtaConfig {
  std::vector<double> ratios{0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  std::size_t samples = 2000;  // triples per ratio
  std::uint64_t seed = 1;
  double box = 5.0;            // base points uniform in [-box, box]^2
  double log10_scale_lo = -3.0;
  double log10_scale_hi = 1.0;
  unsigned threads = 1;
};

struct EtaEstimate {
  std::vector<EtaPoint> points;
  bool consistent = false;     // finite at ratio 1 and stable (5%) under sample doubling
  double eta_at_one = 0.0;
  double eta_at_one_doubled = 0.0;
};

// Triples are built on quasimetric spheres about x: z at radius R, y at radius
// ratio * R, so the input ratio is exact. Triples with F(x) = F(z) are skipped.
EtaEstimate eta_modulus_estimate(const BlackBoxMap& f, QuasimetricKind kind,
                                 const EtaConfig& cfg = {});

// Running maximum in the ratio order.
std::vector<EtaPoint> monotone_envelope(std::span<const EtaPoint> eta);

// Log-log interpolation of eta at `ratio`, extrapolating from the end segments.
double interpolate_eta(std::span<const EtaPoint> eta, double ratio);
// Smallest ratio s with eta(s) = value, by log-log interpolation of the
// nondecreasing estimate (extrapolates from the end segments).
double eta_inverse_at(std::span<const EtaPoint> eta, double value);

// eta_1(t) = 1 / eta^{-1}(1/t), evaluated on the same ratio grid.
// Throws NonMonotone unless eta is strictly increasing.
std::vector<EtaPoint> inverse_modulus(std::span<const EtaPoint> eta);

// (eta1 / eta_inv1)^6. Throws InvalidArgument unless eta1 >= eta_inv1 > 0.
double quasisimilarity_constant_bound(double eta1, double eta_inv1);

struct DistanceRatioRange {
  double sup = 0.0;
  double inf = 0.0;
  std::size_t count = 0;
};

// sup / inf of d(F p, F q) / d(p, q) over the sampled pairs.
DistanceRatioRange distance_ratio_range(const BlackBoxMap& f, QuasimetricKind kind,
                                        std::span<const PointPair> pairs);

struct QuasisimilarityCheck {
  double eta_one;
  double eta_inverse_one;
  double K;
  DistanceRatioRange range;
  double measured;  // range.sup / range.inf
  bool holds;
};

// Measured sup/inf distance ratio against K = (eta(1)/eta^{-1}(1))^6 built from
// the measured (monotone-enveloped) modulus. `slack` is relative: for
// similarities K = 1 and the measured ratio carries round-off.
QuasisimilarityCheck quasisimilarity_check(const BlackBoxMap& f, QuasimetricKind kind,
                                           const EtaConfig& eta_cfg,
                                           std::span<const PointPair> pairs,
                                           double slack = 1e-9);

// ---------------------------------------------------------------------------
// Dilatations

inline constexpr int kDilatationProbes = 256;

struct DilatationReport {
  BoundaryPoint point;
  std::vector<double> radii;
  std::vector<double> L_values;  // sup_{d(p,q)=r} d(Fp,Fq) / r
  std::vector<double> l_values;  // inf_{d(p,q)=r} d(Fp,Fq) / r
  double L_limit_est = 0.0;      // value at the smallest radius
  double l_limit_est = 0.0;
  double L_trend = 0.0;          // slope of L_values against log10 r
  double l_trend = 0.0;
};

std::vector<double> default_radii();  // {1e-2, 1e-3, 1e-4}

// Probes the D-sphere (or the sphere of `kind`) at each radius. Radii must be
// positive and strictly decreasing (InvalidArgument otherwise).
DilatationReport dilatation_report(const BlackBoxMap& f, BoundaryPoint p,
                                   std::span<const double> radii,
                                   QuasimetricKind kind = QuasimetricKind::ClosedFormD,
                                   int probes = kDilatationProbes);

enum class ConformalVerdict { ConsistentWithConformal, NotConformal };

std::string_view to_string(ConformalVerdict v);

struct ConformalityResult {
  ConformalVerdict verdict;
  std::optional<BoundaryPoint> witness;  // point with the largest L/l when NotConformal
  double worst_ratio = 1.0;              // max L_limit_est / l_limit_est over the points
  std::vector<DilatationReport> reports;
};

ConformalityResult conformality_test(const BlackBoxMap& f, std::span<const BoundaryPoint> points,
                                     std::span<const double> radii, double tolerance = 0.02,
                                     QuasimetricKind kind = QuasimetricKind::ClosedFormD);

// Seeded base points uniform in [-box, box]^2.
std::vector<BoundaryPoint> sample_points(std::size_t n, std::uint64_t seed, double box);

}  // namespace qsb
