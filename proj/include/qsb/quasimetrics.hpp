#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qsb/boundary_point.hpp"
#include "qsb/random.hpp"

namespace qsb {

// The three parabolic visual quasimetrics on the punctured boundary.
//   ClosedFormD: max{|dy|, |dx - dy ln|dy||}
//   SuperNormDs: e^t for the smallest t with |e^{-tA}(q-p)|_sup = 1
//   EuclideanDe: e^t for the t with |e^{-tA}(q-p)| = 1
enum class QuasimetricKind { ClosedFormD, SuperNormDs, EuclideanDe };

std::string_view to_string(QuasimetricKind kind);
std::optional<QuasimetricKind> parse_kind(std::string_view text);

struct RootOptions {
  double tolerance = 1e-12;  // absolute, on the height t
  double max_span = 4096.0;  // bracket search gives up beyond this distance from the start
  int uniqueness_samples = 64;
};

// Euclidean norm of e^{-tA}(v - w): the distance of (v,t), (w,t) inside the horosphere at height t.
double horosphere_distance(double t, BoundaryPoint v, BoundaryPoint w);

double dist_D(BoundaryPoint p, BoundaryPoint q);

// Case analysis on a = dx/dy - ln|dy| (horizontal pair, |a| <= 1, a > 1, a < -1).
double dist_Ds(BoundaryPoint p, BoundaryPoint q, const RootOptions& opts = {});
// Direct threshold bisection on t. Independent route for cross-checking dist_Ds.
double dist_Ds_bisection(BoundaryPoint p, BoundaryPoint q, const RootOptions& opts = {});
double dist_De(BoundaryPoint p, BoundaryPoint q, const RootOptions& opts = {});

double dist(QuasimetricKind kind, BoundaryPoint p, BoundaryPoint q, const RootOptions& opts = {});

// 2^{1/(2a)} with a = sqrt(6 - sqrt 29)/2.
double norm_comparison_constant();

struct NormComparison {
  double ds;
  double de;
  double upper;  // norm_comparison_constant() * ds
  bool holds;
};
// D_s <= D_e <= 2^{1/(2a)} D_s, with relative slack `slack`.
NormComparison norm_comparison_check(BoundaryPoint p, BoundaryPoint q, double slack = 1e-9,
                                     const RootOptions& opts = {});

struct SandwichComparison {
  double d;
  double ds;
  bool holds;
};
// D/3 <= D_s <= 3D, with relative slack `slack`.
SandwichComparison comparison_DsD_check(BoundaryPoint p, BoundaryPoint q, double slack = 1e-9,
                                        const RootOptions& opts = {});

// Hausdorff distance under D between the horizontal lines at heights y1 and y2.
double hausdorff_distance_lines(double y1, double y2);

// Discretized Hausdorff distance between the truncations of the two lines to
// |x| <= R (points spaced 1/R apart), each matched against the other line on
// the wider window |x| <= 2R + |y2-y1| ln|y2-y1|. Converges to |y1 - y2| as R grows.
double hausdorff_distance_lines_truncated(double y1, double y2, double R);

// Point at quasimetric distance r from `center`, parametrized by s in [0,1).
// Closed form: the D-sphere is {(tau + u ln|u|, u) : max(|tau|,|u|) = r}; the
// D_s and D_e spheres are e^{(ln r)A} applied to the unit sup / Euclidean circle.
BoundaryPoint sphere_point(QuasimetricKind kind, BoundaryPoint center, double r, double s);

// ---------------------------------------------------------------------------
// Sampling

enum class PairDistribution {
  Mixture,         // round-robin over the next three
  UniformBox,      // both points uniform in the box
  LogScale,        // |dy| and |dx - dy ln|dy|| log-uniform in [10^lo, 10^hi]
  NearDegenerate,  // dy near 0 or near +-1, where ln|dy| changes behaviour
  HorizontalLine,  // all points on one horizontal line
};

std::optional<PairDistribution> parse_distribution(std::string_view text);

struct SamplerConfig {
  PairDistribution distribution = PairDistribution::Mixture;
  std::size_t count = 10000;
  std::uint64_t seed = 1;
  double box = 10.0;
  double log10_lo = -9.0;
  double log10_hi = 9.0;
};

struct PointPair {
  BoundaryPoint p;
  BoundaryPoint q;
};

struct PointTriple {
  BoundaryPoint x;
  BoundaryPoint y;
  BoundaryPoint z;
};

// Pair number `index` of the stream described by `cfg`; depends only on (cfg, index).
PointPair sample_pair(const SamplerConfig& cfg, std::size_t index);
PointTriple sample_triple(const SamplerConfig& cfg, std::size_t index);

// ---------------------------------------------------------------------------
// Axiom profiling

struct QuasimetricProfile {
  double quasi_triangle_constant = 1.0;  // empirical M >= 1
  double snowflake_epsilon = 1.0;        // largest eps in (0,1] with rho^eps a metric on the samples
  std::size_t sample_count = 0;          // triples that contributed
};

QuasimetricProfile profile_quasimetric(QuasimetricKind kind, std::span<const PointTriple> triples,
                                       const RootOptions& opts = {}, unsigned threads = 1);
QuasimetricProfile profile_quasimetric(QuasimetricKind kind, const SamplerConfig& sampler,
                                       const RootOptions& opts = {}, unsigned threads = 1);

}  // namespace qsb
