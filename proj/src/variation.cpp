#include "qsb/variation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsb/errors.hpp"
#include "qsb/parallel.hpp"

namespace qsb {

namespace {

void require_rect(const Rect& r) {
  if (!(r.b > r.a) || !(r.d > r.c) || !std::isfinite(r.a) || !std::isfinite(r.b) ||
      !std::isfinite(r.c) || !std::isfinite(r.d)) {
    throw NumericalError(ErrorKind::InvalidArgument, "rectangle must be finite and nondegenerate");
  }
}

// lambda_t applied to lattice coordinates.
BoundaryPoint lattice_point(double t, double et, double X, double Y) {
  return {et * (X + t * Y), et * Y};
}

std::int64_t floor64(double v) { return static_cast<std::int64_t>(std::floor(v)); }
std::int64_t ceil64(double v) { return static_cast<std::int64_t>(std::ceil(v)); }

}  // namespace

GridPacking::GridPacking(double t, Rect rect, std::int64_t first_column, std::int64_t last_column,
                         std::int64_t stride, std::int64_t offset)
    : t_(t), rect_(rect), first_(first_column), last_(last_column), stride_(stride),
      offset_(offset) {
  if (stride_ < 1 || offset_ < 0) {
    throw NumericalError(ErrorKind::InvalidArgument, "packing stride must be >= 1");
  }
}

double GridPacking::tile_area() const { return std::exp(2.0 * t_); }

std::vector<std::int64_t> GridPacking::sampled_columns() const {
  std::vector<std::int64_t> out;
  for (std::int64_t i = first_ + offset_; i <= last_; i += stride_) out.push_back(i);
  return out;
}

std::vector<Tile> GridPacking::column_tiles(std::int64_t i) const {
  const double E = std::exp(-t_);
  const double et = std::exp(t_);
  const double at = std::abs(t_);
  double ylo = rect_.c * E;
  double yhi = rect_.d * E;
  if (at > 0.0) {
    // X in [i, i+1] must meet [A + |t| Y, B + |t| Y]
    ylo = std::max(ylo, (static_cast<double>(i) - rect_.b * E) / at);
    yhi = std::min(yhi, (static_cast<double>(i) + 1.0 - rect_.a * E) / at);
  }
  std::vector<Tile> out;
  if (ylo > yhi) return out;
  const std::int64_t jlo = floor64(ylo);
  const std::int64_t jhi = std::max(jlo, ceil64(yhi) - 1);
  out.reserve(static_cast<std::size_t>(jhi - jlo + 1));
  const double X0 = static_cast<double>(i);
  for (std::int64_t j = jlo; j <= jhi; ++j) {
    const double Y0 = static_cast<double>(j);
    out.push_back({i, j,
                   {lattice_point(t_, et, X0, Y0), lattice_point(t_, et, X0 + 1.0, Y0),
                    lattice_point(t_, et, X0 + 1.0, Y0 + 1.0), lattice_point(t_, et, X0, Y0 + 1.0)}});
  }
  return out;
}

std::size_t GridPacking::visited_tile_count() const {
  std::size_t n = 0;
  for (auto i : sampled_columns()) n += column_tiles(i).size();
  return n;
}

std::int64_t GridPacking::chain_count() const {
  if (t_ >= 0.0) return 0;
  const double E = std::exp(-t_);
  const double at = std::abs(t_);
  // lines x + |t| y = s crossing both vertical edges inside the rectangle
  const double L = (rect_.b + at * rect_.c) * E;
  const double H = (rect_.a + at * rect_.d) * E;
  if (L > H) return 0;
  const std::int64_t lo = std::max(first_, ceil64(L) - 1);
  const std::int64_t hi = std::min(last_, floor64(H));
  return hi >= lo ? hi - lo + 1 : 0;
}

std::pair<GridPacking, GridPacking> GridPacking::split() const {
  const auto cols = sampled_columns();
  if (cols.size() < 2) {
    throw NumericalError(ErrorKind::InvalidArgument, "cannot split a packing with one column");
  }
  const std::size_t mid = cols.size() / 2;
  GridPacking left(t_, rect_, first_, cols[mid - 1], stride_, offset_);
  GridPacking right(t_, rect_, cols[mid], last_, stride_, 0);
  return {left, right};
}

GridPacking build_packing(double t, Rect rect, std::size_t tile_budget) {
  require_rect(rect);
  if (!(t <= 0.0) || !std::isfinite(t)) {
    throw NumericalError(ErrorKind::InvalidArgument, "packing needs finite t <= 0");
  }
  const double E = std::exp(-t);
  const double at = std::abs(t);
  const std::int64_t first = floor64(rect.a * E + at * rect.c * E);
  const std::int64_t last = std::max(first, ceil64(rect.b * E + at * rect.d * E) - 1);
  const double estimate = rect.area() * E * E;
  const double budget = static_cast<double>(std::max<std::size_t>(1, tile_budget));
  const auto stride = std::max<std::int64_t>(1, ceil64(estimate / budget));
  const std::int64_t offset = std::min(stride / 2, (last - first) / 2);
  return GridPacking(t, rect, first, last, stride, offset);
}

double chain_lower_bound(double t, Rect rect) {
  return ((rect.d - rect.c) * std::abs(t) - (rect.b - rect.a)) / std::exp(t);
}

GridPacking make_sheared_packing(double t, Rect rect, std::size_t tile_budget) {
  require_rect(rect);
  if (!(t < 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "sheared packing needs t < 0");
  if (!((rect.d - rect.c) * std::abs(t) > rect.b - rect.a)) {
    throw NumericalError(ErrorKind::TooFewChains,
                         "(d-c)|t| must exceed (b-a) for chains to cross the rectangle");
  }
  return build_packing(t, rect, tile_budget);
}

std::vector<BoundaryPoint> clip_to_rect(const std::array<BoundaryPoint, 4>& tile, const Rect& r) {
  std::vector<BoundaryPoint> poly(tile.begin(), tile.end());
  std::vector<BoundaryPoint> next;
  // edge k: inside test and intersection with the boundary line
  auto clip = [&](auto inside, auto cross) {
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const auto& p = poly[k];
      const auto& q = poly[(k + 1) % poly.size()];
      const bool pin = inside(p);
      const bool qin = inside(q);
      if (pin) next.push_back(p);
      if (pin != qin) next.push_back(cross(p, q));
    }
    poly.swap(next);
  };
  auto at_x = [](double x) {
    return [x](BoundaryPoint p, BoundaryPoint q) {
      const double s = (x - p.x) / (q.x - p.x);
      return BoundaryPoint{x, p.y + s * (q.y - p.y)};
    };
  };
  auto at_y = [](double y) {
    return [y](BoundaryPoint p, BoundaryPoint q) {
      const double s = (y - p.y) / (q.y - p.y);
      return BoundaryPoint{p.x + s * (q.x - p.x), y};
    };
  };
  clip([&](BoundaryPoint p) { return p.x >= r.a; }, at_x(r.a));
  if (!poly.empty()) clip([&](BoundaryPoint p) { return p.x <= r.b; }, at_x(r.b));
  if (!poly.empty()) clip([&](BoundaryPoint p) { return p.y >= r.c; }, at_y(r.c));
  if (!poly.empty()) clip([&](BoundaryPoint p) { return p.y <= r.d; }, at_y(r.d));
  if (poly.size() < 3) return {};
  double twice_area = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto& p = poly[k];
    const auto& q = poly[(k + 1) % poly.size()];
    twice_area += p.x * q.y - q.x * p.y;
  }
  if (!(std::abs(twice_area) > 0.0)) return {};
  return poly;
}

double variation(const ScalarField& u, const GridPacking& packing, double Q, int m,
                 unsigned threads) {
  if (!(Q >= 1.0)) throw NumericalError(ErrorKind::InvalidArgument, "variation needs Q >= 1");
  if (m < 2) throw NumericalError(ErrorKind::InvalidArgument, "oscillation grid needs m >= 2");
  const auto cols = packing.sampled_columns();
  const Rect& rect = packing.rect();
  const double t = packing.t();
  const double et = std::exp(t);
  const double step = 1.0 / (m - 1);
  std::vector<double> column_sums(cols.size(), 0.0);
  parallel_for(cols.size(), threads, [&](std::size_t k) {
    double sum = 0.0;
    for (const auto& tile : packing.column_tiles(cols[k])) {
      const bool interior = std::all_of(tile.corners.begin(), tile.corners.end(),
                                        [&](BoundaryPoint p) { return rect.contains(p); });
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      auto take = [&](BoundaryPoint p) {
        const double v = u(p);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      };
      if (!interior) {
        const auto poly = clip_to_rect(tile.corners, rect);
        if (poly.empty()) continue;
        for (const auto& p : poly) take(p);
      }
      for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
          const auto p = lattice_point(t, et, static_cast<double>(tile.i) + a * step,
                                       static_cast<double>(tile.j) + b * step);
          if (interior || rect.contains(p)) take(p);
        }
      }
      sum += std::pow(hi - lo, Q);
    }
    column_sums[k] = sum;
  });
  double total = 0.0;
  for (double s : column_sums) total += s;
  return total * static_cast<double>(packing.stride());
}

double variation_lower_bound_x(double t, Rect rect) {
  const double at = std::abs(t);
  return at * ((rect.d - rect.c) * at - (rect.b - rect.a)) /
         ((rect.b - rect.a) + 2.0 * at * std::exp(t));
}

std::string_view to_string(FoliationVerdict v) {
  switch (v) {
    case FoliationVerdict::PreservesFoliation: return "PreservesFoliation";
    case FoliationVerdict::ViolatesFoliation: return "ViolatesFoliation";
    case FoliationVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

FoliationReport foliation_certificate(const BlackBoxMap& f, Rect rect,
                                      std::span<const double> t_values,
                                      const FoliationOptions& opts) {
  if (t_values.size() < 2) {
    throw NumericalError(ErrorKind::InvalidArgument, "foliation certificate needs two or more t");
  }
  FoliationReport rep;
  const ScalarField u = [&f](BoundaryPoint p) { return f.forward(p).y; };
  for (double t : t_values) {
    if (!(t < 0.0)) throw NumericalError(ErrorKind::InvalidArgument, "t values must be negative");
    const auto packing = build_packing(t, rect, opts.tile_budget);
    const double v = variation(u, packing, 2.0, opts.grid, opts.threads);
    rep.samples.push_back({t, v, packing.chain_count(), packing.stride(),
                           packing.visited_tile_count()});
  }

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = 0.0;
  for (const auto& s : rep.samples) {
    vmin = std::min(vmin, s.variation);
    vmax = std::max(vmax, s.variation);
  }
  if (vmax == 0.0) {
    rep.max_over_min = 1.0;
  } else {
    rep.max_over_min = vmin > 0.0 ? vmax / vmin : std::numeric_limits<double>::infinity();
  }

  if (vmin > 0.0) {
    const double n = static_cast<double>(rep.samples.size());
    double mx = 0.0, my = 0.0;
    for (const auto& s : rep.samples) {
      mx += std::log(std::abs(s.t));
      my += std::log(s.variation);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& s : rep.samples) {
      const double dx = std::log(std::abs(s.t)) - mx;
      const double dy = std::log(s.variation) - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    rep.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
    rep.r_squared = (sxx > 0.0 && syy > 0.0) ? sxy * sxy / (sxx * syy) : 0.0;
  }

  if (rep.max_over_min < opts.bounded_ratio && rep.exponent <= opts.growth_exponent) {
    rep.verdict = FoliationVerdict::PreservesFoliation;
  } else if (rep.exponent > opts.growth_exponent && rep.r_squared > opts.growth_r_squared) {
    rep.verdict = FoliationVerdict::ViolatesFoliation;
  }
  return rep;
}

}  // namespace qsb
