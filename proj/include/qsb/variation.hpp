#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qsb/boundary_point.hpp"
#include "qsb/certification.hpp"

namespace qsb {

// [a, b] x [c, d]
struct Rect {
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  double d = 1.0;

  double area() const { return (b - a) * (d - c); }
  bool contains(BoundaryPoint p) const { return p.x >= a && p.x <= b && p.y >= c && p.y <= d; }
};

// Parallelogram lambda_t([i, i+1] x [j, j+1]); corners counter-clockwise from lambda_t(i, j).
struct Tile {
  std::int64_t i;
  std::int64_t j;
  std::array<BoundaryPoint, 4> corners;
};

inline constexpr std::size_t kDefaultTileBudget = 262144;

// The image of the unit grid under lambda_t (t <= 0), restricted to a rectangle.
//
// Tiles are grouped by lattice column i. For t < 0 a column is the band
// i e^t <= x + |t| y <= (i+1) e^t, a nearly horizontal strip of slope -1/|t|;
// columns that run from the left edge to the right edge inside the rectangle
// are the chains. Tiles are never stored: a column's tiles are generated on
// demand. When the full packing is too large, every k-th column is visited and
// sums are weighted by k (`stride`); with stride 1 everything is exact.
class GridPacking {
 public:
  GridPacking(double t, Rect rect, std::int64_t first_column, std::int64_t last_column,
              std::int64_t stride, std::int64_t offset);

  double t() const { return t_; }
  const Rect& rect() const { return rect_; }
  double tile_area() const;

  std::int64_t first_column() const { return first_; }
  std::int64_t last_column() const { return last_; }
  std::int64_t stride() const { return stride_; }

  // Columns actually visited: first + offset + k * stride <= last.
  std::vector<std::int64_t> sampled_columns() const;
  // Tiles of column i that meet the rectangle (a tile may touch it only on its boundary).
  std::vector<Tile> column_tiles(std::int64_t i) const;
  // Tile count over the visited columns.
  std::size_t visited_tile_count() const;
  // Columns crossing from x = a to x = b inside the rectangle (0 when t = 0).
  std::int64_t chain_count() const;
  // Columns whose band meets the rectangle, over the full packing.
  std::int64_t column_count() const { return last_ - first_ + 1; }

  // Two packings over disjoint halves of the visited columns, same stride.
  std::pair<GridPacking, GridPacking> split() const;

 private:
  double t_;
  Rect rect_;
  std::int64_t first_;
  std::int64_t last_;
  std::int64_t stride_;
  std::int64_t offset_;
};

// Any t <= 0 and nondegenerate rectangle. The stride is the smallest k keeping
// the visited tile count near `tile_budget`.
GridPacking build_packing(double t, Rect rect, std::size_t tile_budget = kDefaultTileBudget);

// ((d - c)|t| - (b - a)) / e^t
double chain_lower_bound(double t, Rect rect);

// Requires t < 0 and (d - c)|t| > (b - a); TooFewChains otherwise.
GridPacking make_sheared_packing(double t, Rect rect,
                                 std::size_t tile_budget = kDefaultTileBudget);

// Tile clipped to the rectangle (Sutherland-Hodgman); empty when they only touch.
std::vector<BoundaryPoint> clip_to_rect(const std::array<BoundaryPoint, 4>& tile, const Rect& r);

using ScalarField = std::function<double(BoundaryPoint)>;

inline constexpr int kDefaultOscillationGrid = 8;

// Sum over tiles of osc(u | tile ∩ rect)^Q, weighted by the packing stride.
// The oscillation is taken over the clipped polygon's vertices plus an m x m
// corner-inclusive lattice grid on the tile, restricted to the rectangle.
double variation(const ScalarField& u, const GridPacking& packing, double Q,
                 int m = kDefaultOscillationGrid, unsigned threads = 1);

// |t| ((d-c)|t| - (b-a)) / ((b-a) + 2|t| e^t): lower bound for V_2(x) on the
// sheared packing, from the chain argument.
double variation_lower_bound_x(double t, Rect rect);

enum class FoliationVerdict { PreservesFoliation, ViolatesFoliation, Inconclusive };

std::string_view to_string(FoliationVerdict v);

struct FoliationSample {
  double t;
  double variation;
  std::int64_t chains;
  std::int64_t stride;
  std::size_t tiles_visited;
};

struct FoliationReport {
  std::vector<FoliationSample> samples;
  double exponent = 0.0;     // least-squares slope of ln V against ln|t|
  double r_squared = 0.0;
  double max_over_min = 1.0;
  FoliationVerdict verdict = FoliationVerdict::Inconclusive;
};

struct FoliationOptions {
  std::size_t tile_budget = kDefaultTileBudget;
  int grid = kDefaultOscillationGrid;
  double bounded_ratio = 4.0;     // max/min below this counts as bounded
  double growth_exponent = 1.0;   // fitted exponent above this counts as growing
  double growth_r_squared = 0.9;
  unsigned threads = 1;
};

// V_2(y o F) on the t-packings of `rect`. PreservesFoliation: max/min <
// bounded_ratio and exponent <= growth_exponent. ViolatesFoliation: exponent >
// growth_exponent with R^2 > growth_r_squared. Inconclusive otherwise.
FoliationReport foliation_certificate(const BlackBoxMap& f, Rect rect,
                                      std::span<const double> t_values,
                                      const FoliationOptions& opts = {});

}  // namespace qsb
