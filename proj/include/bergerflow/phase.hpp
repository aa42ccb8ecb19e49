// Trapping regions of the collapse flow and phase-portrait sampling.
//
// The regions are the compact sets used to show that integral curves of the
// collapse field stay away from the axis y = 0 and accumulate on the critical
// line x = 0:
//
//   K(v, w)  = {0 <= x <= v, w <= y <= w + v - x}                  v, w > 0
//   K1(v, w) = {0 <= x <= v, 3/2 x + w - 3/2 v <= y <= w}           0 < v < 2/3 w
//   K2(v)    = {0 <= x <= v, x <= y <= 3/2 x}                       v > 0
//   K3(v, w) = {0 <= x <= v, (w/v) x <= y <= x}                     0 < w < v
//
// Each is a triangle; its boundary points with x > 0 must see the field point
// inward.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "bergerflow/dynamics.hpp"
#include "bergerflow/model.hpp"

namespace bergerflow {

struct Trajectory;
struct TrajectorySample;

enum class RegionTag { K, K1, K2, K3 };

std::string_view to_string(RegionTag tag);

struct Region {
  RegionTag tag = RegionTag::K;
  double v = 1.0;
  double w = 1.0;  // unused for K2

  static Region k(double v, double w);
  static Region k1(double v, double w);
  static Region k2(double v);
  static Region k3(double v, double w);

  void validate() const;

  /// Vertices in counterclockwise order.
  std::array<Point, 3> vertices() const;

  bool operator==(const Region&) const = default;
};

/// Closed-set membership.
bool region_contains(const Region& region, Point point);

/// Euclidean distance from the point to the region, 0 inside.
double distance_outside(const Region& region, Point point);

/// Region assigned to an initial condition of the collapse flow:
/// a*lambda = -2 -> K(x, y); a*lambda = 2 -> K1(x, y) if x < 2/3 y,
/// K2(x) if x < y < 3/2 x, K3(x, y) if y < x. Nullopt on the separating lines.
std::optional<Region> region_for_initial(const FlowParams& params, const State& state);

/// The y-range of the region on the line x = 0, which brackets lim beta for
/// any trajectory trapped in it.
std::pair<double, double> limit_bracket(const Region& region);

struct FluxViolation {
  Point point;
  int edge = 0;
  double inward_flux = 0.0;
};

/// Samples n_samples interior points on every edge with x > 0 and returns
/// those where the field component along the unit inward normal is below
/// -1e-12.
std::vector<FluxViolation> inward_flux_check(const Region& region, const FlowParams& params,
                                             int n_samples);

/// Largest distance outside the region over the trajectory samples.
double containment_report(const Trajectory& trajectory, const Region& region);
double containment_report(std::span<const TrajectorySample> samples, const Region& region);

struct PortraitSample {
  Point point;
  Point direction;  // unit vector, (0, 0) where the field vanishes
  double magnitude = 0.0;
};

/// Field on an nx-by-ny grid spanning the closed ranges, row-major in y.
std::vector<PortraitSample> sample_portrait(const FlowParams& params,
                                            std::pair<double, double> x_range,
                                            std::pair<double, double> y_range, int nx, int ny);

}  // namespace bergerflow
