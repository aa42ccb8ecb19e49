#include "bergerflow/phase.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bergerflow/integrate.hpp"

namespace bergerflow {

namespace {

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

void require_collapse(const FlowParams& params, const char* op) {
  params.validate();
  if (params.kind != FlowKind::Collapse) {
    throw InvalidParameter(std::string(op) + " requires the collapse flow");
  }
}

std::vector<double> linspace(std::pair<double, double> range, int n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = range.first;
    return out;
  }
  for (int i = 0; i < n; ++i) {
    out[i] = range.first + (range.second - range.first) * i / (n - 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::K:
      return "K";
    case RegionTag::K1:
      return "K1";
    case RegionTag::K2:
      return "K2";
    case RegionTag::K3:
      return "K3";
  }
  return "unknown";
}

Region Region::k(double v, double w) {
  Region r{RegionTag::K, v, w};
  r.validate();
  return r;
}

Region Region::k1(double v, double w) {
  Region r{RegionTag::K1, v, w};
  r.validate();
  return r;
}

Region Region::k2(double v) {
  Region r{RegionTag::K2, v, 0.0};
  r.validate();
  return r;
}

Region Region::k3(double v, double w) {
  Region r{RegionTag::K3, v, w};
  r.validate();
  return r;
}

void Region::validate() const {
  bool ok = std::isfinite(v) && std::isfinite(w) && v > 0.0;
  switch (tag) {
    case RegionTag::K:
      ok = ok && w > 0.0;
      break;
    case RegionTag::K1:
      ok = ok && v < 2.0 / 3.0 * w;
      break;
    case RegionTag::K2:
      break;
    case RegionTag::K3:
      ok = ok && w > 0.0 && w < v;
      break;
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "invalid parameters for region " << to_string(tag) << ": v=" << v << " w=" << w;
    throw InvalidParameter(msg.str());
  }
}

std::array<Point, 3> Region::vertices() const {
  switch (tag) {
    case RegionTag::K:
      return {Point{0.0, w}, Point{v, w}, Point{0.0, w + v}};
    case RegionTag::K1:
      return {Point{0.0, w - 1.5 * v}, Point{v, w}, Point{0.0, w}};
    case RegionTag::K2:
      return {Point{0.0, 0.0}, Point{v, v}, Point{v, 1.5 * v}};
    case RegionTag::K3:
      return {Point{0.0, 0.0}, Point{v, w}, Point{v, v}};
  }
  return {};
}

bool region_contains(const Region& region, Point p) {
  region.validate();
  const double v = region.v;
  const double w = region.w;
  if (!(0.0 <= p.x && p.x <= v)) return false;
  switch (region.tag) {
    case RegionTag::K:
      return w <= p.y && p.y <= w + v - p.x;
    case RegionTag::K1:
      return 1.5 * p.x + w - 1.5 * v <= p.y && p.y <= w;
    case RegionTag::K2:
      return p.x <= p.y && p.y <= 1.5 * p.x;
    case RegionTag::K3:
      return w / v * p.x <= p.y && p.y <= p.x;
  }
  return false;
}

double distance_outside(const Region& region, Point p) {
  if (region_contains(region, p)) return 0.0;
  const auto vs = region.vertices();
  double best = INFINITY;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    best = std::min(best, segment_distance(p, vs[i], vs[(i + 1) % vs.size()]));
  }
  return best;
}

std::optional<Region> region_for_initial(const FlowParams& params, const State& state) {
  require_collapse(params, "region_for_initial");
  const double x = state.alpha;
  const double y = state.beta;
  if (!(x > 0.0) || !(y > 0.0)) {
    throw DomainError("region_for_initial: state outside the open first quadrant");
  }
  if (params.product() < 0.0) return Region::k(x, y);
  if (x < 2.0 / 3.0 * y) return Region::k1(x, y);
  if (x < y && y < 1.5 * x) return Region::k2(x);
  if (y < x) return Region::k3(x, y);
  return std::nullopt;
}

std::pair<double, double> limit_bracket(const Region& region) {
  region.validate();
  switch (region.tag) {
    case RegionTag::K:
      return {region.w, region.w + region.v};
    case RegionTag::K1:
      return {region.w - 1.5 * region.v, region.w};
    case RegionTag::K2:
    case RegionTag::K3:
      return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

std::vector<FluxViolation> inward_flux_check(const Region& region, const FlowParams& params,
                                             int n_samples) {
  require_collapse(params, "inward_flux_check");
  region.validate();
  if (n_samples < 1) throw InvalidParameter("inward_flux_check: n_samples must be positive");
  const auto vs = region.vertices();
  std::vector<FluxViolation> violations;
  for (int e = 0; e < 3; ++e) {
    const Point a = vs[e];
    const Point b = vs[(e + 1) % 3];
    if (a.x == 0.0 && b.x == 0.0) continue;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    // Left normal of a counterclockwise edge points inside.
    const Point normal{-dy / len, dx / len};
    for (int i = 1; i <= n_samples; ++i) {
      const double s = static_cast<double>(i) / (n_samples + 1);
      const Point p{a.x + s * dx, a.y + s * dy};
      if (!(p.x > 0.0) || !(p.y > 0.0)) continue;
      const Point f = vector_field_unchecked(params, p);
      const double flux = f.x * normal.x + f.y * normal.y;
      if (flux < -1e-12) violations.push_back({p, e, flux});
    }
  }
  return violations;
}

double containment_report(const Trajectory& trajectory, const Region& region) {
  return containment_report(std::span<const TrajectorySample>(trajectory.samples), region);
}

double containment_report(std::span<const TrajectorySample> samples, const Region& region) {
  double worst = 0.0;
  for (const auto& s : samples) {
    worst = std::max(worst, distance_outside(region, {s.state.alpha, s.state.beta}));
  }
  return worst;
}

std::vector<PortraitSample> sample_portrait(const FlowParams& params,
                                            std::pair<double, double> x_range,
                                            std::pair<double, double> y_range, int nx, int ny) {
  params.validate();
  if (nx < 1 || ny < 1) throw InvalidParameter("sample_portrait: grid counts must be positive");
  if (!(x_range.first > 0.0) || !(y_range.first > 0.0) || x_range.second < x_range.first ||
      y_range.second < y_range.first) {
    throw DomainError("sample_portrait: ranges must lie in the open first quadrant");
  }
  const auto xs = linspace(x_range, nx);
  const auto ys = linspace(y_range, ny);
  std::vector<PortraitSample> grid;
  grid.reserve(static_cast<std::size_t>(nx) * ny);
  for (const double y : ys) {
    for (const double x : xs) {
      const Point f = vector_field(params, {x, y});
      const double mag = std::hypot(f.x, f.y);
      const Point dir = mag > 0.0 ? Point{f.x / mag, f.y / mag} : Point{0.0, 0.0};
      grid.push_back({{x, y}, dir, mag});
    }
  }
  return grid;
}

}  // namespace bergerflow
