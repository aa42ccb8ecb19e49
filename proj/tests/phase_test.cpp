#include "bergerflow/phase.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bergerflow/integrate.hpp"

namespace bergerflow {
namespace {

const FlowParams kPlus = FlowParams::collapse(2.0, 1.0, 1.0);
const FlowParams kMinus = FlowParams::collapse(2.0, -1.0, 1.0);

TEST(RegionContains, Examples) {
  EXPECT_TRUE(region_contains(Region::k(1.0, 1.0), {0.5, 1.2}));
  EXPECT_FALSE(region_contains(Region::k(1.0, 1.0), {0.5, 1.6}));
  EXPECT_TRUE(region_contains(Region::k2(1.0), {0.8, 1.0}));
  EXPECT_TRUE(region_contains(Region::k1(1.0 / 3.0, 1.0), {0.0, 0.5}));
  EXPECT_FALSE(region_contains(Region::k1(1.0 / 3.0, 1.0), {0.0, 0.49}));
  EXPECT_TRUE(region_contains(Region::k3(1.0, 0.5), {1.0, 0.75}));
  EXPECT_FALSE(region_contains(Region::k3(1.0, 0.5), {1.01, 0.75}));
  EXPECT_FALSE(region_contains(Region::k(1.0, 1.0), {-0.01, 1.5}));
}

TEST(RegionContains, VerticesAreMembers) {
  for (const auto& r : {Region::k(0.7, 1.3), Region::k1(0.5, 1.0), Region::k2(0.8),
                        Region::k3(1.3, 1.0)}) {
    for (const auto& v : r.vertices()) EXPECT_TRUE(region_contains(r, v)) << to_string(r.tag);
  }
}

TEST(RegionContains, InvalidParameters) {
  EXPECT_THROW(Region::k(0.0, 1.0), InvalidParameter);
  EXPECT_THROW(Region::k1(0.7, 1.0), InvalidParameter);
  EXPECT_THROW(Region::k2(-1.0), InvalidParameter);
  EXPECT_THROW(Region::k3(1.0, 1.0), InvalidParameter);
  Region bad{RegionTag::K3, 1.0, 2.0};
  EXPECT_THROW(region_contains(bad, {0.5, 0.5}), InvalidParameter);
}

TEST(DistanceOutside, ZeroInsidePositiveOutside) {
  const auto r = Region::k(1.0, 1.0);
  EXPECT_EQ(distance_outside(r, {0.2, 1.1}), 0.0);
  EXPECT_NEAR(distance_outside(r, {0.5, 0.9}), 0.1, 1e-15);
  EXPECT_NEAR(distance_outside(r, {1.0, 1.0 + 1.0}), std::sqrt(0.5), 1e-15);
}

TEST(RegionForInitial, CaseAssignment) {
  EXPECT_EQ(region_for_initial(kMinus, {0.0, 1.0, 1.0}), Region::k(1.0, 1.0));
  EXPECT_EQ(region_for_initial(kPlus, {0.0, 0.5, 1.0}), Region::k1(0.5, 1.0));
  EXPECT_EQ(region_for_initial(kPlus, {0.0, 0.8, 1.0}), Region::k2(0.8));
  EXPECT_EQ(region_for_initial(kPlus, {0.0, 1.3, 1.0}), Region::k3(1.3, 1.0));
  EXPECT_FALSE(region_for_initial(kPlus, {0.0, 2.0 / 3.0, 1.0}));
  EXPECT_FALSE(region_for_initial(kPlus, {0.0, 1.0, 1.0}));
  EXPECT_THROW(region_for_initial(FlowParams::normalized(2.0, 0.5, 1.0), {0.0, 1.0, 1.0}),
               InvalidParameter);
}

TEST(LimitBracket, YExtentOnAxis) {
  EXPECT_EQ(limit_bracket(Region::k(1.0, 1.0)), std::make_pair(1.0, 2.0));
  EXPECT_EQ(limit_bracket(Region::k1(0.4, 1.0)).second, 1.0);
  EXPECT_NEAR(limit_bracket(Region::k1(0.4, 1.0)).first, 0.4, 1e-15);
  EXPECT_EQ(limit_bracket(Region::k2(1.0)), std::make_pair(0.0, 0.0));
}

TEST(InwardFlux, CaseRegionsTrap) {
  EXPECT_TRUE(inward_flux_check(Region::k(1.0, 1.0), kMinus, 1000).empty());
  EXPECT_TRUE(inward_flux_check(Region::k2(1.0), kPlus, 1000).empty());
  EXPECT_TRUE(inward_flux_check(Region::k1(0.4, 1.0), kPlus, 1000).empty());
  EXPECT_TRUE(inward_flux_check(Region::k3(1.3, 1.0), kPlus, 1000).empty());
  for (const double eps : {0.5, 3.0}) {
    EXPECT_TRUE(inward_flux_check(Region::k(eps, 1.0), kMinus, 1000).empty());
  }
}

TEST(InwardFlux, WrongRegionIsDetected) {
  const auto violations = inward_flux_check(Region::k3(1.0, 0.5), kMinus, 1000);
  ASSERT_FALSE(violations.empty());
  // Direct evaluation at a reported point confirms the outward component.
  const auto& v = violations.front();
  const Point f = vector_field(kMinus, v.point);
  EXPECT_LT(v.inward_flux, -1e-12);
  EXPECT_GT(std::hypot(f.x, f.y), 0.0);
}

TEST(InwardFlux, RequiresCollapseFlow) {
  EXPECT_THROW(inward_flux_check(Region::k2(1.0), FlowParams::normalized(2.0, 0.5, 1.0), 10),
               InvalidParameter);
}

TEST(Containment, TrajectoriesStayInTheirRegions) {
  for (const auto& params :
       {FlowParams::collapse(2.0, -1.0, 1.0), FlowParams::collapse(2.0, 1.0, 0.4),
        FlowParams::collapse(2.0, 1.0, 0.5), FlowParams::collapse(2.0, 1.0, 0.8),
        FlowParams::collapse(-2.0, -1.0, 1.3)}) {
    const auto traj = integrate(params, {}, 1e4);
    const auto region = region_for_initial(params, initial_state(params));
    ASSERT_TRUE(region);
    EXPECT_LE(containment_report(traj, *region), 1e-9) << params.epsilon;
  }
}

TEST(Containment, RebasedRegionsContainTails) {
  std::mt19937_64 rng(17);
  for (const auto& params :
       {FlowParams::collapse(2.0, -1.0, 1.0), FlowParams::collapse(2.0, 1.0, 0.4),
        FlowParams::collapse(2.0, 1.0, 0.8), FlowParams::collapse(2.0, 1.0, 1.3)}) {
    const auto traj = integrate(params, {}, 1e4);
    std::uniform_int_distribution<std::size_t> pick(0, traj.samples.size() - 2);
    for (int i = 0; i < 10; ++i) {
      const std::size_t l = pick(rng);
      const auto region = region_for_initial(params, traj.samples[l].state);
      if (!region) continue;
      const std::span<const TrajectorySample> tail(traj.samples.begin() + l, traj.samples.end());
      EXPECT_LE(containment_report(tail, *region), 1e-9);
    }
  }
}

TEST(Containment, ConstantTrajectoryIsInside) {
  IntegratorConfig cfg;
  cfg.stop_on_equilibrium = false;
  const auto traj = integrate(FlowParams::normalized(2.0, 0.5, 1.0), cfg, 5.0);
  const auto& s = traj.samples.front().state;
  EXPECT_LE(containment_report(traj, Region::k(s.alpha, s.beta)), 1e-12);
}

TEST(Portrait, UnitDirectionsAndMagnitudes) {
  const auto grid = sample_portrait(kPlus, {0.5, 1.5}, {0.5, 1.5}, 3, 3);
  ASSERT_EQ(grid.size(), 9u);
  const auto& centre = grid[4];
  EXPECT_EQ(centre.point, (Point{1.0, 1.0}));
  EXPECT_NEAR(centre.direction.x, -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(centre.direction.y, -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(centre.magnitude, std::sqrt(2.0) / 32.0, 1e-16);
  for (const auto& s : sample_portrait(kPlus, {0.05, 1.5}, {0.05, 1.5}, 20, 20)) {
    EXPECT_GT(s.magnitude, 0.0);
    EXPECT_NEAR(std::hypot(s.direction.x, s.direction.y), 1.0, 1e-14);
  }
}

TEST(Portrait, NormalizedDirectionFollowsCurve) {
  const auto p = FlowParams::normalized(2.0, 0.5, 1.0);
  for (const double eps : {0.3, 0.8, 1.7, 4.0}) {
    const Point u = curve_point(eps);
    const auto s = sample_portrait(p, {u.x, u.x}, {u.y, u.y}, 1, 1).front();
    const Point t = curve_tangent(eps);
    const double tn = std::hypot(t.x, t.y);
    EXPECT_NEAR(std::abs(s.direction.x * t.y - s.direction.y * t.x) / tn, 0.0, 1e-10);
  }
}

TEST(Portrait, RejectsAxis) {
  EXPECT_THROW(sample_portrait(kPlus, {0.0, 1.0}, {0.1, 1.0}, 4, 4), DomainError);
  EXPECT_THROW(sample_portrait(kPlus, {0.1, 1.0}, {-1.0, 1.0}, 4, 4), DomainError);
}

}  // namespace
}  // namespace bergerflow
