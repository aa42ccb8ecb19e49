#include "bergerflow/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace bergerflow {
namespace {

constexpr double kSqrtC1 = 0.370018484153678110702808454961;
constexpr double kSqrtCTwoThirds = 0.423565428818709668965412646098;

TEST(VectorField, CollapseExamples) {
  const auto p = FlowParams::collapse(2.0, 1.0, 1.0);
  const Point f = vector_field(p, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(f.x, -1.0 / 32.0);
  EXPECT_DOUBLE_EQ(f.y, -1.0 / 32.0);

  const Point g = vector_field(p, {2.0 / 3.0, 1.0});
  EXPECT_NEAR(g.x, -1.0 / 36.0, 1e-16);
  EXPECT_NEAR(g.y, -1.0 / 24.0, 1e-16);

  const Point h = vector_field(FlowParams::collapse(2.0, -1.0, 1.0), {1.0, 1.0});
  EXPECT_DOUBLE_EQ(h.x, -33.0 / 32.0);
  EXPECT_DOUBLE_EQ(h.y, 7.0 / 32.0);
}

TEST(VectorField, NormalizedCriticalPoint) {
  const Point f = vector_field(FlowParams::normalized(2.0, 0.5, 1.0), {kSqrtC1, kSqrtC1});
  EXPECT_LE(std::hypot(f.x, f.y), 1e-15);
}

TEST(VectorField, DomainErrors) {
  const auto p = FlowParams::collapse(2.0, 1.0, 1.0);
  EXPECT_THROW(vector_field(p, {0.0, 1.0}), DomainError);
  EXPECT_THROW(vector_field(p, {1.0, -0.5}), DomainError);
}

TEST(VectorField, QConsistencyCollapse) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = FlowParams::collapse((i & 1) ? 2.0 : -2.0, (i & 2) ? 1.0 : -1.0, 1.0);
    const Point pt{dist(rng), dist(rng)};
    const Point f = vector_field(p, pt);
    const auto q = q1_collapse_components(p, pt.x, pt.y);
    EXPECT_NEAR(f.x, pt.x / 2.0 * q.q00, 1e-13 * std::max(1.0, std::abs(f.x)));
    EXPECT_NEAR(f.y, pt.y / 2.0 * q.q11, 1e-13 * std::max(1.0, std::abs(f.y)));
  }
}

TEST(VectorField, QConsistencyNormalized) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = FlowParams::normalized((i & 1) ? 2.0 : -2.0, (i & 2) ? 0.5 : -0.5, 1.0);
    const Point pt{dist(rng), dist(rng)};
    const Point f = vector_field(p, pt);
    const auto q = q1_normalized_components(p, pt.x, pt.y);
    const double e6 = energy_density_sixth(p, pt.x, pt.y);
    EXPECT_NEAR(f.x, pt.x / 2.0 * (q.q00 + e6), 1e-13 * std::max(1.0, std::abs(f.x)));
    EXPECT_NEAR(f.y, pt.y / 2.0 * (q.q11 + e6), 1e-13 * std::max(1.0, std::abs(f.y)));
  }
}

TEST(VectorField, CollapseFiberStrictlyDecreases) {
  for (const double al : {2.0, -2.0}) {
    const auto p = FlowParams::collapse(2.0, al / 2.0, 1.0);
    for (int i = 1; i <= 200; ++i) {
      for (int j = 1; j <= 200; ++j) {
        const Point pt{3.0 * i / 200.0, 3.0 * j / 200.0};
        ASSERT_LT(vector_field(p, pt).x, 0.0) << pt.x << "," << pt.y;
      }
    }
  }
}

TEST(VectorField, NormalizedPreservesVolume) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto p = FlowParams::normalized(2.0, (i & 1) ? 0.5 : -0.5, 1.0);
    const Point pt{dist(rng), dist(rng)};
    const Point f = vector_field(p, pt);
    const double rate = pt.y * pt.y * f.x + 2.0 * pt.x * pt.y * f.y;
    const double scale = pt.y * pt.y * std::abs(f.x) + 2.0 * pt.x * pt.y * std::abs(f.y);
    EXPECT_LE(std::abs(rate), 1e-12 * std::max(scale, 1e-300));
  }
}

TEST(InitialState, Examples) {
  const State c = initial_state(FlowParams::collapse(2.0, 1.0, 0.5));
  EXPECT_EQ(c.alpha, 0.5);
  EXPECT_EQ(c.beta, 1.0);
  const State n = initial_state(FlowParams::normalized(2.0, 0.5, 1.0));
  EXPECT_NEAR(n.alpha, kSqrtC1, 1e-15);
  EXPECT_NEAR(n.beta, kSqrtC1, 1e-15);
  const double eps = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  const State u = initial_state(FlowParams::normalized(2.0, 0.5, eps));
  EXPECT_NEAR(u.alpha, eps, 1e-16);
  EXPECT_NEAR(u.beta, 1.0, 1e-15);
}

TEST(ClosedForm, Examples) {
  const auto one = closed_form(FlowParams::collapse(2.0, 1.0, 1.0), 12.0);
  ASSERT_TRUE(one);
  EXPECT_DOUBLE_EQ(one->alpha, 0.5);
  EXPECT_DOUBLE_EQ(one->beta, 0.5);

  const auto two_thirds = closed_form(FlowParams::collapse(2.0, 1.0, 2.0 / 3.0), 6.0);
  ASSERT_TRUE(two_thirds);
  EXPECT_NEAR(two_thirds->alpha, 0.471404520791031682933896241403, 1e-15);
  EXPECT_NEAR(two_thirds->beta, 0.707106781186547524400844362105, 1e-15);

  const auto constant = closed_form(FlowParams::normalized(2.0, 0.5, 2.0 / 3.0), 37.0);
  ASSERT_TRUE(constant);
  EXPECT_NEAR(constant->alpha, 2.0 / 3.0 * kSqrtCTwoThirds, 1e-15);
  EXPECT_NEAR(constant->beta, kSqrtCTwoThirds, 1e-15);

  EXPECT_FALSE(closed_form(FlowParams::collapse(2.0, -1.0, 1.0), 1.0));
  EXPECT_FALSE(closed_form(FlowParams::collapse(2.0, 1.0, 0.9), 1.0));
  EXPECT_FALSE(closed_form(FlowParams::normalized(2.0, -0.5, 2.0 / 3.0), 1.0));
  EXPECT_TRUE(closed_form(FlowParams::normalized(-2.0, 0.5, 1.0), 1.0));
}

TEST(ClosedForm, BeyondTMax) {
  EXPECT_THROW(closed_form(FlowParams::collapse(2.0, 1.0, 1.0), 16.0), DomainError);
  EXPECT_THROW(closed_form(FlowParams::collapse(-2.0, -1.0, 2.0 / 3.0), 12.5), DomainError);
  EXPECT_THROW(closed_form(FlowParams::collapse(2.0, 1.0, 1.0), -1.0), DomainError);
  EXPECT_EQ(closed_form_t_max(FlowParams::collapse(2.0, 1.0, 1.0)), 16.0);
  EXPECT_EQ(closed_form_t_max(FlowParams::collapse(2.0, 1.0, 2.0 / 3.0)), 12.0);
  EXPECT_FALSE(closed_form_t_max(FlowParams::normalized(2.0, 0.5, 1.0)));
}

TEST(ClosedForm, SolvesTheField) {
  // Derivatives of the closed forms, differentiated by hand.
  const auto p1 = FlowParams::collapse(2.0, 1.0, 1.0);
  const auto p23 = FlowParams::collapse(2.0, 1.0, 2.0 / 3.0);
  for (int i = 0; i < 100; ++i) {
    const double t = 15.9 * i / 100.0;
    const auto s = *closed_form(p1, t);
    const double d = -1.0 / (8.0 * std::sqrt(16.0 - t));
    const Point f = vector_field(p1, {s.alpha, s.beta});
    EXPECT_NEAR(f.x, d, 1e-12 * std::max(1.0, std::abs(d)));
    EXPECT_NEAR(f.y, d, 1e-12 * std::max(1.0, std::abs(d)));

    const double t2 = 11.9 * i / 100.0;
    const auto s2 = *closed_form(p23, t2);
    const double db = -0.25 / std::sqrt(36.0 - 3.0 * t2);
    const Point f2 = vector_field(p23, {s2.alpha, s2.beta});
    EXPECT_NEAR(f2.x, 2.0 / 3.0 * db, 1e-12 * std::max(1.0, std::abs(db)));
    EXPECT_NEAR(f2.y, db, 1e-12 * std::max(1.0, std::abs(db)));
  }
  for (const auto& p : {FlowParams::normalized(2.0, 0.5, 1.0),
                        FlowParams::normalized(2.0, 0.5, 2.0 / 3.0),
                        FlowParams::normalized(2.0, -0.5, 1.0)}) {
    const auto s = *closed_form(p, 3.0);
    const Point f = vector_field(p, {s.alpha, s.beta});
    EXPECT_LE(std::hypot(f.x, f.y), 1e-12);
  }
}

TEST(CurvePoint, Examples) {
  const Point u = curve_point(1.0);
  EXPECT_NEAR(u.x, kSqrtC1, 1e-15);
  EXPECT_NEAR(u.y, kSqrtC1, 1e-15);
  const Point v = curve_point(2.0 / 3.0);
  EXPECT_NEAR(v.x, 2.0 / 3.0 * kSqrtCTwoThirds, 1e-15);
  EXPECT_NEAR(v.y, kSqrtCTwoThirds, 1e-15);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> log_eps(std::log(0.01), std::log(100.0));
  for (int i = 0; i < 100; ++i) {
    const Point w = curve_point(std::exp(log_eps(rng)));
    EXPECT_NEAR(volume(w.x, w.y), 1.0, 1e-14);
  }
}

TEST(CurveTangent, MatchesCentralDifference) {
  for (const double eps : {0.1, 0.7, 1.0, 3.0, 12.0}) {
    const double h = 1e-5 * eps;
    const Point plus = curve_point(eps + h);
    const Point minus = curve_point(eps - h);
    const Point t = curve_tangent(eps);
    EXPECT_NEAR(t.x, (plus.x - minus.x) / (2.0 * h), 1e-8 * std::abs(t.x));
    EXPECT_NEAR(t.y, (plus.y - minus.y) / (2.0 * h), 1e-8 * std::abs(t.y));
  }
}

TEST(CurveSpeed, RootsAndSigns) {
  const auto plus = FlowParams::normalized(2.0, 0.5, 1.0);
  const auto minus = FlowParams::normalized(2.0, -0.5, 1.0);
  EXPECT_NEAR(curve_speed(plus, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(curve_speed(plus, 2.0 / 3.0), 0.0, 1e-15);
  EXPECT_NEAR(curve_speed(minus, 1.0), 0.0, 1e-15);
  EXPECT_GT(curve_speed(plus, 0.9), 0.0);
  EXPECT_LT(curve_speed(plus, 1.1), 0.0);
  EXPECT_LT(curve_speed(plus, 0.5), 0.0);
  EXPECT_GT(curve_speed(minus, 0.5), 0.0);
  EXPECT_LT(curve_speed(minus, 2.0), 0.0);
  EXPECT_THROW(curve_speed(FlowParams::collapse(2.0, 1.0, 1.0), 1.0), InvalidParameter);
}

// Independent route for the tangency identity: project the field onto the
// finite-difference tangent and measure the normal component and the speed.
TEST(Tangency, FieldIsTangentWithSpeedK) {
  for (const double mu : {0.5, -0.5}) {
    const auto p = FlowParams::normalized(2.0, mu, 1.0);
    for (int i = 0; i < 100; ++i) {
      const double eps = 0.05 * std::pow(400.0, i / 99.0);
      const Point f = vector_field(p, curve_point(eps));
      const double fnorm = std::hypot(f.x, f.y);
      const double res = tangency_residual(p, eps);
      EXPECT_LE(res, 1e-10 * std::max(fnorm, 1e-12)) << "eps=" << eps;

      const double h = 1e-6 * eps;
      const Point a = curve_point(eps + h), b = curve_point(eps - h);
      const Point tangent{(a.x - b.x) / (2 * h), (a.y - b.y) / (2 * h)};
      const double t2 = tangent.x * tangent.x + tangent.y * tangent.y;
      const double cross = f.x * tangent.y - f.y * tangent.x;
      EXPECT_LE(std::abs(cross), 1e-7 * std::max(fnorm, 1e-12) * std::sqrt(t2));
      const double k_fd = (f.x * tangent.x + f.y * tangent.y) / t2;
      EXPECT_NEAR(curve_speed(p, eps), k_fd, 1e-6 * std::max(std::abs(k_fd), 1e-9));
    }
  }
  EXPECT_LE(tangency_residual(FlowParams::normalized(2.0, 0.5, 1.0), 1.0), 1e-12);
}

TEST(Equilibria, NormalizedPlus) {
  const auto eqs = equilibria(FlowParams::normalized(2.0, 0.5, 1.0));
  ASSERT_EQ(eqs.size(), 2u);
  EXPECT_NEAR(*eqs[0].epsilon_star, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(eqs[0].stability, Stability::Repelling);
  EXPECT_NEAR(*eqs[1].epsilon_star, 1.0, 1e-12);
  EXPECT_EQ(eqs[1].stability, Stability::Attracting);
  EXPECT_NEAR(eqs[1].location->x, kSqrtC1, 1e-12);
  for (const auto& eq : eqs) {
    const Point f = vector_field(FlowParams::normalized(2.0, 0.5, 1.0), *eq.location);
    EXPECT_LE(std::hypot(f.x, f.y), 1e-12);
  }
}

TEST(Equilibria, NormalizedMinus) {
  for (const double a : {2.0, -2.0}) {
    const auto eqs = equilibria(FlowParams::normalized(a, -a / 4.0, 1.0));
    ASSERT_EQ(eqs.size(), 1u);
    EXPECT_NEAR(*eqs[0].epsilon_star, 1.0, 1e-12);
    EXPECT_EQ(eqs[0].stability, Stability::Attracting);
  }
}

TEST(Equilibria, CollapseIsDescriptiveLine) {
  const auto eqs = equilibria(FlowParams::collapse(2.0, 1.0, 1.0));
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_EQ(eqs[0].stability, Stability::DegenerateLine);
  EXPECT_FALSE(eqs[0].location);
  EXPECT_FALSE(eqs[0].epsilon_star);
}

TEST(SignFlip, FieldIsExactlyInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Point pt{dist(rng), dist(rng)};
    const auto c = FlowParams::collapse(2.0, (i & 1) ? 1.0 : -1.0, 1.0);
    const auto cf = FlowParams::collapse(-2.0, -c.kappa, 1.0);
    EXPECT_EQ(vector_field(c, pt), vector_field(cf, pt));
    const auto n = FlowParams::normalized(2.0, (i & 1) ? 0.5 : -0.5, 1.0);
    const auto nf = FlowParams::normalized(-2.0, -n.kappa, 1.0);
    EXPECT_EQ(vector_field(n, pt), vector_field(nf, pt));
    const double eps = 0.05 + pt.x;
    EXPECT_EQ(curve_speed(n, eps), curve_speed(nf, eps));
  }
}

}  // namespace
}  // namespace bergerflow
