#include "bergerflow/dynamics.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace bergerflow {

namespace {

bool matches(double value, double target) { return std::abs(value - target) <= 1e-12 * target; }

void require_open_quadrant(Point p) {
  if (!(p.x > 0.0) || !(p.y > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y)) {
    std::ostringstream msg;
    msg << "point (" << p.x << ", " << p.y << ") is outside the open first quadrant";
    throw DomainError(msg.str());
  }
}

void require_normalized(const FlowParams& params, const char* op) {
  params.validate();
  if (params.kind != FlowKind::Normalized) {
    throw InvalidParameter(std::string(op) + " requires the normalized flow");
  }
}

// (2 pi^2)^(-1/3)
double curve_scale() { return 1.0 / std::cbrt(kTwoPiSquared); }

// Polynomial factor of k whose positive roots are the equilibria; coefficients
// in increasing degree.
std::vector<double> speed_factor(double product) {
  if (product > 0.0) return {-2.0, 5.0, -3.0};
  return {2.0, 0.0, 1.0, 0.0, -3.0};
}

double eval_poly(const std::vector<double>& coeffs, double t) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// Bisection on a sign-changing bracket; stops at width tol or when the
// midpoint stops moving.
double bisect_root(const std::vector<double>& coeffs, double lo, double hi, double tol) {
  double f_lo = eval_poly(coeffs, lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = eval_poly(coeffs, mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> positive_roots(const std::vector<double>& coeffs) {
  // Cauchy bound: every root satisfies |t| < 1 + max |c_i / c_n|.
  double bound = 0.0;
  for (std::size_t i = 0; i + 1 < coeffs.size(); ++i) {
    bound = std::max(bound, std::abs(coeffs[i] / coeffs.back()));
  }
  bound += 1.0;
  constexpr int kCells = 4096;
  std::vector<double> roots;
  double prev_t = bound / kCells;
  double prev_v = eval_poly(coeffs, prev_t);
  if (prev_v == 0.0) roots.push_back(prev_t);
  for (int i = 2; i <= kCells; ++i) {
    const double t = bound * i / kCells;
    const double v = eval_poly(coeffs, t);
    if (v == 0.0) {
      roots.push_back(t);
    } else if (prev_v != 0.0 && (v < 0.0) != (prev_v < 0.0)) {
      roots.push_back(bisect_root(coeffs, prev_t, t, 1e-15));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

}  // namespace

Point vector_field_unchecked(const FlowParams& params, Point p) noexcept {
  const double x = p.x;
  const double y = p.y;
  const double y2 = y * y;
  const double y3 = y2 * y;
  const double y4 = y2 * y2;
  if (params.kind == FlowKind::Collapse) {
    const double a2 = params.a * params.a;
    const double al = params.a * params.kappa;
    const double l2 = params.kappa * params.kappa;
    return {-9.0 / 128.0 * x * x * x / y4 * a2 + 0.25 * x * x / y3 * al - 0.25 * x / y2 * l2,
            3.0 / 128.0 * x * x / y3 * a2 - 1.0 / 16.0 * x / y2 * al};
  }
  if (params.product() > 0.0) {
    return {-0.25 * x * x * x / y4 + 5.0 / 12.0 * x * x / y3 - 1.0 / 6.0 * x / y2,
            1.0 / 8.0 * x * x / y3 - 5.0 / 24.0 * x / y2 + 1.0 / 12.0 / y};
  }
  return {-0.25 * x * x * x / y4 + 1.0 / 12.0 * x / y2 + 1.0 / 6.0 / x,
          1.0 / 8.0 * x * x / y3 - 1.0 / 12.0 * y / (x * x) - 1.0 / 24.0 / y};
}

Point vector_field(const FlowParams& params, Point point) {
  params.validate();
  require_open_quadrant(point);
  return vector_field_unchecked(params, point);
}

State initial_state(const FlowParams& params) {
  params.validate();
  if (params.kind == FlowKind::Collapse) {
    return {0.0, params.epsilon, 1.0};
  }
  const double s = std::sqrt(normalizing_constant(params.epsilon));
  return {0.0, s * params.epsilon, s};
}

std::optional<double> closed_form_t_max(const FlowParams& params) {
  params.validate();
  if (params.kind == FlowKind::Collapse && params.product() > 0.0) {
    if (matches(params.epsilon, 1.0)) return 16.0;
    if (matches(params.epsilon, 2.0 / 3.0)) return 12.0;
  }
  return std::nullopt;
}

std::optional<State> closed_form(const FlowParams& params, double t) {
  params.validate();
  const auto check_time = [t](double t_max) {
    if (!(t >= 0.0) || !(t < t_max)) {
      std::ostringstream msg;
      msg << "closed_form: t=" << t << " outside [0, " << t_max << ")";
      throw DomainError(msg.str());
    }
  };
  if (params.kind == FlowKind::Collapse) {
    if (params.product() < 0.0) return std::nullopt;
    if (matches(params.epsilon, 1.0)) {
      check_time(16.0);
      const double s = 0.25 * std::sqrt(16.0 - t);
      return State{t, s, s};
    }
    if (matches(params.epsilon, 2.0 / 3.0)) {
      check_time(12.0);
      const double beta = std::sqrt(36.0 - 3.0 * t) / 6.0;
      return State{t, 2.0 / 3.0 * beta, beta};
    }
    return std::nullopt;
  }
  check_time(INFINITY);
  const bool unit = matches(params.epsilon, 1.0);
  const bool two_thirds = params.product() > 0.0 && matches(params.epsilon, 2.0 / 3.0);
  if (!unit && !two_thirds) return std::nullopt;
  const double e = unit ? 1.0 : 2.0 / 3.0;
  const double s = std::sqrt(normalizing_constant(e));
  return State{t, e * s, s};
}

Point curve_point(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidParameter("curve_point: epsilon must be positive");
  const double s = curve_scale();
  const double root = std::cbrt(epsilon);
  return {s * root * root, s / root};
}

Point curve_tangent(double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidParameter("curve_tangent: epsilon must be positive");
  const double s = curve_scale();
  const double root = std::cbrt(epsilon);
  return {2.0 / 3.0 * s / root, -1.0 / 3.0 * s / (root * epsilon)};
}

double curve_speed(const FlowParams& params, double epsilon) {
  require_normalized(params, "curve_speed");
  if (!(epsilon > 0.0)) throw InvalidParameter("curve_speed: epsilon must be positive");
  const double prefactor = 1.0 / 8.0 * std::pow(kTwoPiSquared, 2.0 / 3.0);
  const double t = epsilon;
  if (params.product() > 0.0) {
    return prefactor * std::pow(t, 5.0 / 3.0) * (-3.0 * t * t + 5.0 * t - 2.0);
  }
  return prefactor * std::pow(t, -1.0 / 3.0) * (-3.0 * t * t * t * t + t * t + 2.0);
}

double tangency_residual(const FlowParams& params, double epsilon) {
  require_normalized(params, "tangency_residual");
  const Point field = vector_field(params, curve_point(epsilon));
  const Point tangent = curve_tangent(epsilon);
  const double k = curve_speed(params, epsilon);
  return std::hypot(field.x - k * tangent.x, field.y - k * tangent.y);
}

std::string_view to_string(Stability stability) {
  switch (stability) {
    case Stability::Attracting:
      return "attracting";
    case Stability::Repelling:
      return "repelling";
    case Stability::Degenerate:
      return "degenerate";
    case Stability::DegenerateLine:
      return "degenerate-line";
  }
  return "unknown";
}

std::vector<Equilibrium> equilibria(const FlowParams& params) {
  params.validate();
  if (params.kind == FlowKind::Collapse) {
    Equilibrium line;
    line.stability = Stability::DegenerateLine;
    line.description =
        "critical set {(0,k) : k != 0} on the boundary x = 0; no equilibrium in the open quadrant";
    return {line};
  }
  std::vector<Equilibrium> out;
  for (const double root : positive_roots(speed_factor(params.product()))) {
    const double delta = 1e-6 * root;
    const double left = curve_speed(params, root - delta);
    const double right = curve_speed(params, root + delta);
    Equilibrium eq;
    eq.epsilon_star = root;
    eq.location = curve_point(root);
    if (left > 0.0 && right < 0.0) {
      eq.stability = Stability::Attracting;
    } else if (left < 0.0 && right > 0.0) {
      eq.stability = Stability::Repelling;
    } else {
      eq.stability = Stability::Degenerate;
    }
    eq.description = "root of the reduced speed on the unit-volume curve";
    out.push_back(eq);
  }
  return out;
}

}  // namespace bergerflow
