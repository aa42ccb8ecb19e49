// Planar vector fields of the collapse and normalized flows, their closed-form
// solutions, the unit-volume invariant curve and equilibria.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergerflow/model.hpp"

namespace bergerflow {

/// A point (x, y) = (alpha, beta) of the phase plane.
struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

/// Right-hand side (alpha', beta') at a point of the open first quadrant.
/// Throws DomainError on or across an axis.
Point vector_field(const FlowParams& params, Point point);

/// Unchecked evaluation for integrator inner loops; caller guarantees x, y > 0
/// and valid params.
Point vector_field_unchecked(const FlowParams& params, Point point) noexcept;

/// Collapse: (epsilon, 1). Normalized: sqrt(c(epsilon)) * (epsilon, 1).
State initial_state(const FlowParams& params);

/// Explicit solution for the four special initial data with a closed form:
/// the two finite-time blow-downs of the collapse flow (a*lambda = 2 with
/// epsilon = 1 or 2/3) and the constant solutions of the normalized flow.
/// Returns nullopt for every other parameter set. Throws DomainError when t
/// lies outside [0, t_max).
std::optional<State> closed_form(const FlowParams& params, double t);

/// Right end of the existence interval of the closed form, if finite.
std::optional<double> closed_form_t_max(const FlowParams& params);

/// The unit-volume curve u(e) = ((2 pi^2)^(-1/3) e^(2/3), (2 pi^2)^(-1/3) e^(-1/3)).
Point curve_point(double epsilon);

/// du/de, evaluated analytically.
Point curve_tangent(double epsilon);

/// Reduced speed k with F(u(e)) = k(e) u'(e); the normalized dynamics on the
/// curve is e' = k(e).
double curve_speed(const FlowParams& params, double epsilon);

/// |F(u(e)) - k(e) u'(e)|.
double tangency_residual(const FlowParams& params, double epsilon);

enum class Stability { Attracting, Repelling, Degenerate, DegenerateLine };

std::string_view to_string(Stability stability);

struct Equilibrium {
  /// Curve parameter of an isolated equilibrium of the normalized flow.
  std::optional<double> epsilon_star;
  /// Location in the phase plane; absent for the collapse flow's boundary line.
  std::optional<Point> location;
  Stability stability = Stability::Degenerate;
  std::string description;
};

/// Normalized: roots of k with their stability along the curve.
/// Collapse: a single descriptive DegenerateLine entry for the critical set
/// {(0, k) : k != 0}, which lies on the boundary of the domain.
std::vector<Equilibrium> equilibria(const FlowParams& params);

}  // namespace bergerflow
