#include "bergerflow/model.hpp"

#include <cmath>
#include <sstream>

namespace bergerflow {

namespace {

void require_positive_scales(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
    std::ostringstream msg;
    msg << "scales must be positive and finite, got alpha=" << alpha << " beta=" << beta;
    throw DomainError(msg.str());
  }
}

void require_kind(const FlowParams& params, FlowKind kind, const char* op) {
  params.validate();
  if (params.kind != kind) {
    throw InvalidParameter(std::string(op) + " requires the " + std::string(to_string(kind)) +
                           " flow");
  }
}

}  // namespace

std::string_view to_string(FlowKind kind) {
  switch (kind) {
    case FlowKind::Collapse:
      return "collapse";
    case FlowKind::Normalized:
      return "normalized";
  }
  return "unknown";
}

FlowParams FlowParams::collapse(double a, double lambda, double epsilon) {
  FlowParams p{FlowKind::Collapse, a, lambda, epsilon};
  p.validate();
  return p;
}

FlowParams FlowParams::normalized(double a, double mu, double epsilon) {
  FlowParams p{FlowKind::Normalized, a, mu, epsilon};
  p.validate();
  return p;
}

void FlowParams::validate() const {
  if (a != 2.0 && a != -2.0) {
    throw InvalidParameter("orientation constant a must be +2 or -2");
  }
  const double magnitude = kind == FlowKind::Collapse ? 1.0 : 0.5;
  if (std::abs(kappa) != magnitude) {
    std::ostringstream msg;
    msg << "Killing constant for the " << to_string(kind) << " flow must be +-" << magnitude
        << ", got " << kappa;
    throw InvalidParameter(msg.str());
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameter("epsilon must be positive and finite");
  }
}

double normalizing_constant(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameter("normalizing_constant: epsilon must be positive");
  }
  return std::pow(kTwoPiSquared * epsilon, -2.0 / 3.0);
}

double volume(double alpha, double beta) {
  require_positive_scales(alpha, beta);
  return kTwoPiSquared * alpha * beta * beta;
}

double volume(const State& state) { return volume(state.alpha, state.beta); }

QComponents q1_collapse_components(const FlowParams& params, double alpha, double beta) {
  require_kind(params, FlowKind::Collapse, "q1_collapse_components");
  require_positive_scales(alpha, beta);
  const double a = params.a;
  const double lambda = params.kappa;
  const double b2 = beta * beta;
  const double b3 = b2 * beta;
  const double b4 = b2 * b2;
  QComponents q;
  q.q00 = -9.0 / 64.0 * alpha * alpha / b4 * (a * a) + 0.5 * alpha / b3 * (a * lambda) -
          0.5 / b2 * (lambda * lambda);
  q.q11 = 3.0 / 64.0 * alpha * alpha / b4 * (a * a) - 1.0 / 8.0 * alpha / b3 * (a * lambda);
  return q;
}

QComponents q1_normalized_components(const FlowParams& params, double alpha, double beta) {
  require_kind(params, FlowKind::Normalized, "q1_normalized_components");
  require_positive_scales(alpha, beta);
  const double a = params.a;
  const double mu = params.kappa;
  const double shift = mu - 0.25 * a;
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  const double b3 = b2 * beta;
  const double b4 = b2 * b2;
  QComponents q;
  q.q00 = 0.25 / a2 * (shift * shift) + 1.0 / b2 * (-0.5 * (mu * mu) - 3.0 / 8.0 * (a * mu)) +
          alpha / b3 * (1.0 / 8.0 * (a * a) + 0.5 * (a * mu)) - 9.0 / 64.0 * a2 / b4 * (a * a);
  q.q11 = -0.25 / a2 * (shift * shift) + alpha / b3 * (-1.0 / 32.0 * (a * a) - 1.0 / 8.0 * (a * mu)) +
          3.0 / 64.0 * a2 / b4 * (a * a);
  return q;
}

double energy_density_sixth(const FlowParams& params, double alpha, double beta) {
  require_kind(params, FlowKind::Normalized, "energy_density_sixth");
  require_positive_scales(alpha, beta);
  const double a = params.a;
  const double mu = params.kappa;
  const double shift = mu - 0.25 * a;
  const double sum = 0.25 * a + mu;
  const double a2 = alpha * alpha;
  const double b2 = beta * beta;
  const double b3 = b2 * beta;
  const double b4 = b2 * b2;
  return 1.0 / 12.0 * (shift * shift) / a2 + 1.0 / 64.0 * (a * a) * a2 / b4 +
         1.0 / 24.0 * (a * shift) / b2 + 1.0 / 6.0 * (sum * sum) / b2 -
         1.0 / 12.0 * (a * sum) * alpha / b3;
}

SpinorCoefficients spinor_coefficients(const FlowParams& params, double alpha, double beta) {
  params.validate();
  require_positive_scales(alpha, beta);
  const double a = params.a;
  const double kappa = params.kappa;
  const double fiber_term = 0.25 * (alpha / (beta * beta)) * a;
  SpinorCoefficients c;
  if (params.kind == FlowKind::Collapse) {
    c.f = fiber_term;
    c.g = kappa / beta - fiber_term;
  } else {
    c.f = (kappa - 0.25 * a) / alpha + fiber_term;
    c.g = 1.0 / beta * (-0.25 * a * (alpha / beta - 1.0) + kappa);
  }
  return c;
}

double energy(const FlowParams& params, double alpha, double beta) {
  const auto [f, g] = spinor_coefficients(params, alpha, beta);
  return std::numbers::pi * std::numbers::pi * alpha * beta * beta * (f * f + 2.0 * g * g);
}

GeometryScalars geometry_scalars(const FlowParams& params, double alpha, double beta) {
  GeometryScalars s;
  s.volume = volume(alpha, beta);
  s.energy = energy(params, alpha, beta);
  const auto coeffs = spinor_coefficients(params, alpha, beta);
  s.f = coeffs.f;
  s.g = coeffs.g;
  if (params.kind == FlowKind::Collapse) {
    const auto q = q1_collapse_components(params, alpha, beta);
    s.q00 = q.q00;
    s.q11 = q.q11;
  } else {
    const auto q = q1_normalized_components(params, alpha, beta);
    const double correction = energy_density_sixth(params, alpha, beta);
    s.q00 = q.q00 + correction;
    s.q11 = q.q11 + correction;
  }
  return s;
}

}  // namespace bergerflow
