// Berger-sphere ansatz for the spinor flow: parameters and pointwise
// geometric scalars.
//
// A metric of the ansatz is described by two scales: alpha along the Hopf
// fibers and beta on the horizontal complement. The round sphere is
// alpha = beta = 1. All functions here are pure.
#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bergerflow {

inline constexpr double kTwoPiSquared = 2.0 * std::numbers::pi * std::numbers::pi;

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class FlowKind { Collapse, Normalized };

std::string_view to_string(FlowKind kind);

/// Parameters of one flow.
///
/// `kappa` is the Killing constant: lambda in {-1, +1} for the collapse flow,
/// mu in {-1/2, +1/2} for the volume-normalized flow. `a` is the orientation
/// constant d omega(f1*, f2*) = +-2. Dynamics depend only on the product a*kappa.
struct FlowParams {
  FlowKind kind = FlowKind::Collapse;
  double a = 2.0;
  double kappa = 1.0;
  double epsilon = 1.0;

  static FlowParams collapse(double a, double lambda, double epsilon);
  static FlowParams normalized(double a, double mu, double epsilon);

  double product() const { return a * kappa; }

  /// Throws InvalidParameter if any field is outside its admissible set.
  void validate() const;

  bool operator==(const FlowParams&) const = default;
};

/// Flow time plus the two metric scales.
struct State {
  double t = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
};

struct QComponents {
  double q00 = 0.0;
  double q11 = 0.0;
};

struct SpinorCoefficients {
  double f = 0.0;
  double g = 0.0;
};

struct GeometryScalars {
  double volume = 0.0;
  double energy = 0.0;
  // Diagonal metric velocity in the orthonormal frame (e0, e1, e2); q22 == q11.
  // Collapse: Q1. Normalized: Q1 plus the volume-normalization correction.
  double q00 = 0.0;
  double q11 = 0.0;
  double f = 0.0;
  double g = 0.0;
};

/// c(epsilon) = (2 pi^2 epsilon)^(-2/3), the factor that rescales the Berger
/// metric with fiber length epsilon to unit volume.
double normalizing_constant(double epsilon);

/// 2 pi^2 alpha beta^2.
double volume(double alpha, double beta);
double volume(const State& state);

QComponents q1_collapse_components(const FlowParams& params, double alpha, double beta);

/// Q1 components for the normalized flow before the volume correction.
QComponents q1_normalized_components(const FlowParams& params, double alpha, double beta);

/// E / (6 vol) for the normalized flow, the isotropic correction that turns
/// Q1 into the normalized velocity in dimension 3.
double energy_density_sixth(const FlowParams& params, double alpha, double beta);

/// Coefficients with nabla_K phi = f K.phi and nabla_Y phi = g Y.phi for
/// horizontal Y.
SpinorCoefficients spinor_coefficients(const FlowParams& params, double alpha, double beta);

/// Spinorial energy 1/2 int |nabla phi|^2 = pi^2 alpha beta^2 (f^2 + 2 g^2).
double energy(const FlowParams& params, double alpha, double beta);

GeometryScalars geometry_scalars(const FlowParams& params, double alpha, double beta);

}  // namespace bergerflow
