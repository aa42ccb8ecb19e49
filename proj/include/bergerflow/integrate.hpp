// Adaptive Dormand-Prince 5(4) integration of the planar flows with event
// detection and trajectory recording.
#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "bergerflow/dynamics.hpp"
#include "bergerflow/model.hpp"

namespace bergerflow {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_min = 1e-14;
  double h_max = 1.0;
  long max_steps = 2'000'000;
  /// Scale below which a direction counts as collapsed.
  double collapse_tol = 1e-3;
  /// Threshold on |F| / |(alpha, beta)|.
  double equilib_tol = 1e-10;
  double event_time_tol = 1e-9;
  /// Record every n-th accepted step (the first and last states are always kept).
  int output_stride = 1;
  bool stop_on_equilibrium = true;

  void validate() const;
};

enum class EventTag { ReachedTEnd, CollapsePoint, CollapseFiber, Equilibrium, StepUnderflow };

std::string_view to_string(EventTag tag);

struct TerminationEvent {
  EventTag tag = EventTag::ReachedTEnd;
  double t_event = 0.0;
  /// CollapseFiber: beta at the event, the estimate of lim beta.
  std::optional<double> beta_limit_estimate;
  /// CollapseFiber on the collapse flow: y-range of the trapping region on x = 0.
  std::optional<std::pair<double, double>> beta_limit_bracket;
  /// Equilibrium: the state where the field norm dropped below the threshold.
  std::optional<Point> equilibrium_location;
};

struct TrajectorySample {
  State state;
  GeometryScalars scalars;
};

struct Trajectory {
  FlowParams params;
  std::vector<TrajectorySample> samples;
  TerminationEvent termination;
  /// First time alpha dropped to collapse_tol, located by bisection.
  std::optional<double> fiber_threshold_time;
  /// False when the start differs from initial_state(params); such runs lie
  /// outside the hypotheses of the convergence theorems.
  bool theorem_initial_data = true;
  long accepted_steps = 0;
  long rejected_steps = 0;

  const TrajectorySample& final_sample() const { return samples.back(); }
};

/// Thrown when max_steps accepted plus rejected steps are used up.
class StepBudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrates from initial_state(params) until t_end or a terminal event.
Trajectory integrate(const FlowParams& params, const IntegratorConfig& config, double t_end);

/// Integrates from an arbitrary point of the open first quadrant.
Trajectory integrate_from(const FlowParams& params, const IntegratorConfig& config, Point start,
                          double t_end);

struct ReducedSample {
  double t = 0.0;
  double epsilon = 0.0;
};

/// Integrates e' = curve_speed(e) on the unit-volume curve (normalized flow).
std::vector<ReducedSample> integrate_reduced(const FlowParams& params,
                                             const IntegratorConfig& config, double epsilon0,
                                             double t_end);

}  // namespace bergerflow
