#include "bergerflow/integrate.hpp"

#include <cmath>
#include <sstream>

#include "bergerflow/phase.hpp"
#include "dopri.hpp"

namespace bergerflow {

namespace {

using detail::Vec;

using Predicate = bool (*)(const Vec<2>&, const IntegratorConfig&, const FlowParams&);

bool collapse_point(const Vec<2>& y, const IntegratorConfig& cfg, const FlowParams&) {
  return std::max(y[0], y[1]) <= cfg.collapse_tol;
}

// The fiber is negligible both absolutely and relative to the base.
bool collapse_fiber(const Vec<2>& y, const IntegratorConfig& cfg, const FlowParams&) {
  return y[0] <= cfg.collapse_tol && y[0] <= cfg.collapse_tol * y[1];
}

bool fiber_threshold(const Vec<2>& y, const IntegratorConfig& cfg, const FlowParams&) {
  return y[0] <= cfg.collapse_tol;
}

bool near_equilibrium(const Vec<2>& y, const IntegratorConfig& cfg, const FlowParams& params) {
  const Point f = vector_field_unchecked(params, {y[0], y[1]});
  return std::hypot(f.x, f.y) <= cfg.equilib_tol * std::hypot(y[0], y[1]);
}

detail::Dopri5<2> planar_stepper(const FlowParams& params) {
  return detail::Dopri5<2>([params](const Vec<2>& y, Vec<2>& out) {
    if (!(y[0] > 0.0) || !(y[1] > 0.0) || !std::isfinite(y[0]) || !std::isfinite(y[1])) {
      return false;
    }
    const Point f = vector_field_unchecked(params, {y[0], y[1]});
    out = {f.x, f.y};
    return std::isfinite(f.x) && std::isfinite(f.y);
  });
}

struct Located {
  double dt;
  Vec<2> y;
};

// Bisects the first time in (0, h] at which pred holds, re-integrating a single
// step from (y0, k0) for every probe.
Located locate(const detail::Dopri5<2>& stepper, Predicate pred, const IntegratorConfig& cfg,
               const FlowParams& params, const Vec<2>& y0, const Vec<2>& k0, double h,
               const Vec<2>& y1) {
  double lo = 0.0;
  double hi = h;
  Vec<2> y_hi = y1;
  while (hi - lo > cfg.event_time_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto probe = stepper.step(y0, k0, mid);
    if (!probe || pred(probe->y, cfg, params)) {
      hi = mid;
      if (probe) y_hi = probe->y;
    } else {
      lo = mid;
    }
  }
  return {hi, y_hi};
}

TrajectorySample make_sample(const FlowParams& params, double t, const Vec<2>& y) {
  return {State{t, y[0], y[1]}, geometry_scalars(params, y[0], y[1])};
}

}  // namespace

void IntegratorConfig::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(rtol) || !positive(atol) || !positive(collapse_tol) || !positive(equilib_tol) ||
      !positive(event_time_tol)) {
    throw InvalidParameter("integrator tolerances must be positive");
  }
  if (!positive(h_min) || !(h_min <= h_init) || !(h_init <= h_max) || !std::isfinite(h_max)) {
    throw InvalidParameter("integrator step bounds must satisfy 0 < h_min <= h_init <= h_max");
  }
  if (max_steps < 1) throw InvalidParameter("max_steps must be positive");
  if (output_stride < 1) throw InvalidParameter("output_stride must be positive");
}

std::string_view to_string(EventTag tag) {
  switch (tag) {
    case EventTag::ReachedTEnd:
      return "ReachedTEnd";
    case EventTag::CollapsePoint:
      return "CollapsePoint";
    case EventTag::CollapseFiber:
      return "CollapseFiber";
    case EventTag::Equilibrium:
      return "Equilibrium";
    case EventTag::StepUnderflow:
      return "StepUnderflow";
  }
  return "unknown";
}

Trajectory integrate(const FlowParams& params, const IntegratorConfig& config, double t_end) {
  const State s = initial_state(params);
  return integrate_from(params, config, {s.alpha, s.beta}, t_end);
}

Trajectory integrate_from(const FlowParams& params, const IntegratorConfig& config, Point start,
                          double t_end) {
  params.validate();
  config.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be positive");
  if (!(start.x > 0.0) || !(start.y > 0.0)) {
    throw DomainError("integration must start in the open first quadrant");
  }

  Trajectory traj;
  traj.params = params;
  const State theorem_start = initial_state(params);
  traj.theorem_initial_data = theorem_start.alpha == start.x && theorem_start.beta == start.y;

  struct Terminal {
    Predicate pred;
    EventTag tag;
  };
  std::vector<Terminal> terminals = {{collapse_point, EventTag::CollapsePoint},
                                     {collapse_fiber, EventTag::CollapseFiber}};
  if (config.stop_on_equilibrium) terminals.push_back({near_equilibrium, EventTag::Equilibrium});

  const auto finish = [&](EventTag tag, double t, const Vec<2>& y) {
    traj.termination.tag = tag;
    traj.termination.t_event = t;
    if (tag == EventTag::CollapseFiber) {
      traj.termination.beta_limit_estimate = y[1];
      if (params.kind == FlowKind::Collapse) {
        if (const auto region = region_for_initial(params, {0.0, start.x, start.y})) {
          traj.termination.beta_limit_bracket = limit_bracket(*region);
        }
      }
    } else if (tag == EventTag::Equilibrium) {
      traj.termination.equilibrium_location = Point{y[0], y[1]};
    }
  };

  const Vec<2> y_start{start.x, start.y};
  traj.samples.push_back(make_sample(params, 0.0, y_start));
  if (fiber_threshold(y_start, config, params)) traj.fiber_threshold_time = 0.0;
  for (const auto& term : terminals) {
    if (term.pred(y_start, config, params)) {
      finish(term.tag, 0.0, y_start);
      return traj;
    }
  }

  const auto stepper = planar_stepper(params);
  long since_recorded = 0;
  bool terminated = false;
  const auto on_accept = [&](double t, const Vec<2>& y0, const Vec<2>& k0, double h, double t_new,
                             const detail::Dopri5<2>::Trial& trial) {
    if (!traj.fiber_threshold_time && fiber_threshold(trial.y, config, params)) {
      const auto hit = locate(stepper, fiber_threshold, config, params, y0, k0, h, trial.y);
      traj.fiber_threshold_time = t + hit.dt;
    }
    std::optional<Located> first;
    EventTag first_tag = EventTag::ReachedTEnd;
    for (const auto& term : terminals) {
      if (!term.pred(trial.y, config, params)) continue;
      const auto hit = locate(stepper, term.pred, config, params, y0, k0, h, trial.y);
      if (!first || hit.dt < first->dt) {
        first = hit;
        first_tag = term.tag;
      }
    }
    if (first) {
      const double t_event = first->dt >= h ? t_new : t + first->dt;
      if (traj.fiber_threshold_time && *traj.fiber_threshold_time > t_event) {
        traj.fiber_threshold_time.reset();
      }
      traj.samples.push_back(make_sample(params, t_event, first->y));
      finish(first_tag, t_event, first->y);
      terminated = true;
      return true;
    }
    if (++since_recorded >= config.output_stride || t_new >= t_end) {
      traj.samples.push_back(make_sample(params, t_new, trial.y));
      since_recorded = 0;
    }
    return false;
  };

  const auto result = detail::drive<2>(stepper, config, 0.0, y_start, t_end, on_accept);
  traj.accepted_steps = result.accepted;
  traj.rejected_steps = result.rejected;
  if (terminated) return traj;
  if (traj.samples.back().state.t != result.t) {
    traj.samples.push_back(make_sample(params, result.t, result.y));
  }
  finish(result.outcome == detail::DriveOutcome::Underflow ? EventTag::StepUnderflow
                                                           : EventTag::ReachedTEnd,
         result.t, result.y);
  return traj;
}

std::vector<ReducedSample> integrate_reduced(const FlowParams& params,
                                             const IntegratorConfig& config, double epsilon0,
                                             double t_end) {
  params.validate();
  config.validate();
  if (params.kind != FlowKind::Normalized) {
    throw InvalidParameter("integrate_reduced requires the normalized flow");
  }
  if (!(epsilon0 > 0.0)) throw InvalidParameter("integrate_reduced: epsilon0 must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParameter("t_end must be positive");

  const detail::Dopri5<1> stepper([params](const Vec<1>& y, Vec<1>& out) {
    if (!(y[0] > 0.0) || !std::isfinite(y[0])) return false;
    out[0] = curve_speed(params, y[0]);
    return std::isfinite(out[0]);
  });
  std::vector<ReducedSample> samples{{0.0, epsilon0}};
  long since_recorded = 0;
  const auto on_accept = [&](double, const Vec<1>&, const Vec<1>&, double, double t_new,
                             const detail::Dopri5<1>::Trial& trial) {
    if (++since_recorded >= config.output_stride || t_new >= t_end) {
      samples.push_back({t_new, trial.y[0]});
      since_recorded = 0;
    }
    return false;
  };
  const auto result = detail::drive<1>(stepper, config, 0.0, Vec<1>{epsilon0}, t_end, on_accept);
  if (samples.back().t != result.t) samples.push_back({result.t, result.y[0]});
  return samples;
}

}  // namespace bergerflow
