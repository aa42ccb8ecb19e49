#include "bergerflow/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include "bergerflow/dynamics.hpp"
#include "bergerflow/phase.hpp"

namespace bergerflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLongRun = 1e4;

struct Outcome {
  bool passed;
  double measured;
  double threshold;
  std::string detail;
  bool upper_bound = false;
};

using CheckFn = std::function<Outcome(const IntegratorConfig&)>;

struct Check {
  std::string name;
  int criterion;
  CheckFn run;
};

Outcome at_most(double measured, double threshold, std::string detail = {}) {
  return {measured <= threshold, measured, threshold, std::move(detail), true};
}

std::string describe(const Trajectory& traj) {
  std::ostringstream os;
  os.precision(10);
  const auto& s = traj.final_sample().state;
  os << "termination=" << to_string(traj.termination.tag) << " t=" << traj.termination.t_event
     << " alpha=" << s.alpha << " beta=" << s.beta;
  return os.str();
}

IntegratorConfig free_running(IntegratorConfig cfg) {
  cfg.stop_on_equilibrium = false;
  return cfg;
}

double killing_scale() { return std::sqrt(normalizing_constant(1.0)); }

// Largest deviation from the closed form over samples with t <= t_hi; infinite
// when the run did not reach t_hi.
double oracle_error(const Trajectory& traj, double t_hi) {
  if (traj.final_sample().state.t < t_hi) return kInf;
  double worst = 0.0;
  for (const auto& sample : traj.samples) {
    const auto& s = sample.state;
    if (s.t > t_hi) break;
    const auto exact = closed_form(traj.params, s.t);
    if (!exact) return kInf;
    worst = std::max({worst, std::abs(s.alpha - exact->alpha), std::abs(s.beta - exact->beta)});
  }
  return worst;
}

Check oracle_trajectory(std::string name, int criterion, double eps, double t_hi) {
  return {std::move(name), criterion, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(FlowParams::collapse(2.0, 1.0, eps), cfg, 20.0);
            return at_most(oracle_error(traj, t_hi), 1e-8, describe(traj));
          }};
}

Check oracle_event(std::string name, int criterion, double eps, double t_expected) {
  return {std::move(name), criterion, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(FlowParams::collapse(2.0, 1.0, eps), cfg, 20.0);
            const double err = traj.fiber_threshold_time
                                   ? std::abs(*traj.fiber_threshold_time - t_expected)
                                   : kInf;
            std::ostringstream os;
            os.precision(10);
            os << "expected t=" << t_expected;
            if (traj.fiber_threshold_time) os << " located t=" << *traj.fiber_threshold_time;
            return at_most(err, 1e-5, os.str());
          }};
}

Check oracle_runtime() {
  return {"oracle_eps1_runtime", 1, [](const IntegratorConfig& cfg) {
            const auto start = std::chrono::steady_clock::now();
            const auto traj = integrate(FlowParams::collapse(2.0, 1.0, 1.0), cfg, 20.0);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            return at_most(elapsed.count(), 1.0, "seconds; " + describe(traj));
          }};
}

Check equilibrium_drift(std::string name, FlowParams params) {
  return {std::move(name), 3, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(params, free_running(cfg), 100.0);
            if (traj.final_sample().state.t != 100.0) {
              return Outcome{false, kInf, 1e-10, describe(traj)};
            }
            const auto& s0 = traj.samples.front().state;
            double drift = 0.0;
            for (const auto& sample : traj.samples) {
              drift = std::max(drift, std::hypot(sample.state.alpha - s0.alpha,
                                                 sample.state.beta - s0.beta));
            }
            return at_most(drift, 1e-10, describe(traj));
          }};
}

Check convergence(std::string name, FlowParams params) {
  return {std::move(name), 4, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(params, free_running(cfg), 500.0);
            const auto& s = traj.final_sample().state;
            const double target = killing_scale();
            const double dist =
                s.t == 500.0 ? std::hypot(s.alpha - target, s.beta - target) : kInf;
            return at_most(dist, 1e-6, describe(traj));
          }};
}

Check blow_up(std::string name, double eps) {
  return {std::move(name), 4, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(FlowParams::normalized(2.0, 0.5, eps), cfg, kLongRun);
            const double beta = traj.final_sample().state.beta;
            const bool ok = traj.termination.tag == EventTag::CollapseFiber && beta > 5.0;
            return Outcome{ok, beta, 5.0, describe(traj)};
          }};
}

Check fiber_collapse(std::string name, double eps) {
  return {std::move(name), 5, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(FlowParams::collapse(2.0, -1.0, eps), cfg, kLongRun);
            const auto& term = traj.termination;
            if (term.tag != EventTag::CollapseFiber || !term.beta_limit_estimate ||
                !term.beta_limit_bracket) {
              return Outcome{false, kInf, kInf, describe(traj)};
            }
            const auto [lo, hi] = *term.beta_limit_bracket;
            const double b = *term.beta_limit_estimate;
            std::ostringstream os;
            os << describe(traj) << " bracket=(" << lo << "," << hi << ")";
            return Outcome{lo < b && b < hi, b, hi, os.str()};
          }};
}

Check point_collapse(std::string name, double eps) {
  return {std::move(name), 5, [=](const IntegratorConfig& cfg) {
            const auto traj = integrate(FlowParams::collapse(2.0, 1.0, eps), cfg, kLongRun);
            const auto& s = traj.final_sample().state;
            const double size = std::max(s.alpha, s.beta);
            return Outcome{traj.termination.tag == EventTag::CollapsePoint, size, cfg.collapse_tol,
                           describe(traj)};
          }};
}

Check volume_conservation() {
  return {"volume_conservation", 6, [](const IntegratorConfig& cfg) {
            std::vector<FlowParams> runs;
            for (const double eps : {0.3, 0.5, 2.0 / 3.0, 0.8, 1.0, 2.0, 5.0}) {
              runs.push_back(FlowParams::normalized(2.0, 0.5, eps));
            }
            for (const double eps : {0.2, 1.0, 1.5, 5.0}) {
              runs.push_back(FlowParams::normalized(2.0, -0.5, eps));
            }
            double worst = 0.0;
            for (const auto& p : runs) {
              const auto traj = integrate(p, free_running(cfg), 500.0);
              for (const auto& sample : traj.samples) {
                worst = std::max(worst, std::abs(sample.scalars.volume - 1.0));
              }
            }
            return at_most(worst, 1e-8, std::to_string(runs.size()) + " runs");
          }};
}

Check energy_monotone() {
  return {"energy_monotone", 7, [](const IntegratorConfig& cfg) {
            std::mt19937_64 rng(7);
            std::uniform_real_distribution<double> log_eps(std::log(0.2), std::log(5.0));
            double worst_rise = 0.0;
            for (int i = 0; i < 20; ++i) {
              const double a = (rng() & 1) ? 2.0 : -2.0;
              const double sign = (rng() & 1) ? 1.0 : -1.0;
              const double eps = std::exp(log_eps(rng));
              const auto p = (i % 2 == 0) ? FlowParams::collapse(a, sign, eps)
                                          : FlowParams::normalized(a, 0.5 * sign, eps);
              const auto traj = integrate(p, cfg, 300.0);
              for (std::size_t j = 1; j < traj.samples.size(); ++j) {
                worst_rise = std::max(
                    worst_rise, traj.samples[j].scalars.energy - traj.samples[j - 1].scalars.energy);
              }
            }
            return at_most(worst_rise, 1e-10, "20 runs, largest energy increase");
          }};
}

template <typename Sampler>
double over_random_points(std::uint64_t seed, Sampler sample) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.1, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng);
    const double y = dist(rng);
    worst = std::max(worst, sample(i, x, y));
  }
  return worst;
}

double sign_of(int i, int bit) { return (i & bit) ? 1.0 : -1.0; }

Check q_consistency_collapse() {
  return {"q_consistency_collapse", 8, [](const IntegratorConfig&) {
            const double worst = over_random_points(11, [](int i, double x, double y) {
              const auto p = FlowParams::collapse(2.0 * sign_of(i, 1), sign_of(i, 2), 1.0);
              const Point f = vector_field(p, {x, y});
              const auto q = q1_collapse_components(p, x, y);
              return std::max(std::abs(f.x - x / 2.0 * q.q00) / std::max(1.0, std::abs(f.x)),
                              std::abs(f.y - y / 2.0 * q.q11) / std::max(1.0, std::abs(f.y)));
            });
            return at_most(worst, 1e-13, "scaled by max(1,|F|)");
          }};
}

Check q_consistency_normalized() {
  return {"q_consistency_normalized", 8, [](const IntegratorConfig&) {
            const double worst = over_random_points(12, [](int i, double x, double y) {
              const auto p = FlowParams::normalized(2.0 * sign_of(i, 1), 0.5 * sign_of(i, 2), 1.0);
              const Point f = vector_field(p, {x, y});
              const auto q = q1_normalized_components(p, x, y);
              const double e6 = energy_density_sixth(p, x, y);
              return std::max(
                  std::abs(f.x - x / 2.0 * (q.q00 + e6)) / std::max(1.0, std::abs(f.x)),
                  std::abs(f.y - y / 2.0 * (q.q11 + e6)) / std::max(1.0, std::abs(f.y)));
            });
            return at_most(worst, 1e-13, "scaled by max(1,|F|)");
          }};
}

Check tangency() {
  return {"tangency_residual", 8, [](const IntegratorConfig&) {
            const double worst = over_random_points(13, [](int i, double eps, double) {
              const auto p = FlowParams::normalized(2.0 * sign_of(i, 1), 0.5 * sign_of(i, 2), 1.0);
              const Point f = vector_field(p, curve_point(eps));
              return tangency_residual(p, eps) / std::max(1.0, std::hypot(f.x, f.y));
            });
            return at_most(worst, 1e-10, "scaled by max(1,|F|)");
          }};
}

Check energy_formula() {
  return {"energy_formula_consistency", 8, [](const IntegratorConfig&) {
            const double worst = over_random_points(14, [](int i, double x, double y) {
              const auto p = FlowParams::normalized(2.0 * sign_of(i, 1), 0.5 * sign_of(i, 2), 1.0);
              const auto c = spinor_coefficients(p, x, y);
              const double e6 = energy_density_sixth(p, x, y);
              return std::abs((c.f * c.f + 2.0 * c.g * c.g) / 12.0 - e6) / std::abs(e6);
            });
            return at_most(worst, 1e-12, "relative");
          }};
}

Check sign_flip() {
  return {"sign_flip_symmetry", 8, [](const IntegratorConfig&) {
            double mismatches = 0.0;
            over_random_points(15, [&](int i, double x, double y) {
              const double k = sign_of(i, 2);
              const auto pairs = {std::pair{FlowParams::collapse(2.0, k, 1.0),
                                            FlowParams::collapse(-2.0, -k, 1.0)},
                                  std::pair{FlowParams::normalized(2.0, 0.5 * k, 1.0),
                                            FlowParams::normalized(-2.0, -0.5 * k, 1.0)}};
              for (const auto& [p, q] : pairs) {
                if (!(vector_field(p, {x, y}) == vector_field(q, {x, y}))) ++mismatches;
                if (energy(p, x, y) != energy(q, x, y)) ++mismatches;
                if (p.kind == FlowKind::Normalized) {
                  const auto cp = spinor_coefficients(p, x, y);
                  const auto cq = spinor_coefficients(q, x, y);
                  if (cp.f != -cq.f || cp.g != -cq.g) ++mismatches;
                }
              }
              return 0.0;
            });
            return at_most(mismatches, 0.0, "field and energy equal, f and g negated");
          }};
}

Check trapping(std::string name, FlowParams params) {
  return {std::move(name), 9, [=](const IntegratorConfig& cfg) {
            const auto region = region_for_initial(params, initial_state(params));
            if (!region) return Outcome{false, kInf, 1e-9, "no trapping region"};
            const auto traj = integrate(params, cfg, kLongRun);
            const double outside = containment_report(traj, *region);
            const auto violations = inward_flux_check(*region, params, 1000);
            std::ostringstream os;
            os << "region=" << to_string(region->tag) << " flux_violations=" << violations.size();
            return Outcome{outside <= 1e-9 && violations.empty(), outside, 1e-9, os.str(), true};
          }};
}

Check spinor_limit(std::string name, bool use_f) {
  return {std::move(name), 10, [=](const IntegratorConfig& cfg) {
            const auto p = FlowParams::normalized(2.0, -0.5, 1.5);
            const auto traj = integrate(p, free_running(cfg), 500.0);
            const auto& last = traj.final_sample();
            const double value = use_f ? last.scalars.f : last.scalars.g;
            const double err =
                last.state.t == 500.0 ? std::abs(value - p.kappa / killing_scale()) : kInf;
            return at_most(err, 1e-6, describe(traj));
          }};
}

Check reduced_agreement() {
  return {"reduced_planar_agreement", 11, [](const IntegratorConfig& cfg) {
            const auto p = FlowParams::normalized(2.0, 0.5, 2.0);
            const auto run_cfg = free_running(cfg);
            double worst = 0.0;
            for (const double t : {1.0, 2.0, 5.0, 10.0, 50.0}) {
              const auto reduced = integrate_reduced(p, run_cfg, 2.0, t);
              const auto planar = integrate(p, run_cfg, t);
              const auto& s = planar.final_sample().state;
              if (s.t != t || reduced.back().t != t) {
                return Outcome{false, kInf, 1e-7, describe(planar)};
              }
              const Point u = curve_point(reduced.back().epsilon);
              worst = std::max(worst, std::hypot(u.x - s.alpha, u.y - s.beta));
            }
            return at_most(worst, 1e-7, "compared at t=1,2,5,10,50");
          }};
}

std::vector<Check> registry() {
  std::vector<Check> checks;
  checks.push_back(oracle_trajectory("oracle_eps1_trajectory", 1, 1.0, 15.5));
  checks.push_back(oracle_event("oracle_eps1_event_time", 1, 1.0, 15.999984));
  checks.push_back(oracle_runtime());
  checks.push_back(oracle_trajectory("oracle_eps2_3_trajectory", 2, 2.0 / 3.0, 11.5));
  checks.push_back(oracle_event("oracle_eps2_3_event_time", 2, 2.0 / 3.0, 11.999973));

  checks.push_back(equilibrium_drift("equilibrium_drift_mu_plus_eps1",
                                     FlowParams::normalized(2.0, 0.5, 1.0)));
  checks.push_back(equilibrium_drift("equilibrium_drift_mu_minus_eps1",
                                     FlowParams::normalized(2.0, -0.5, 1.0)));
  checks.push_back(equilibrium_drift("equilibrium_drift_mu_plus_eps2_3",
                                     FlowParams::normalized(2.0, 0.5, 2.0 / 3.0)));

  for (const double eps : {0.8, 2.0, 5.0}) {
    std::ostringstream name;
    name << "convergence_mu_plus_eps" << eps;
    checks.push_back(convergence(name.str(), FlowParams::normalized(2.0, 0.5, eps)));
  }
  for (const double eps : {0.2, 1.0, 5.0}) {
    std::ostringstream name;
    name << "convergence_mu_minus_eps" << eps;
    checks.push_back(convergence(name.str(), FlowParams::normalized(2.0, -0.5, eps)));
  }
  checks.push_back(blow_up("blowup_mu_plus_eps0.3", 0.3));
  checks.push_back(blow_up("blowup_mu_plus_eps0.5", 0.5));

  checks.push_back(fiber_collapse("fiber_collapse_lambda_minus_eps0.5", 0.5));
  checks.push_back(fiber_collapse("fiber_collapse_lambda_minus_eps1", 1.0));
  checks.push_back(fiber_collapse("fiber_collapse_lambda_minus_eps3", 3.0));
  checks.push_back(point_collapse("point_collapse_lambda_plus_eps0.8", 0.8));
  checks.push_back(point_collapse("point_collapse_lambda_plus_eps1.3", 1.3));

  checks.push_back(volume_conservation());
  checks.push_back(energy_monotone());

  checks.push_back(q_consistency_collapse());
  checks.push_back(q_consistency_normalized());
  checks.push_back(tangency());
  checks.push_back(energy_formula());
  checks.push_back(sign_flip());

  checks.push_back(trapping("trapping_K_lambda_minus_eps1", FlowParams::collapse(2.0, -1.0, 1.0)));
  checks.push_back(trapping("trapping_K1_lambda_plus_eps0.4", FlowParams::collapse(2.0, 1.0, 0.4)));
  checks.push_back(trapping("trapping_K2_lambda_plus_eps0.8", FlowParams::collapse(2.0, 1.0, 0.8)));
  checks.push_back(trapping("trapping_K3_lambda_plus_eps1.3", FlowParams::collapse(2.0, 1.0, 1.3)));

  checks.push_back(spinor_limit("spinor_limit_f", true));
  checks.push_back(spinor_limit("spinor_limit_g", false));

  checks.push_back(reduced_agreement());
  return checks;
}

CheckResult execute(const Check& check, const IntegratorConfig& cfg,
                    std::optional<double> threshold_cap) {
  CheckResult result{check.name, check.criterion, false, std::nan(""), 0.0, {}};
  try {
    auto outcome = check.run(cfg);
    if (threshold_cap && outcome.upper_bound && outcome.threshold > *threshold_cap) {
      outcome.threshold = *threshold_cap;
      outcome.passed = outcome.passed && outcome.measured <= *threshold_cap;
    }
    result.passed = outcome.passed;
    result.measured = outcome.measured;
    result.threshold = outcome.threshold;
    result.detail = std::move(outcome.detail);
  } catch (const std::exception& e) {
    result.detail = std::string("error: ") + e.what();
  }
  return result;
}

}  // namespace

IntegratorConfig suite_config(const SuiteOptions& options) {
  IntegratorConfig cfg;
  if (options.rtol) cfg.rtol = *options.rtol;
  if (options.atol) cfg.atol = *options.atol;
  cfg.validate();
  return cfg;
}

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const auto& check : registry()) names.push_back(check.name);
  return names;
}

std::vector<CheckResult> run_acceptance(const SuiteOptions& options) {
  const IntegratorConfig cfg = suite_config(options);
  std::vector<Check> selected;
  for (auto& check : registry()) {
    if (check.name.find(options.filter) != std::string::npos) selected.push_back(std::move(check));
  }

  std::vector<CheckResult> results;
  if (!options.parallel) {
    for (const auto& check : selected) results.push_back(execute(check, cfg, options.threshold_cap));
    return results;
  }
  std::vector<std::future<CheckResult>> pending;
  for (const auto& check : selected) {
    pending.push_back(std::async(std::launch::async, execute, std::cref(check), std::cref(cfg),
                                 options.threshold_cap));
  }
  for (auto& f : pending) results.push_back(f.get());
  return results;
}

}  // namespace bergerflow
