// Dormand-Prince 5(4) embedded pair with a proportional-integral step
// controller. Internal to the integrate module.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "bergerflow/integrate.hpp"

namespace bergerflow::detail {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
class Dopri5 {
 public:
  /// Writes f(y) to out; returns false when y is outside the domain.
  using Rhs = std::function<bool(const Vec<N>&, Vec<N>&)>;

  explicit Dopri5(Rhs rhs) : rhs_(std::move(rhs)) {}

  struct Trial {
    Vec<N> y;
    Vec<N> err;
    Vec<N> k_end;  // f(y), reused as the first stage of the next step
  };

  bool eval(const Vec<N>& y, Vec<N>& out) const { return rhs_(y, out); }

  /// One step of size h from (y, k1 = f(y)); nullopt if a stage leaves the domain.
  std::optional<Trial> step(const Vec<N>& y, const Vec<N>& k1, double h) const {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                            a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    Vec<N> k2, k3, k4, k5, k6, tmp;
    const auto stage = [&](auto&& combine, Vec<N>& out) {
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
      return rhs_(tmp, out);
    };
    if (!stage([&](std::size_t i) { return a21 * k1[i]; }, k2)) return std::nullopt;
    if (!stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }, k3)) return std::nullopt;
    if (!stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; }, k4)) {
      return std::nullopt;
    }
    if (!stage([&](std::size_t i) { return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]; },
               k5)) {
      return std::nullopt;
    }
    if (!stage(
            [&](std::size_t i) {
              return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
            },
            k6)) {
      return std::nullopt;
    }
    Trial trial;
    for (std::size_t i = 0; i < N; ++i) {
      trial.y[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    if (!rhs_(trial.y, trial.k_end)) return std::nullopt;
    for (std::size_t i = 0; i < N; ++i) {
      trial.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * trial.k_end[i]);
    }
    return trial;
  }

 private:
  Rhs rhs_;
};

/// RMS of the local error scaled by atol + rtol * max(|y0|, |y1|).
template <std::size_t N>
double error_norm(const Vec<N>& y0, const Vec<N>& y1, const Vec<N>& err, double rtol,
                  double atol) {
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    acc += r * r;
  }
  return std::sqrt(acc / N);
}

enum class DriveOutcome { ReachedEnd, Stopped, Underflow };

template <std::size_t N>
struct DriveResult {
  DriveOutcome outcome = DriveOutcome::ReachedEnd;
  double t = 0.0;
  Vec<N> y{};
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive stepping from (t0, y0) to t_end. After every accepted step,
/// on_accept(t, y, k, h, t_new, trial) is called; returning true stops the
/// drive. Steps that leave the domain are rejected and halved.
template <std::size_t N, class OnAccept>
DriveResult<N> drive(const Dopri5<N>& stepper, const IntegratorConfig& cfg, double t0, Vec<N> y0,
                     double t_end, OnAccept&& on_accept) {
  DriveResult<N> result;
  result.t = t0;
  result.y = y0;
  Vec<N> k;
  if (!stepper.eval(y0, k)) throw DomainError("initial state outside the domain of the field");

  // Proportional-integral controller gains for a 5th order method.
  constexpr double kBeta = 0.04;
  constexpr double kAlpha = 0.2 - 0.75 * kBeta;
  constexpr double kSafety = 0.9;

  double t = t0;
  double h = std::clamp(cfg.h_init, cfg.h_min, cfg.h_max);
  double err_prev = 1e-4;
  bool prev_rejected = false;
  while (t < t_end) {
    if (result.accepted + result.rejected >= cfg.max_steps) {
      throw StepBudgetExhausted("step budget of " + std::to_string(cfg.max_steps) +
                                " exhausted at t=" + std::to_string(t));
    }
    bool last = false;
    double hs = h;
    if (t + hs >= t_end) {
      hs = t_end - t;
      last = true;
    }
    const auto trial = stepper.step(y0, k, hs);
    double en = trial ? error_norm(y0, trial->y, trial->err, cfg.rtol, cfg.atol) : INFINITY;
    if (!trial || !(en <= 1.0)) {
      ++result.rejected;
      // Leaving the domain (or a non-finite error) halves the step.
      const bool scalable = trial && std::isfinite(en);
      h = hs * (scalable ? std::max(0.2, kSafety * std::pow(en, -0.2)) : 0.5);
      prev_rejected = true;
      if (h < cfg.h_min) {
        result.outcome = DriveOutcome::Underflow;
        return result;
      }
      continue;
    }
    ++result.accepted;
    const double t_new = last ? t_end : t + hs;
    const bool stop = on_accept(t, y0, k, hs, t_new, *trial);
    y0 = trial->y;
    k = trial->k_end;
    t = t_new;
    result.t = t;
    result.y = y0;
    if (stop) {
      result.outcome = DriveOutcome::Stopped;
      return result;
    }
    double fac = en == 0.0 ? 10.0
                           : kSafety * std::pow(en, -kAlpha) * std::pow(err_prev, kBeta);
    fac = std::clamp(fac, 0.2, 10.0);
    if (prev_rejected) fac = std::min(fac, 1.0);
    err_prev = std::max(en, 1e-4);
    prev_rejected = false;
    h = std::min(hs * fac, cfg.h_max);
  }
  result.outcome = DriveOutcome::ReachedEnd;
  return result;
}

}  // namespace bergerflow::detail
