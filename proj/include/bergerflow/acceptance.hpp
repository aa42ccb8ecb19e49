// Self-verification suite: every check integrates or evaluates its own
// scenario and reports the measured value against its threshold.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergerflow/integrate.hpp"

namespace bergerflow {

struct CheckResult {
  std::string name;
  int criterion = 0;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct SuiteOptions {
  /// Only checks whose name contains this substring are run.
  std::string filter;
  std::optional<double> rtol;
  std::optional<double> atol;
  /// Tightens every upper-bound threshold to at most this value.
  std::optional<double> threshold_cap;
  bool parallel = true;
};

/// The integrator configuration the suite uses after applying overrides.
IntegratorConfig suite_config(const SuiteOptions& options);

std::vector<std::string> check_names();

/// Results come back in registration order regardless of scheduling.
std::vector<CheckResult> run_acceptance(const SuiteOptions& options);

}  // namespace bergerflow
