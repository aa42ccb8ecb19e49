#include <iomanip>
#include <iostream>

#include "bergerflow/acceptance.hpp"

int main() {
  const auto results = bergerflow::run_acceptance({});
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << "[" << std::setw(2) << r.criterion << "] "
              << std::left << std::setw(36) << r.name << std::right << std::setprecision(6)
              << " measured=" << r.measured << " threshold=" << r.threshold;
    if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
  }
  std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? 0 : 1;
}
