#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace discode {

struct SelfCheckOptions {
  std::uint64_t seed = 0;
  int instances = 1000;
  double alpha_corruption = 1.0;  // multiplies alpha before solving; 1.0 leaves it untouched
};

struct CheckOutcome {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest observed error
  double threshold = 0.0;  // pass bound
  int instances = 0;
};

/**
 * Runs the closed-form validation suite on seeded random instances:
 * analytic vs converged numeric solution, stationarity of the analytic
 * solution, head vs distribution path, and finite-difference gradient checks
 * for every divergence.
 */
std::vector<CheckOutcome> run_selfcheck(const SelfCheckOptions& options);

}  // namespace discode
