#pragma once

// Acceptance checks shared by `saddle-tiler verify` and the acceptance binary.

#include <functional>
#include <string>
#include <vector>

namespace saddle {

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Fast;
  // Relative perturbation applied to the reference constants. Only for
  // exercising the failure path of the harness.
  double tamper = 0.0;
  // Called as each check finishes.
  std::function<void(const CheckResult&)> on_result;
};

/// Names of all checks, in run order.
std::vector<std::string> check_names();

std::vector<CheckResult> run_checks(const VerifyOptions& opts);

/// "PASS name (1.23 s) detail" / "FAIL name ..."
std::string format_result(const CheckResult& r);

}  // namespace saddle
