#pragma once

#include <string>
#include <vector>

namespace fsi2d {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  ///< measured values
  double seconds = 0.0;
};

struct AcceptanceOptions {
  double tol_scale = 1.0;  ///< multiplies every absolute tolerance; rate thresholds stay fixed
  int flap_steps = 500;
};

/// Suite names accepted by run_acceptance besides "all".
std::vector<std::string> acceptance_suites();

/// Criteria ids a suite runs; throws std::invalid_argument for unknown names.
std::vector<int> suite_criteria(const std::string& suite);

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_acceptance(const std::string& suite, const AcceptanceOptions& opt);

/// "[PASS] 3 solid-statics: ... (0.01 s)"
std::string format_result(const CriterionResult& r);

}  // namespace fsi2d
