#include "fsi2d/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  fsi2d::AcceptanceOptions opt;
  std::string suite = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--flap-steps" && i + 1 < argc) {
      opt.flap_steps = std::atoi(argv[++i]);
    } else if (a == "--tol-scale" && i + 1 < argc) {
      opt.tol_scale = std::atof(argv[++i]);
    } else {
      suite = a;
    }
  }
  int failed = 0;
  for (const auto& r : fsi2d::run_acceptance(suite, opt)) {
    std::cout << fsi2d::format_result(r) << std::endl;
    failed += !r.passed;
  }
  std::cout << (failed ? "FAILED " : "PASSED ") << failed << " failing criteria" << std::endl;
  return failed ? 1 : 0;
}
