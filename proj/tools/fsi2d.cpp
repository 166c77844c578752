#include "fsi2d/acceptance.hpp"
#include "fsi2d/config.hpp"
#include "fsi2d/output.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <set>

using namespace fsi2d;

namespace {

constexpr int kUsageError = 2;

struct RunArgs {
  std::string config;
  std::string output_dir;
  int steps = -1;
  std::string checkpoint;
  std::string resume;
};

CaseConfig load(const std::string& path) {
  ParsedConfig pc = parse_config_file(path);
  for (const auto& d : pc.defaults) std::cerr << "default: " << d << '\n';
  return pc.config;
}

int cmd_run(const RunArgs& a) {
  CaseConfig cfg = load(a.config);
  if (a.steps >= 0) cfg.driver.steps = a.steps;
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  Simulation sim(build_problem(cfg));
  if (!a.resume.empty()) {
    sim.load_checkpoint(a.resume);
    std::cerr << "resumed at step " << sim.step_index() << " t=" << sim.time() << '\n';
  }
  std::filesystem::create_directories(cfg.output_dir);
  DiagnosticsTable diag((std::filesystem::path(cfg.output_dir) / "diagnostics.csv").string(), cfg.probes.size(),
                        !a.resume.empty());
  if (cfg.vtk && sim.step_index() == 0) write_snapshot(sim, cfg.output_dir);
  while (sim.step_index() < cfg.driver.steps) {
    const StepReport r = sim.step();
    diag.add(r);
    std::cout << "step " << r.step << " t=" << r.time << " newton=" << r.newton_iterations << " cycles=" << r.cycles
              << " residual=" << r.final_residual << '\n';
    if (r.step % cfg.output_stride == 0) {
      if (cfg.vtk) write_snapshot(sim, cfg.output_dir);
      if (!a.checkpoint.empty()) sim.save_checkpoint(a.checkpoint);
    }
  }
  if (!a.checkpoint.empty()) sim.save_checkpoint(a.checkpoint);
  return 0;
}

int cmd_verify(const std::string& suite, double tol_scale, int flap_steps) {
  AcceptanceOptions opt;
  opt.tol_scale = tol_scale;
  opt.flap_steps = flap_steps;
  int failed = 0;
  const auto ids = suite_criteria(suite);
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, opt);
    std::cout << format_result(r) << std::endl;
    failed += !r.passed;
  }
  std::cout << "summary: " << ids.size() - failed << " passed, " << failed << " failed" << std::endl;
  return failed ? 1 : 0;
}

int cmd_inspect(const std::string& path, double t) {
  const CaseConfig cfg = load(path);
  if (t < cfg.t0 - 1e-12) throw std::invalid_argument("--time lies before the start time");
  const int steps = static_cast<int>(std::lround((t - cfg.t0) / cfg.driver.dt));
  if (std::abs(cfg.t0 + steps * cfg.driver.dt - t) > 1e-9 * std::max(1.0, std::abs(t)))
    throw std::invalid_argument("--time is not a multiple of the time step");
  Simulation sim(build_problem(cfg));
  sim.run(steps);
  write_cut_summary(std::cout, sim.geometry(), sim.time());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monolithic unfitted fluid-structure interaction solver", "fsi2d"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the time loop of a case");
  run_cmd->add_option("config_file", run.config, "Case configuration");
  run_cmd->add_option("--config", run.config, "Case configuration");
  run_cmd->add_option("--output-dir", run.output_dir, "Override the output directory");
  run_cmd->add_option("--steps", run.steps, "Override the number of steps")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--checkpoint", run.checkpoint, "Write a checkpoint here at every output stride and at the end");
  run_cmd->add_option("--resume", run.resume, "Resume from this checkpoint");

  std::string suite = "all";
  double tol_scale = 1.0;
  int flap_steps = 500;
  auto* verify_cmd = app.add_subcommand("verify", "Run acceptance suites");
  verify_cmd->add_option("suite", suite, "One of: " + [] {
    std::string s;
    for (const auto& n : acceptance_suites()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  verify_cmd->add_option("--verify-tol-scale", tol_scale, "Scale absolute tolerances")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--flap-steps", flap_steps, "Steps of the flap channel run")->check(CLI::PositiveNumber);

  std::string inspect_config;
  double inspect_time = 0.0;
  auto* inspect_cmd = app.add_subcommand("inspect-cut", "Summarize the cut configuration at a time level");
  inspect_cmd->add_option("config_file", inspect_config, "Case configuration");
  inspect_cmd->add_option("--config", inspect_config, "Case configuration");
  inspect_cmd->add_option("--time", inspect_time, "Time level; the case is run up to it");

  if (argc > 1) {
    const std::string first = argv[1];
    const std::set<std::string> known{"run", "verify", "inspect-cut"};
    if ((first.empty() || first.front() != '-') && !known.count(first)) {
      std::cerr << app.help() << "error: unknown subcommand '" << first << "'\n";
      return kUsageError;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (run_cmd->parsed()) {
      if (run.config.empty()) throw std::invalid_argument("run needs a configuration file");
      return cmd_run(run);
    }
    if (verify_cmd->parsed()) return cmd_verify(suite, tol_scale, flap_steps);
    if (inspect_config.empty()) throw std::invalid_argument("inspect-cut needs a configuration file");
    return cmd_inspect(inspect_config, inspect_time);
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
