#include "chainplan/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "chainplan/errors.hpp"
#include "chainplan/scenario.hpp"

namespace chainplan {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"collision-free path and motion planning for a planar n-segment chain"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string out_dir;
  int coarse_factor = 0;
  int corridor_margin = -1;
  double eq_tol = 0.0;
  int max_iters = 0;
  int seed = 0;
  int plot_stride = 10;

  CLI::App* plan = app.add_subcommand("plan", "plan a scenario and write result files");
  plan->add_option("--scenario", scenario_file, "scenario JSON file")->required();
  plan->add_option("--out", out_dir, "output directory")->required();
  plan->add_option("--coarse", coarse_factor, "enable coarse-to-fine with this factor (>= 2)");
  plan->add_option("--corridor", corridor_margin, "corridor margin in coarse cells (>= 0)");
  plan->add_option("--tol", eq_tol, "equality tolerance override");
  plan->add_option("--max-iters", max_iters, "active-set iteration cap override");
  plan->add_option("--seed", seed, "reserved; the pipeline has no stochastic stage");
  plan->add_option("--plot-stride", plot_stride, "snapshot every k-th step in plotdata");

  CLI::App* check = app.add_subcommand("check", "parse and validate a scenario, nothing else");
  check->add_option("--scenario", scenario_file, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    Scenario scenario = load_scenario(scenario_file);
    if (check->parsed()) {
      std::printf("ok: %s (n=%d, %zu obstacles, grid %dx%d)\n", scenario_file.c_str(),
                  scenario.geometry.n, scenario.world.obstacles.size(), scenario.grid.rows,
                  scenario.grid.cols);
      return kExitOk;
    }

    if (coarse_factor > 0) {
      scenario.coarse.enabled = true;
      scenario.coarse.factor = coarse_factor;
    }
    if (corridor_margin >= 0) scenario.coarse.margin = corridor_margin;
    if (eq_tol > 0.0) scenario.solver.eq_tolerance = eq_tol;
    if (max_iters > 0) scenario.solver.max_active_set_iterations = max_iters;

    const RunReport report = run_pipeline(scenario);
    emit_outputs(report, out_dir, plot_stride);
    std::printf("status=%s path_cost=%.15g steps=%d total_joint_motion=%.15g final_error=%.3g\n",
                report.summary.status.c_str(), report.summary.path_cost, report.summary.steps,
                report.summary.total_joint_motion, report.summary.final_error);
    return kExitOk;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "scenario parse error: %s\n", e.what());
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "scenario validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const InvalidEndpoint& e) {
    std::fprintf(stderr, "planning failed: %s\n", e.what());
    return kExitInfeasible;
  } catch (const NoFeasiblePath& e) {
    std::fprintf(stderr, "planning failed: %s\n", e.what());
    return kExitInfeasible;
  } catch (const CorridorInfeasible& e) {
    std::fprintf(stderr, "planning failed: %s\n", e.what());
    return kExitInfeasible;
  } catch (const Error& e) {
    // remaining library errors are solver-stage failures
    std::fprintf(stderr, "solver failed: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace chainplan
