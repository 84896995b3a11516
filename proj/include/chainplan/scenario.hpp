/**
 * @file scenario.hpp
 * @brief Scenario documents, the two-stage pipeline, and result files.
 */
#ifndef CHAINPLAN_SCENARIO_HPP_
#define CHAINPLAN_SCENARIO_HPP_

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "chainplan/body_motion.hpp"
#include "chainplan/ee_path.hpp"
#include "chainplan/kinematics.hpp"
#include "chainplan/world.hpp"

namespace chainplan {

struct CoarseOptions {
  bool enabled = false;
  int factor = 4;
  int margin = 2;
};

/// A fully validated planning problem, parsed from a JSON document:
///   manipulator{n, a, b, q0[n]}, obstacles[{cx, cy, r}], goal{x, y},
///   grid{x0, y0, dx, dy, rows, cols},
///   solver{eq_tol, viol_tol, max_iters, max_step},
///   coarse{enabled, factor, margin}.
/// solver and coarse are optional and default-constructed when absent.
struct Scenario {
  ManipulatorGeometry geometry;
  JointState q0;
  ObstacleWorld world;
  Eigen::Vector2d goal = Eigen::Vector2d::Zero();
  GridSpec grid;
  SolverSettings solver;
  CoarseOptions coarse;
};

/// One trajectory row of a run report.
struct StepRecord {
  JointState q;
  Eigen::Vector2d ee;
  double dq_norm = 0.0;
  int active_count = 0;
  double min_margin = 0.0;
};

struct RunSummary {
  double path_cost = 0.0;
  double total_joint_motion = 0.0;  ///< sum of ||dq|| over all steps
  double final_error = 0.0;         ///< end-effector distance to the last waypoint
  int steps = 0;
  std::string status = "ok";
  double start_snap = 0.0;  ///< distance from FK(q0) to the snapped start node
  double goal_snap = 0.0;   ///< distance from goal to the snapped goal node
  double wall_time_s = 0.0;
};

struct RunReport {
  Scenario scenario;
  GridPath path;
  std::vector<Eigen::Vector2d> waypoints;
  std::vector<StepRecord> steps;
  RunSummary summary;
};

/// Parses and validates a scenario document. Structural problems
/// (malformed JSON, missing or mistyped fields) raise ParseError; range
/// and consistency violations raise ValidationError naming the field,
/// including the requirement that the start end-effector position and
/// the goal snap onto unblocked nodes of the first and last grid columns
/// within max(dx, dy).
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);

/// Inverse of parse_scenario: a JSON document that parses back to an
/// equal scenario.
std::string serialize_scenario(const Scenario& s);

/// Runs collision tagging, path planning (coarse-to-fine when enabled),
/// waypoint extraction and body tracking, then assembles the report.
/// Deterministic given the scenario (wall time aside). Planner and
/// solver errors propagate.
RunReport run_pipeline(const Scenario& s);

/// Writes waypoints.csv, trajectory.csv, summary.json and plotdata.json
/// into out_dir (created if missing). plotdata carries a manipulator
/// snapshot every snapshot_stride steps plus the first and last.
void emit_outputs(const RunReport& report, const std::filesystem::path& out_dir,
                  int snapshot_stride = 10);

}  // namespace chainplan

#endif  // CHAINPLAN_SCENARIO_HPP_
