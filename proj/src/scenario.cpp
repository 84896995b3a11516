#include "chainplan/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "chainplan/errors.hpp"

namespace chainplan {

namespace {

using nlohmann::ordered_json;

// --- extraction helpers -------------------------------------------------

const ordered_json& require(const ordered_json& doc, const std::string& key,
                            const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError("missing field " + where + key);
  return *it;
}

double get_number(const ordered_json& doc, const std::string& key, const std::string& where) {
  const ordered_json& v = require(doc, key, where);
  if (!v.is_number()) throw ParseError(where + key + ": expected a number");
  return v.get<double>();
}

int get_integer(const ordered_json& doc, const std::string& key, const std::string& where) {
  const ordered_json& v = require(doc, key, where);
  if (!v.is_number_integer()) throw ParseError(where + key + ": expected an integer");
  return v.get<int>();
}

bool get_boolean(const ordered_json& doc, const std::string& key, const std::string& where) {
  const ordered_json& v = require(doc, key, where);
  if (!v.is_boolean()) throw ParseError(where + key + ": expected a boolean");
  return v.get<bool>();
}

void reject_unknown_keys(const ordered_json& doc, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& item : doc.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ValidationError("unknown field " + where + item.key());
  }
}

void check_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(field + " must be > 0 and finite");
  }
}

void check_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw ValidationError(field + " must be finite");
}

// Nearest unblocked node of one grid column; returns (row, distance).
std::pair<int, double> snap_to_column(const GridSpec& grid, const CollisionMatrix& blocked,
                                      int col, const Eigen::Vector2d& p) {
  int best_row = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid.rows; ++i) {
    if (blocked.blocked(i, col)) continue;
    const double dist = (grid.node(i, col) - p).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best_row = i;
    }
  }
  return {best_row, best_dist};
}

struct SnappedEndpoints {
  int start_row = 0;
  int goal_row = 0;
  double start_snap = 0.0;
  double goal_snap = 0.0;
};

// The snap rule pins scenario feasibility: start FK position and goal
// must each sit within max(dx, dy) of an unblocked node in the first and
// last grid columns.
SnappedEndpoints snap_endpoints(const Scenario& s, const CollisionMatrix& blocked) {
  const Eigen::Vector2d start = forward_kinematics(s.geometry, s.q0).end_effector;
  const double limit = std::max(s.grid.dx, s.grid.dy);

  SnappedEndpoints out;
  auto [srow, sdist] = snap_to_column(s.grid, blocked, 0, start);
  if (srow < 0 || sdist > limit) {
    throw ValidationError("start end-effector position (" + std::to_string(start.x()) + ", " +
                          std::to_string(start.y()) +
                          ") has no unblocked grid node within max(dx, dy) in column 0");
  }
  auto [grow, gdist] = snap_to_column(s.grid, blocked, s.grid.cols, s.goal);
  if (grow < 0 || gdist > limit) {
    throw ValidationError("goal has no unblocked grid node within max(dx, dy) in the last column");
  }
  out.start_row = srow;
  out.goal_row = grow;
  out.start_snap = sdist;
  out.goal_snap = gdist;
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
  reject_unknown_keys(doc, {"manipulator", "obstacles", "goal", "grid", "solver", "coarse"},
                      "");

  Scenario s;

  const ordered_json& man = require(doc, "manipulator", "");
  reject_unknown_keys(man, {"n", "a", "b", "q0"}, "manipulator.");
  s.geometry.n = get_integer(man, "n", "manipulator.");
  s.geometry.a = get_number(man, "a", "manipulator.");
  s.geometry.b = get_number(man, "b", "manipulator.");
  if (s.geometry.n < 1) throw ValidationError("manipulator.n must be >= 1");
  check_positive(s.geometry.a, "manipulator.a");
  check_positive(s.geometry.b, "manipulator.b");

  const ordered_json& q0 = require(man, "q0", "manipulator.");
  if (!q0.is_array()) throw ParseError("manipulator.q0: expected an array");
  if (static_cast<int>(q0.size()) != s.geometry.n) {
    throw ValidationError("manipulator.q0 must have exactly n = " +
                          std::to_string(s.geometry.n) + " entries");
  }
  s.q0.resize(s.geometry.n);
  for (int i = 0; i < s.geometry.n; ++i) {
    if (!q0[i].is_number()) throw ParseError("manipulator.q0: expected numbers");
    s.q0(i) = q0[i].get<double>();
    check_finite(s.q0(i), "manipulator.q0[" + std::to_string(i) + "]");
  }

  const ordered_json& obstacles = require(doc, "obstacles", "");
  if (!obstacles.is_array()) throw ParseError("obstacles: expected an array");
  for (std::size_t j = 0; j < obstacles.size(); ++j) {
    const std::string where = "obstacles[" + std::to_string(j) + "].";
    if (!obstacles[j].is_object()) throw ParseError(where + " expected an object");
    reject_unknown_keys(obstacles[j], {"cx", "cy", "r"}, where);
    Obstacle obs;
    obs.center.x() = get_number(obstacles[j], "cx", where);
    obs.center.y() = get_number(obstacles[j], "cy", where);
    obs.radius = get_number(obstacles[j], "r", where);
    check_finite(obs.center.x(), where + "cx");
    check_finite(obs.center.y(), where + "cy");
    check_positive(obs.radius, where + "r");
    s.world.obstacles.push_back(obs);
  }

  const ordered_json& goal = require(doc, "goal", "");
  reject_unknown_keys(goal, {"x", "y"}, "goal.");
  s.goal.x() = get_number(goal, "x", "goal.");
  s.goal.y() = get_number(goal, "y", "goal.");
  check_finite(s.goal.x(), "goal.x");
  check_finite(s.goal.y(), "goal.y");

  const ordered_json& grid = require(doc, "grid", "");
  reject_unknown_keys(grid, {"x0", "y0", "dx", "dy", "rows", "cols"}, "grid.");
  s.grid.origin.x() = get_number(grid, "x0", "grid.");
  s.grid.origin.y() = get_number(grid, "y0", "grid.");
  s.grid.dx = get_number(grid, "dx", "grid.");
  s.grid.dy = get_number(grid, "dy", "grid.");
  s.grid.rows = get_integer(grid, "rows", "grid.");
  s.grid.cols = get_integer(grid, "cols", "grid.");
  check_finite(s.grid.origin.x(), "grid.x0");
  check_finite(s.grid.origin.y(), "grid.y0");
  check_positive(s.grid.dx, "grid.dx");
  check_positive(s.grid.dy, "grid.dy");
  if (s.grid.rows < 1) throw ValidationError("grid.rows must be >= 1");
  if (s.grid.cols < 2) throw ValidationError("grid.cols must be >= 2");

  if (doc.contains("solver")) {
    const ordered_json& solver = doc["solver"];
    reject_unknown_keys(solver, {"eq_tol", "viol_tol", "max_iters", "max_step"}, "solver.");
    if (solver.contains("eq_tol")) {
      s.solver.eq_tolerance = get_number(solver, "eq_tol", "solver.");
      check_positive(s.solver.eq_tolerance, "solver.eq_tol");
    }
    if (solver.contains("viol_tol")) {
      s.solver.violation_tolerance = get_number(solver, "viol_tol", "solver.");
      check_positive(s.solver.violation_tolerance, "solver.viol_tol");
    }
    if (solver.contains("max_iters")) {
      s.solver.max_active_set_iterations = get_integer(solver, "max_iters", "solver.");
      if (s.solver.max_active_set_iterations < 1) {
        throw ValidationError("solver.max_iters must be >= 1");
      }
    }
    if (solver.contains("max_step")) {
      s.solver.max_step_norm = get_number(solver, "max_step", "solver.");
      check_positive(s.solver.max_step_norm, "solver.max_step");
    }
  }

  if (doc.contains("coarse")) {
    const ordered_json& coarse = doc["coarse"];
    reject_unknown_keys(coarse, {"enabled", "factor", "margin"}, "coarse.");
    s.coarse.enabled = get_boolean(coarse, "enabled", "coarse.");
    if (coarse.contains("factor")) s.coarse.factor = get_integer(coarse, "factor", "coarse.");
    if (coarse.contains("margin")) s.coarse.margin = get_integer(coarse, "margin", "coarse.");
    if (s.coarse.factor < 2) throw ValidationError("coarse.factor must be >= 2");
    if (s.coarse.margin < 0) throw ValidationError("coarse.margin must be >= 0");
  }

  // Endpoint snapping must already succeed for the document to be valid.
  snap_endpoints(s, build_collision_matrix(s.grid, s.world, s.geometry));
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open scenario file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  ordered_json doc;
  doc["manipulator"]["n"] = s.geometry.n;
  doc["manipulator"]["a"] = s.geometry.a;
  doc["manipulator"]["b"] = s.geometry.b;
  doc["manipulator"]["q0"] = std::vector<double>(s.q0.data(), s.q0.data() + s.q0.size());
  doc["obstacles"] = ordered_json::array();
  for (const Obstacle& obs : s.world.obstacles) {
    doc["obstacles"].push_back({{"cx", obs.center.x()}, {"cy", obs.center.y()}, {"r", obs.radius}});
  }
  doc["goal"]["x"] = s.goal.x();
  doc["goal"]["y"] = s.goal.y();
  doc["grid"]["x0"] = s.grid.origin.x();
  doc["grid"]["y0"] = s.grid.origin.y();
  doc["grid"]["dx"] = s.grid.dx;
  doc["grid"]["dy"] = s.grid.dy;
  doc["grid"]["rows"] = s.grid.rows;
  doc["grid"]["cols"] = s.grid.cols;
  doc["solver"]["eq_tol"] = s.solver.eq_tolerance;
  doc["solver"]["viol_tol"] = s.solver.violation_tolerance;
  if (s.solver.max_active_set_iterations > 0) {
    doc["solver"]["max_iters"] = s.solver.max_active_set_iterations;
  }
  if (s.solver.max_step_norm > 0.0) doc["solver"]["max_step"] = s.solver.max_step_norm;
  doc["coarse"]["enabled"] = s.coarse.enabled;
  doc["coarse"]["factor"] = s.coarse.factor;
  doc["coarse"]["margin"] = s.coarse.margin;
  return doc.dump(2) + "\n";
}

RunReport run_pipeline(const Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();

  RunReport report;
  report.scenario = s;

  // Stage 1: collision tagging and endpoint snapping.
  CollisionMatrix blocked = build_collision_matrix(s.grid, s.world, s.geometry);
  const SnappedEndpoints snapped = snap_endpoints(s, blocked);

  // The start configuration itself must be collision-free for the body.
  const ChainPose start_pose = forward_kinematics(s.geometry, s.q0);
  for (std::size_t j = 0; j < s.world.obstacles.size(); ++j) {
    const Obstacle& obs = s.world.obstacles[j];
    const double safety = inflation_radius(s.geometry, obs);
    if ((start_pose.end_effector - obs.center).norm() <
        safety - s.solver.violation_tolerance) {
      throw ValidationError("start end-effector lies inside inflated obstacle " +
                            std::to_string(j));
    }
    for (int i = 0; i < s.geometry.n; ++i) {
      if ((start_pose.joints[i] - obs.center).norm() <
          safety - s.solver.violation_tolerance) {
        throw ValidationError("start configuration violates the safety distance of joint " +
                              std::to_string(i + 1) + " to obstacle " + std::to_string(j));
      }
    }
  }

  // Stage 2: end-effector path.
  PathProblem problem;
  problem.grid = s.grid;
  problem.blocked = std::move(blocked);
  problem.start_row = snapped.start_row;
  problem.goal_row = snapped.goal_row;
  report.path = s.coarse.enabled
                    ? plan_path_coarse_to_fine(problem, s.coarse.factor, s.coarse.margin)
                    : plan_path(problem);

  // Stage 3: node coordinates become the tracking targets.
  report.waypoints = path_to_waypoints(s.grid, report.path);

  // Stage 4: body motion.
  const Trajectory traj =
      track_waypoints(s.geometry, s.q0, report.waypoints, s.world, s.solver);

  // Stage 5: report assembly.
  report.steps.reserve(traj.steps.size());
  double total_motion = 0.0;
  Eigen::Vector2d final_ee = start_pose.end_effector;
  for (const TrajectoryStep& ts : traj.steps) {
    StepRecord rec;
    rec.q = ts.q;
    rec.ee = ts.ee;
    rec.dq_norm = ts.motion.dq.norm();
    rec.active_count = ts.motion.active_set.size();
    rec.min_margin = ts.min_clearance_margin;
    total_motion += rec.dq_norm;
    final_ee = ts.ee;
    report.steps.push_back(std::move(rec));
  }

  report.summary.path_cost = report.path.total_cost;
  report.summary.total_joint_motion = total_motion;
  report.summary.final_error = (final_ee - report.waypoints.back()).norm();
  report.summary.steps = static_cast<int>(report.steps.size());
  report.summary.status = "ok";
  report.summary.start_snap = snapped.start_snap;
  report.summary.goal_snap = snapped.goal_snap;
  report.summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace chainplan
