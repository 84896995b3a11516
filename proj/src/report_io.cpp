#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

#include "chainplan/errors.hpp"
#include "chainplan/scenario.hpp"

namespace chainplan {

namespace {

using nlohmann::ordered_json;

// Full-precision decimal formatting for the CSV tables.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file.string());
  return out;
}

ordered_json point_array(const Eigen::Vector2d& p) {
  return ordered_json::array({p.x(), p.y()});
}

}  // namespace

void emit_outputs(const RunReport& report, const std::filesystem::path& out_dir,
                  int snapshot_stride) {
  std::filesystem::create_directories(out_dir);
  const Scenario& s = report.scenario;
  const int n = s.geometry.n;

  {
    auto out = open_for_write(out_dir / "waypoints.csv");
    out << "col,row,x,y\n";
    for (std::size_t j = 0; j < report.waypoints.size(); ++j) {
      out << j << ',' << report.path.row_indices[j] << ',' << num(report.waypoints[j].x())
          << ',' << num(report.waypoints[j].y()) << '\n';
    }
  }

  {
    auto out = open_for_write(out_dir / "trajectory.csv");
    out << "step";
    for (int i = 1; i <= n; ++i) out << ",q_" << i;
    out << ",xe,ye,dq_norm,active_count,min_margin\n";
    for (std::size_t k = 0; k < report.steps.size(); ++k) {
      const StepRecord& rec = report.steps[k];
      out << k;
      for (int i = 0; i < n; ++i) out << ',' << num(rec.q(i));
      out << ',' << num(rec.ee.x()) << ',' << num(rec.ee.y()) << ',' << num(rec.dq_norm)
          << ',' << rec.active_count << ',' << num(rec.min_margin) << '\n';
    }
  }

  {
    ordered_json summary;
    summary["path_cost"] = report.summary.path_cost;
    summary["total_joint_motion"] = report.summary.total_joint_motion;
    summary["final_error"] = report.summary.final_error;
    summary["steps"] = report.summary.steps;
    summary["status"] = report.summary.status;
    summary["start_snap"] = report.summary.start_snap;
    summary["goal_snap"] = report.summary.goal_snap;
    summary["wall_time_s"] = report.summary.wall_time_s;
    auto out = open_for_write(out_dir / "summary.json");
    out << summary.dump(2) << '\n';
  }

  {
    ordered_json plot;
    plot["grid"] = {{"x0", s.grid.origin.x()}, {"y0", s.grid.origin.y()},
                    {"dx", s.grid.dx},         {"dy", s.grid.dy},
                    {"rows", s.grid.rows},     {"cols", s.grid.cols}};
    plot["obstacles"] = ordered_json::array();
    for (const Obstacle& obs : s.world.obstacles) {
      plot["obstacles"].push_back({{"cx", obs.center.x()},
                                   {"cy", obs.center.y()},
                                   {"r", obs.radius},
                                   {"r_inflated", inflation_radius(s.geometry, obs)}});
    }
    plot["path"] = ordered_json::array();
    for (const Eigen::Vector2d& p : report.waypoints) plot["path"].push_back(point_array(p));

    // Joint polylines (joint centers plus end-effector) at the initial
    // configuration, every snapshot_stride-th step, and the final step.
    plot["snapshots"] = ordered_json::array();
    const int stride = snapshot_stride > 0 ? snapshot_stride : 1;
    auto add_snapshot = [&](int step_index, const JointState& q) {
      const ChainPose pose = forward_kinematics(s.geometry, q);
      ordered_json snap;
      snap["step"] = step_index;
      snap["points"] = ordered_json::array();
      for (const Eigen::Vector2d& p : pose.joints) snap["points"].push_back(point_array(p));
      snap["points"].push_back(point_array(pose.end_effector));
      plot["snapshots"].push_back(std::move(snap));
    };
    add_snapshot(-1, s.q0);
    for (std::size_t k = 0; k < report.steps.size(); ++k) {
      if (k % static_cast<std::size_t>(stride) == static_cast<std::size_t>(stride) - 1 ||
          k + 1 == report.steps.size()) {
        add_snapshot(static_cast<int>(k), report.steps[k].q);
      }
    }

    auto out = open_for_write(out_dir / "plotdata.json");
    out << plot.dump(2) << '\n';
  }
}

}  // namespace chainplan
