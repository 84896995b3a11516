#include "chainplan/body_motion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chainplan/errors.hpp"

namespace chainplan {

namespace {

constexpr double kConditionLimit = 1e12;
constexpr double kRankThreshold = 1e-12;

// Eigenvalues of the symmetric 2x2 Gram matrix J J^T, closed form.
std::pair<double, double> gram_eigenvalues(const Eigen::Matrix2d& g) {
  const double mean = 0.5 * g.trace();
  const double disc = std::sqrt(std::max(0.0, mean * mean - g.determinant()));
  return {mean - disc, mean + disc};
}

struct LeastNormSolution {
  Eigen::VectorXd dq;
  Eigen::Vector2d lambda;
  double residual = 0.0;
};

LeastNormSolution solve_least_norm(const Eigen::Matrix2Xd& J, const Eigen::Vector2d& dp) {
  const Eigen::Matrix2d gram = J * J.transpose();
  const auto [lmin, lmax] = gram_eigenvalues(gram);
  if (!(lmin > 0.0) || lmax > kConditionLimit * lmin) {
    throw SingularJacobian("end-effector Jacobian Gram matrix is singular or has condition number beyond 1e12");
  }
  LeastNormSolution sol;
  sol.lambda = gram.ldlt().solve(dp);
  sol.dq = J.transpose() * sol.lambda;
  sol.residual = (J * sol.dq - dp).norm();
  return sol;
}

int resolve_iteration_budget(const SolverSettings& s, int n, int m) {
  if (s.max_active_set_iterations > 0) return s.max_active_set_iterations;
  return std::max(1, 2 * n * m);
}

double min_singular_value(const Eigen::Matrix2Xd& J) {
  const auto [lmin, lmax] = gram_eigenvalues(J * J.transpose());
  return std::sqrt(std::max(0.0, lmin));
}

std::string annotate(const char* what, std::size_t waypoint, std::size_t step) {
  return std::string(what) + " (waypoint " + std::to_string(waypoint) + ", step " +
         std::to_string(step) + ")";
}

double min_margin(const ManipulatorGeometry& geom, const ChainPose& pose,
                  const ObstacleWorld& world) {
  double margin = std::numeric_limits<double>::infinity();
  for (const Obstacle& obs : world.obstacles) {
    const double safety = inflation_radius(geom, obs);
    for (const Eigen::Vector2d& p : pose.joints) {
      margin = std::min(margin, (p - obs.center).norm() - safety);
    }
  }
  return margin;
}

}  // namespace

Eigen::MatrixXd ActiveSet::stacked_rows(int n) const {
  Eigen::MatrixXd J_a(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    J_a.row(static_cast<Eigen::Index>(r)) = rows[r].row;
  }
  return J_a;
}

Eigen::VectorXd ActiveSet::targets() const {
  Eigen::VectorXd d_a(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    d_a(static_cast<Eigen::Index>(r)) = rows[r].safety_distance - rows[r].current_distance;
  }
  return d_a;
}

Eigen::VectorXd least_norm_step(const Eigen::Matrix2Xd& ee_jacobian,
                                const Eigen::Vector2d& dp) {
  return solve_least_norm(ee_jacobian, dp).dq;
}

std::vector<ConstraintRow> evaluate_constraints(const ManipulatorGeometry& geom,
                                                const JointState& q,
                                                const ObstacleWorld& world) {
  const JacobianPair jac = jacobians(geom, q);
  const ChainPose pose = forward_kinematics(geom, q);

  std::vector<ConstraintRow> rows;
  rows.reserve(static_cast<std::size_t>(geom.n) * world.obstacles.size());
  for (int i = 0; i < geom.n; ++i) {
    for (std::size_t j = 0; j < world.obstacles.size(); ++j) {
      const Obstacle& obs = world.obstacles[j];
      const Clearance c = clearance(pose.joints[i], obs);
      ConstraintRow row;
      row.joint_index = i;
      row.obstacle_index = static_cast<int>(j);
      row.normal = c.direction;
      row.row = c.direction.transpose() * jac.joint_jacobians[i];
      row.current_distance = c.distance;
      row.safety_distance = inflation_radius(geom, obs);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

MotionStep solve_kkt(const Eigen::Matrix2Xd& ee_jacobian, const Eigen::Vector2d& dp,
                     const ActiveSet& active, const SolverSettings& settings) {
  const Eigen::Index n = ee_jacobian.cols();
  const Eigen::Index k = active.size();

  Eigen::MatrixXd stacked(2 + k, n);
  stacked.topRows(2) = ee_jacobian;
  if (k > 0) stacked.bottomRows(k) = active.stacked_rows(static_cast<int>(n));

  Eigen::VectorXd target(2 + k);
  target.head(2) = dp;
  if (k > 0) target.tail(k) = active.targets();

  // Minimum-norm least-squares solve of the stacked equality system; the
  // rank cut mirrors the 1e12 conditioning limit of the free solve.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(stacked);
  cod.setThreshold(kRankThreshold);
  const Eigen::VectorXd dq = cod.solve(target);

  const double residual = (stacked * dq - target).norm();
  if (residual > settings.eq_tolerance) {
    throw InconsistentConstraints(
        "tracking and active clearance constraints cannot hold together; KKT residual " +
        std::to_string(residual));
  }

  // Multipliers from stationarity dq = stacked^T nu; dq lies in the row
  // space of the stacked matrix, so the least-squares fit is exact.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codT(stacked.transpose());
  codT.setThreshold(kRankThreshold);
  const Eigen::VectorXd nu = codT.solve(dq);

  MotionStep step;
  step.dq = dq;
  step.lagrange_eq = nu.head(2);
  step.lagrange_ineq = nu.tail(k);
  step.active_set = active;
  step.kkt_residual = residual;
  return step;
}

MotionStep resolve_step(const MotionRequest& request, const SolverSettings& settings) {
  const int n = request.geom.n;
  const JacobianPair jac = jacobians(request.geom, request.q);
  const std::vector<ConstraintRow> rows =
      evaluate_constraints(request.geom, request.q, request.world);
  const int m = static_cast<int>(request.world.obstacles.size());

  // Step 1: release every clearance constraint and take the free
  // least-norm solution.
  const LeastNormSolution free_sol = solve_least_norm(jac.ee_jacobian, request.dp);
  MotionStep step;
  step.dq = free_sol.dq;
  step.lagrange_eq = free_sol.lambda;
  step.lagrange_ineq.resize(0);
  step.kkt_residual = free_sol.residual;

  std::vector<int> active_row_of_joint(n, -1);  // index into rows, -1 = none
  const int budget = resolve_iteration_budget(settings, n, m);

  for (int iter = 0; iter < budget; ++iter) {
    // Step 2: check every row under the predicted displacement and keep
    // the strongest violation per joint (ties go to the smaller obstacle
    // index by scan order).
    std::vector<int> strongest(n, -1);
    std::vector<double> worst(n, settings.violation_tolerance);
    bool any_violated = false;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const ConstraintRow& row = rows[r];
      const double violation =
          (row.safety_distance - row.current_distance) - row.row.dot(step.dq);
      if (violation > worst[row.joint_index]) {
        worst[row.joint_index] = violation;
        strongest[row.joint_index] = static_cast<int>(r);
        any_violated = true;
      }
    }
    if (!any_violated) return step;

    // Step 3: transform the selected rows into equalities. Joints whose
    // active row already holds keep it; a stronger violated row replaces
    // a weaker one for the same joint.
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      if (strongest[i] >= 0 && active_row_of_joint[i] != strongest[i]) {
        active_row_of_joint[i] = strongest[i];
        changed = true;
      }
    }
    if (!changed) return step;  // violations are at solver precision only

    ActiveSet active;
    for (int i = 0; i < n; ++i) {
      if (active_row_of_joint[i] >= 0) active.rows.push_back(rows[active_row_of_joint[i]]);
    }

    // Step 4: re-solve with the extended equality set and loop.
    step = solve_kkt(jac.ee_jacobian, request.dp, active, settings);
  }
  throw IterationLimit("active set did not settle within " + std::to_string(budget) +
                       " iterations");
}

Trajectory track_waypoints(const ManipulatorGeometry& geom, const JointState& q0,
                           std::span<const Eigen::Vector2d> waypoints,
                           const ObstacleWorld& world, const SolverSettings& settings) {
  Trajectory traj;
  JointState q = q0;
  ChainPose pose = forward_kinematics(geom, q);

  const double substep =
      settings.substep_length > 0.0 ? settings.substep_length : 0.1 * geom.b;

  for (std::size_t w = 0; w < waypoints.size(); ++w) {
    const Eigen::Vector2d target = waypoints[w];
    const double initial_dist = (target - pose.end_effector).norm();
    // Closing in on the target is quadratic once within one substep, so a
    // small multiple of the straight-line count is enough.
    const int budget = 4 * static_cast<int>(std::ceil(initial_dist / substep)) + 32;
    int taken = 0;

    while (true) {
      const Eigen::Vector2d delta = target - pose.end_effector;
      const double dist = delta.norm();
      if (dist <= settings.eq_tolerance) break;
      if (taken++ >= budget) {
        throw IterationLimit("waypoint " + std::to_string(w) + ": no convergence after " +
                             std::to_string(budget) + " substeps (step " +
                             std::to_string(traj.steps.size()) + ")");
      }

      double cap = substep;
      if (settings.max_step_norm > 0.0) {
        const double sigma = min_singular_value(jacobians(geom, q).ee_jacobian);
        cap = std::min(cap, settings.max_step_norm * sigma);
      }
      const Eigen::Vector2d dp = delta * std::min(1.0, cap / dist);

      MotionStep step;
      try {
        step = resolve_step({geom, q, dp, world}, settings);
      } catch (const SingularJacobian& e) {
        throw SingularJacobian(annotate(e.what(), w, traj.steps.size()));
      } catch (const InconsistentConstraints& e) {
        throw InconsistentConstraints(annotate(e.what(), w, traj.steps.size()));
      } catch (const IterationLimit& e) {
        throw IterationLimit(annotate(e.what(), w, traj.steps.size()));
      } catch (const DegenerateDirection& e) {
        throw DegenerateDirection(annotate(e.what(), w, traj.steps.size()));
      }

      q += step.dq;
      pose = forward_kinematics(geom, q);

      TrajectoryStep record;
      record.motion = std::move(step);
      record.q = q;
      record.ee = pose.end_effector;
      record.min_clearance_margin = min_margin(geom, pose, world);
      traj.steps.push_back(std::move(record));
    }
  }
  return traj;
}

}  // namespace chainplan
