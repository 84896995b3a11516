/**
 * @file body_motion.hpp
 * @brief Redundancy resolution per control step.
 *
 * Each step finds the minimum-norm joint increment dq that realizes a
 * desired end-effector displacement dp while keeping every joint center
 * outside the per-obstacle safety distance. Clearances are linearized
 * once per step: for joint i and obstacle j the first-order post-move
 * distance is d_ij + e_ij^T J_i dq, which must stay >= d_j0, i.e.
 * (e_ij^T J_i) dq >= d_j0 - d_ij. Violated constraints are activated as
 * equalities (at most one per joint, the strongest), and the mixed
 * system is re-solved through its KKT equations until nothing is
 * violated.
 */
#ifndef CHAINPLAN_BODY_MOTION_HPP_
#define CHAINPLAN_BODY_MOTION_HPP_

#include <Eigen/Core>
#include <span>
#include <vector>

#include "chainplan/kinematics.hpp"
#include "chainplan/world.hpp"

namespace chainplan {

/// One control step request: move the end-effector of the chain at q by
/// dp without letting any joint center enter a safety disc.
struct MotionRequest {
  ManipulatorGeometry geom;
  JointState q;
  Eigen::Vector2d dp;
  ObstacleWorld world;
};

struct SolverSettings {
  double eq_tolerance = 1e-8;        ///< max KKT primal residual
  double violation_tolerance = 1e-10;  ///< slack allowed on clearance rows
  int max_active_set_iterations = 0;  ///< 0 = auto (2 * n * m)
  double max_step_norm = 0.0;        ///< optional cap on ||dq||; 0 = none
  double substep_length = 0.0;       ///< waypoint subdivision; 0 = 0.1 * b
};

/// One linearized clearance constraint for a (joint, obstacle) pair.
struct ConstraintRow {
  int joint_index = 0;     ///< 0-based
  int obstacle_index = 0;  ///< 0-based
  Eigen::Vector2d normal;  ///< unit vector from obstacle center to joint
  Eigen::RowVectorXd row;  ///< normal^T * J_i, the clearance gradient
  double current_distance = 0.0;  ///< d_ij at the linearization point
  double safety_distance = 0.0;   ///< d_j0 = r_j + sqrt(a^2 + b^2)

  double margin() const { return current_distance - safety_distance; }
};

/// Clearance rows currently treated as equalities; at most one per joint.
struct ActiveSet {
  std::vector<ConstraintRow> rows;

  Eigen::MatrixXd stacked_rows(int n) const;  ///< J_a, one row per active constraint
  Eigen::VectorXd targets() const;            ///< d_j0 - d_ij per active row
  int size() const { return static_cast<int>(rows.size()); }
};

/// Solution of one KKT solve: dq = J_e^T lambda + J_a^T mu.
struct MotionStep {
  Eigen::VectorXd dq;
  Eigen::Vector2d lagrange_eq = Eigen::Vector2d::Zero();  ///< lambda (tracking)
  Eigen::VectorXd lagrange_ineq;                          ///< mu, one per active row
  ActiveSet active_set;
  double kkt_residual = 0.0;
};

/// One executed substep along a waypoint path, recorded after
/// integration.
struct TrajectoryStep {
  MotionStep motion;
  JointState q;             ///< configuration after the step
  Eigen::Vector2d ee;       ///< end-effector after the step
  double min_clearance_margin = 0.0;  ///< min over pairs of d_ij - d_j0; +inf if no obstacles
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
};

/// Minimum-norm dq with J_e dq = dp, via dq = J_e^T (J_e J_e^T)^{-1} dp.
/// Throws SingularJacobian if J_e J_e^T has condition number above 1e12.
Eigen::VectorXd least_norm_step(const Eigen::Matrix2Xd& ee_jacobian,
                                const Eigen::Vector2d& dp);

/// All n*m linearized clearance rows at q, joint-major order.
/// Throws DegenerateDirection if a joint sits on an obstacle center.
std::vector<ConstraintRow> evaluate_constraints(const ManipulatorGeometry& geom,
                                                const JointState& q,
                                                const ObstacleWorld& world);

/// Solves the stationarity + feasibility system for the given active
/// set: J_e dq = dp and J_a dq = d_a as hard equalities, dq of minimum
/// norm. Throws InconsistentConstraints if the stacked system cannot be
/// met within eq_tolerance.
MotionStep solve_kkt(const Eigen::Matrix2Xd& ee_jacobian, const Eigen::Vector2d& dp,
                     const ActiveSet& active, const SolverSettings& settings = {});

/// The full per-step loop: free least-norm solution, violation check of
/// every clearance row under the predicted motion, activation of the
/// strongest violated row per joint, KKT re-solve, repeat. Throws
/// IterationLimit if the active set keeps churning past the iteration
/// budget.
MotionStep resolve_step(const MotionRequest& request, const SolverSettings& settings = {});

/// Walks the end-effector through the waypoint list, subdividing each
/// leg into substeps no longer than substep_length (and no larger than
/// max_step_norm scaled by the smallest singular value of J_e, when
/// set), resolving and integrating one step at a time. Errors from any
/// step are rethrown annotated with the step index.
Trajectory track_waypoints(const ManipulatorGeometry& geom, const JointState& q0,
                           std::span<const Eigen::Vector2d> waypoints,
                           const ObstacleWorld& world, const SolverSettings& settings = {});

}  // namespace chainplan

#endif  // CHAINPLAN_BODY_MOTION_HPP_
