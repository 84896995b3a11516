/**
 * @file kinematics.hpp
 * @brief Direct and differential kinematics of a planar n-segment chain.
 *
 * The chain is built from identical segments described by two triangle
 * parameters (a, b). Joint centers are spaced 2b apart, the first joint
 * center sits at (b, 0) and never moves, and the end-effector extends a
 * further b beyond the last joint center. Joint angle q_i adds to the
 * accumulated heading at joint i.
 */
#ifndef CHAINPLAN_KINEMATICS_HPP_
#define CHAINPLAN_KINEMATICS_HPP_

#include <Eigen/Core>
#include <cmath>
#include <vector>

namespace chainplan {

/// Joint angle vector, one entry per segment (radians).
using JointState = Eigen::VectorXd;

/// Chain constants: segment count and the segment triangle parameters.
struct ManipulatorGeometry {
  int n = 0;       ///< segment count (>= 1; planner redundancy needs n > 2)
  double a = 0.0;  ///< triangle height, same length unit as b (> 0)
  double b = 0.0;  ///< triangle half-base (> 0)

  /// Radius of the disc that conservatively covers one segment body
  /// around its joint center. Used for obstacle inflation and safety
  /// distances.
  double body_radius() const { return std::hypot(a, b); }
};

/// Planar positions of all joint centers plus the end-effector.
struct ChainPose {
  std::vector<Eigen::Vector2d> joints;  ///< n joint centers; joints[0] == (b, 0)
  Eigen::Vector2d end_effector;
};

/// Position Jacobians of every joint center and of the end-effector,
/// each 2 x n. joint_jacobians[i] has zero columns for k >= i; in
/// particular joint_jacobians[0] is all zero (the first joint center is
/// fixed).
struct JacobianPair {
  std::vector<Eigen::Matrix2Xd> joint_jacobians;
  Eigen::Matrix2Xd ee_jacobian;
};

/// Direct kinematics. Throws DimensionMismatch if q.size() != geom.n.
ChainPose forward_kinematics(const ManipulatorGeometry& geom, const JointState& q);

/// Analytic position Jacobians at q. Column k of each Jacobian is the
/// partial derivative of the tracked point with respect to q_{k+1}.
/// Throws DimensionMismatch if q.size() != geom.n.
JacobianPair jacobians(const ManipulatorGeometry& geom, const JointState& q);

}  // namespace chainplan

#endif  // CHAINPLAN_KINEMATICS_HPP_
