#include "chainplan/kinematics.hpp"

#include <cmath>

#include "chainplan/errors.hpp"

namespace chainplan {

namespace {

void check_dimensions(const ManipulatorGeometry& geom, const JointState& q) {
  if (geom.n < 1) {
    throw DimensionMismatch("manipulator segment count must be >= 1, got " +
                            std::to_string(geom.n));
  }
  if (q.size() != geom.n) {
    throw DimensionMismatch("joint state has " + std::to_string(q.size()) +
                            " entries, geometry expects " + std::to_string(geom.n));
  }
}

// 90-degree counter-clockwise rotation, (x, y) -> (-y, x).
Eigen::Vector2d rot90(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

}  // namespace

ChainPose forward_kinematics(const ManipulatorGeometry& geom, const JointState& q) {
  check_dimensions(geom, q);

  ChainPose pose;
  pose.joints.resize(geom.n);

  // Cumulative-heading walk: the first joint center is pinned at (b, 0),
  // each joint adds its angle to the heading, consecutive joint centers
  // are 2b apart and the end-effector extends b beyond the last one.
  double heading = 0.0;
  Eigen::Vector2d p(geom.b, 0.0);
  pose.joints[0] = p;
  for (int i = 1; i < geom.n; ++i) {
    heading += q(i - 1);
    p += 2.0 * geom.b * Eigen::Vector2d(std::cos(heading), std::sin(heading));
    pose.joints[i] = p;
  }
  heading += q(geom.n - 1);
  pose.end_effector = p + geom.b * Eigen::Vector2d(std::cos(heading), std::sin(heading));
  return pose;
}

JacobianPair jacobians(const ManipulatorGeometry& geom, const JointState& q) {
  check_dimensions(geom, q);
  const int n = geom.n;
  const ChainPose pose = forward_kinematics(geom, q);

  JacobianPair out;
  out.joint_jacobians.assign(n, Eigen::Matrix2Xd::Zero(2, n));

  // Rotating joint k+1 turns everything downstream of its center, so the
  // derivative of a downstream point p w.r.t. q_{k+1} is the lever arm
  // p - joints[k] rotated by 90 degrees. Columns k >= i stay zero: joint
  // center i+1 does not depend on the angles at or after it.
  for (int i = 1; i < n; ++i) {
    Eigen::Matrix2Xd& J = out.joint_jacobians[i];
    for (int k = 0; k < i; ++k) {
      J.col(k) = rot90(pose.joints[i] - pose.joints[k]);
    }
  }

  out.ee_jacobian.resize(2, n);
  for (int k = 0; k < n; ++k) {
    out.ee_jacobian.col(k) = rot90(pose.end_effector - pose.joints[k]);
  }
  return out;
}

}  // namespace chainplan
