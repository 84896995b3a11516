#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "chainplan/errors.hpp"
#include "chainplan/kinematics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace chainplan;

namespace {

JointState joints_of(std::initializer_list<double> values) {
  JointState q(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) q(i++) = v;
  return q;
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("straight configuration reaches 2bn along x") {
  const ManipulatorGeometry geom{4, 0.3, 0.5};
  const ChainPose pose = forward_kinematics(geom, JointState::Zero(4));
  CHECK(pose.joints[0].x() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(pose.joints[0].y() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pose.end_effector.x() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(pose.end_effector.y() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("right angle at the first joint turns the rest vertical") {
  const ManipulatorGeometry geom{3, 0.3, 0.5};
  const ChainPose pose = forward_kinematics(geom, joints_of({M_PI / 2, 0.0, 0.0}));
  CHECK(pose.joints[2].x() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pose.joints[2].y() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(pose.end_effector.x() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pose.end_effector.y() == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("matches the double-sum formulas on random configurations") {
  generators::Rng rng(20240601);
  const ManipulatorGeometry geom{5, 0.25, 0.4};
  for (int trial = 0; trial < 50; ++trial) {
    const JointState q = generators::random_joints(rng, 5, -M_PI / 2, M_PI / 2);
    const ChainPose pose = forward_kinematics(geom, q);
    const ChainPose ref = oracles::fk_double_sum(geom, q);
    for (int i = 0; i < geom.n; ++i) {
      CHECK((pose.joints[i] - ref.joints[i]).norm() <= 1e-12);
    }
    CHECK((pose.end_effector - ref.end_effector).norm() <= 1e-12);
  }
}

TEST_CASE("link lengths are rigid for any configuration") {
  generators::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const ManipulatorGeometry geom = generators::random_geometry(rng, 1, 8);
    const JointState q = generators::random_joints(rng, geom.n);
    const ChainPose pose = forward_kinematics(geom, q);
    for (int i = 0; i + 1 < geom.n; ++i) {
      const double link = (pose.joints[i + 1] - pose.joints[i]).norm();
      CHECK(link == doctest::Approx(2.0 * geom.b).epsilon(1e-9));
    }
    const double tip = (pose.end_effector - pose.joints[geom.n - 1]).norm();
    CHECK(tip == doctest::Approx(geom.b).epsilon(1e-9));
  }
}

TEST_CASE("incrementing the first angle rotates the pose about the fixed joint") {
  generators::Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const ManipulatorGeometry geom = generators::random_geometry(rng, 2, 7);
    const JointState q = generators::random_joints(rng, geom.n);
    const double delta = generators::uniform(rng, -1.5, 1.5);

    JointState q2 = q;
    q2(0) += delta;
    const ChainPose base = forward_kinematics(geom, q);
    const ChainPose turned = forward_kinematics(geom, q2);

    const Eigen::Vector2d pivot(geom.b, 0.0);
    const Eigen::Rotation2Dd rot(delta);
    auto rotated = [&](const Eigen::Vector2d& p) -> Eigen::Vector2d {
      return pivot + rot * (p - pivot);
    };

    for (int i = 0; i < geom.n; ++i) {
      CHECK((turned.joints[i] - rotated(base.joints[i])).norm() <= 1e-9);
    }
    CHECK((turned.end_effector - rotated(base.end_effector)).norm() <= 1e-9);
  }
}

TEST_CASE("end-effector Jacobian at zero matches the lever-arm pattern") {
  const ManipulatorGeometry geom{3, 0.3, 0.5};
  const JacobianPair jac = jacobians(geom, JointState::Zero(3));
  Eigen::Matrix2Xd expected(2, 3);
  expected << 0.0, 0.0, 0.0, 2.5, 1.5, 0.5;
  CHECK((jac.ee_jacobian - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("first joint Jacobian is identically zero") {
  generators::Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const ManipulatorGeometry geom = generators::random_geometry(rng, 1, 8);
    const JointState q = generators::random_joints(rng, geom.n);
    const JacobianPair jac = jacobians(geom, q);
    CHECK(jac.joint_jacobians[0].cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("trailing Jacobian columns vanish (column nesting)") {
  generators::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const ManipulatorGeometry geom = generators::random_geometry(rng, 2, 8);
    const JointState q = generators::random_joints(rng, geom.n);
    const JacobianPair jac = jacobians(geom, q);
    for (int i = 0; i < geom.n; ++i) {
      for (int k = i; k < geom.n; ++k) {
        CHECK(jac.joint_jacobians[i].col(k).norm() == 0.0);
      }
    }
  }
}

TEST_CASE("end-effector Jacobian equals last joint Jacobian plus the tip term") {
  generators::Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const ManipulatorGeometry geom = generators::random_geometry(rng, 1, 8);
    const JointState q = generators::random_joints(rng, geom.n);
    const JacobianPair jac = jacobians(geom, q);

    const double phi_n = q.sum();
    Eigen::Matrix2Xd tip(2, geom.n);
    tip.row(0).setConstant(-geom.b * std::sin(phi_n));
    tip.row(1).setConstant(geom.b * std::cos(phi_n));
    const Eigen::Matrix2Xd expected = jac.joint_jacobians[geom.n - 1] + tip;
    CHECK((jac.ee_jacobian - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("analytic Jacobians agree with central differences") {
  generators::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const ManipulatorGeometry geom = generators::random_geometry(rng, 2, 8);
    const JointState q = generators::random_joints(rng, geom.n);
    const JacobianPair jac = jacobians(geom, q);

    for (int i = 0; i < geom.n; ++i) {
      const Eigen::Matrix2Xd fd = oracles::fd_jacobian(q, [&](const JointState& qq) {
        return forward_kinematics(geom, qq).joints[i];
      });
      CHECK(oracles::jacobian_mismatch(jac.joint_jacobians[i], fd) <= 1e-5);
    }
    const Eigen::Matrix2Xd fd_ee = oracles::fd_jacobian(q, [&](const JointState& qq) {
      return forward_kinematics(geom, qq).end_effector;
    });
    CHECK(oracles::jacobian_mismatch(jac.ee_jacobian, fd_ee) <= 1e-5);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const ManipulatorGeometry geom{4, 0.3, 0.5};
  CHECK_THROWS_AS(forward_kinematics(geom, JointState::Zero(3)), DimensionMismatch);
  CHECK_THROWS_AS(jacobians(geom, JointState::Zero(5)), DimensionMismatch);
  CHECK_THROWS_AS(forward_kinematics(ManipulatorGeometry{0, 0.3, 0.5}, JointState::Zero(0)),
                  DimensionMismatch);
}

}  // TEST_SUITE
