// Seeded random inputs shared by the unit and acceptance suites.
#ifndef CHAINPLAN_TESTS_GENERATORS_HPP_
#define CHAINPLAN_TESTS_GENERATORS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "chainplan/body_motion.hpp"
#include "chainplan/ee_path.hpp"
#include "chainplan/kinematics.hpp"
#include "chainplan/world.hpp"

namespace generators {

using Rng = std::mt19937;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline chainplan::ManipulatorGeometry random_geometry(Rng& rng, int n_lo, int n_hi) {
  chainplan::ManipulatorGeometry geom;
  geom.n = uniform_int(rng, n_lo, n_hi);
  geom.a = uniform(rng, 0.1, 0.6);
  geom.b = uniform(rng, 0.2, 0.8);
  return geom;
}

inline chainplan::JointState random_joints(Rng& rng, int n, double lo = -M_PI, double hi = M_PI) {
  chainplan::JointState q(n);
  for (int i = 0; i < n; ++i) q(i) = uniform(rng, lo, hi);
  return q;
}

inline double min_singular(const Eigen::Matrix2Xd& J) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  return svd.singularValues().minCoeff();
}

// Joint state away from kinematic singularities (smallest singular value
// of the end-effector Jacobian bounded below).
inline chainplan::JointState random_regular_joints(Rng& rng,
                                                   const chainplan::ManipulatorGeometry& geom,
                                                   double sigma_floor = 0.05) {
  for (;;) {
    chainplan::JointState q = random_joints(rng, geom.n, -1.2, 1.2);
    if (min_singular(chainplan::jacobians(geom, q).ee_jacobian) > sigma_floor) return q;
  }
}

// Obstacles that keep the start configuration feasible; roughly half hug
// the safety boundary of their nearest joint so activations actually
// happen.
inline chainplan::ObstacleWorld random_feasible_world(
    Rng& rng, const chainplan::ManipulatorGeometry& geom, const chainplan::JointState& q,
    int obstacle_count) {
  const chainplan::ChainPose pose = chainplan::forward_kinematics(geom, q);
  chainplan::ObstacleWorld world;
  while (static_cast<int>(world.obstacles.size()) < obstacle_count) {
    chainplan::Obstacle obs;
    obs.radius = uniform(rng, 0.05, 0.3);
    const double safety = obs.radius + geom.body_radius();
    const bool tight = uniform(rng, 0.0, 1.0) < 0.6;
    // tight obstacles hug a distal joint, where motion is largest
    const int anchor = tight ? uniform_int(rng, geom.n / 2, geom.n - 1)
                             : uniform_int(rng, 0, geom.n - 1);
    const double angle = uniform(rng, 0.0, 2.0 * M_PI);
    const double dist = safety + (tight ? uniform(rng, 0.01, 0.08) : uniform(rng, 0.5, 2.0));
    obs.center = pose.joints[anchor] + dist * Eigen::Vector2d(std::cos(angle), std::sin(angle));

    bool ok = true;
    for (const Eigen::Vector2d& p : pose.joints) {
      if ((p - obs.center).norm() < safety + 0.01) ok = false;
    }
    if (ok) world.obstacles.push_back(obs);
  }
  return world;
}

// Random grid planning instance with node-blocking density; start and
// goal nodes are forced free.
inline chainplan::PathProblem random_path_problem(Rng& rng, int rows, int cols,
                                                  double density) {
  chainplan::GridSpec grid;
  grid.origin = {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
  grid.dx = uniform(rng, 0.2, 1.0);
  grid.dy = uniform(rng, 0.2, 1.0);
  grid.rows = rows;
  grid.cols = cols;

  std::vector<std::uint8_t> cells(static_cast<std::size_t>(grid.node_rows()) *
                                  grid.node_cols());
  for (auto& c : cells) c = uniform(rng, 0.0, 1.0) < density ? 1 : 0;

  chainplan::PathProblem problem;
  problem.start_row = uniform_int(rng, 0, rows);
  problem.goal_row = uniform_int(rng, 0, rows);
  cells[static_cast<std::size_t>(problem.start_row) * grid.node_cols() + 0] = 0;
  cells[static_cast<std::size_t>(problem.goal_row) * grid.node_cols() + cols] = 0;
  problem.grid = grid;
  problem.blocked = chainplan::CollisionMatrix(grid.node_rows(), grid.node_cols(),
                                               std::move(cells));
  return problem;
}

}  // namespace generators

#endif  // CHAINPLAN_TESTS_GENERATORS_HPP_
