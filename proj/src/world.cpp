#include "chainplan/world.hpp"

#include <cmath>

#include "chainplan/errors.hpp"

namespace chainplan {

double inflation_radius(const ManipulatorGeometry& geom, const Obstacle& obs) {
  return obs.radius + geom.body_radius();
}

CollisionMatrix build_collision_matrix(const GridSpec& grid, const ObstacleWorld& world,
                                       const ManipulatorGeometry& geom) {
  const int nr = grid.node_rows();
  const int nc = grid.node_cols();
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(nr) * nc, 0);

  for (const Obstacle& obs : world.obstacles) {
    const double r = inflation_radius(geom, obs);
    const double r2 = r * r;
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nc; ++j) {
        if ((grid.node(i, j) - obs.center).squaredNorm() <= r2) {
          cells[static_cast<std::size_t>(i) * nc + j] = 1;
        }
      }
    }
  }
  return CollisionMatrix(nr, nc, std::move(cells));
}

Clearance clearance(const Eigen::Vector2d& p, const Obstacle& obs) {
  const Eigen::Vector2d diff = p - obs.center;
  const double d = diff.norm();
  if (d < 1e-12) {
    throw DegenerateDirection("point coincides with obstacle center at (" +
                              std::to_string(obs.center.x()) + ", " +
                              std::to_string(obs.center.y()) + ")");
  }
  return {d, diff / d};
}

}  // namespace chainplan
