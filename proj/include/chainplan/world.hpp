/**
 * @file world.hpp
 * @brief Circular obstacles, clearance geometry and task-space grid tagging.
 */
#ifndef CHAINPLAN_WORLD_HPP_
#define CHAINPLAN_WORLD_HPP_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "chainplan/kinematics.hpp"

namespace chainplan {

struct Obstacle {
  Eigen::Vector2d center;
  double radius = 0.0;  ///< > 0
};

struct ObstacleWorld {
  std::vector<Obstacle> obstacles;
};

/// Regular task-space lattice. Node (i, j) = origin + (dx*j, dy*i) with
/// row index i in [0, rows] and column index j in [0, cols], i.e. the
/// lattice has rows+1 x cols+1 nodes.
struct GridSpec {
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();  ///< node (0, 0)
  double dx = 0.0;  ///< column step (> 0)
  double dy = 0.0;  ///< row step (> 0)
  int rows = 0;     ///< max row index (>= 1)
  int cols = 0;     ///< max column index (>= 2)

  Eigen::Vector2d node(int row, int col) const {
    return {origin.x() + dx * col, origin.y() + dy * row};
  }
  int node_rows() const { return rows + 1; }
  int node_cols() const { return cols + 1; }
};

/// Binary per-node collision tags for a grid; immutable once built.
/// blocked(i, j) is true iff node (i, j) lies inside or on the boundary
/// of some inflated obstacle.
class CollisionMatrix {
public:
  CollisionMatrix() = default;
  CollisionMatrix(int node_rows, int node_cols, std::vector<std::uint8_t> cells)
      : node_rows_(node_rows), node_cols_(node_cols), cells_(std::move(cells)) {}

  bool blocked(int row, int col) const {
    return cells_[static_cast<std::size_t>(row) * node_cols_ + col] != 0;
  }
  int node_rows() const { return node_rows_; }
  int node_cols() const { return node_cols_; }

private:
  int node_rows_ = 0;
  int node_cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

/// Safety distance for one obstacle: its radius grown by the segment
/// body radius sqrt(a^2 + b^2). A point kept at least this far from the
/// obstacle center conservatively keeps the whole segment clear.
double inflation_radius(const ManipulatorGeometry& geom, const Obstacle& obs);

/// Tags every grid node against every obstacle inflated by
/// inflation_radius(). A node exactly on an inflated boundary counts as
/// blocked.
CollisionMatrix build_collision_matrix(const GridSpec& grid, const ObstacleWorld& world,
                                       const ManipulatorGeometry& geom);

/// Distance and outward unit direction from an obstacle center to a point.
struct Clearance {
  double distance = 0.0;
  Eigen::Vector2d direction;  ///< (p - center) / distance, unit norm
};

/// Throws DegenerateDirection if p is within 1e-12 of the obstacle
/// center (the direction is undefined and the scene is already fatally
/// interpenetrating).
Clearance clearance(const Eigen::Vector2d& p, const Obstacle& obs);

}  // namespace chainplan

#endif  // CHAINPLAN_WORLD_HPP_
