/**
 * @file ee_path.hpp
 * @brief Collision-free end-effector path search on the task-space grid.
 *
 * Paths are column-monotone: exactly one node per column, advancing one
 * column per step, with free choice of the next row. The globally
 * cheapest such path is found by stage-wise dynamic programming; a
 * coarse-to-fine variant first plans on a reduced lattice and then
 * re-plans at full resolution inside a corridor around the coarse path.
 */
#ifndef CHAINPLAN_EE_PATH_HPP_
#define CHAINPLAN_EE_PATH_HPP_

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "chainplan/world.hpp"

namespace chainplan {

/// One planning instance: lattice, per-node collision tags and the fixed
/// start/goal rows in the first and last columns.
struct PathProblem {
  GridSpec grid;
  CollisionMatrix blocked;
  int start_row = 0;
  int goal_row = 0;
};

/// A column-monotone node path: row_indices[j] is the row visited in
/// column j (size cols+1). total_cost is the summed step metric.
struct GridPath {
  std::vector<int> row_indices;
  double total_cost = 0.0;
};

/// Forward-pass results: cheapest known cost from the start node to every
/// node, the predecessor row realizing it, and the number of candidate
/// transitions examined. Unreachable or blocked nodes hold +infinity /
/// predecessor -1.
struct DpTable {
  Eigen::MatrixXd best_cost;
  Eigen::MatrixXi predecessor;
  std::size_t relaxations = 0;
};

/// Distance between nodes (row, j) and (next_row, j+1); independent of j.
double step_cost(const GridSpec& grid, int row, int next_row);

/// Full forward pass over all rows. Throws InvalidEndpoint if the start
/// node is blocked or out of range.
DpTable compute_dp_table(const PathProblem& problem);

/// Globally optimal column-monotone path through unblocked nodes.
/// Ties between equal-cost predecessors resolve to the smaller row index.
/// Throws InvalidEndpoint (blocked/out-of-range endpoints) or
/// NoFeasiblePath (goal unreachable).
GridPath plan_path(const PathProblem& problem);
GridPath plan_path(const PathProblem& problem, DpTable& table_out);

/// Two-level search: plan on a coarse lattice of factor x factor cell
/// areas (a cell is blocked only if every fine node inside it is
/// blocked), then re-plan at full resolution restricted to the selected
/// cells widened by corridor_margin cells vertically. The result is
/// always feasible at fine resolution but may cost more than the full-DP
/// optimum. Throws NoFeasiblePath if the coarse level disconnects, or
/// CorridorInfeasible if the fine pass fails inside the corridor (the
/// caller may widen the margin).
GridPath plan_path_coarse_to_fine(const PathProblem& problem, int coarse_factor,
                                  int corridor_margin,
                                  std::size_t* relaxations_out = nullptr);

/// Task-space coordinates of the path nodes, in column order.
std::vector<Eigen::Vector2d> path_to_waypoints(const GridSpec& grid, const GridPath& path);

}  // namespace chainplan

#endif  // CHAINPLAN_EE_PATH_HPP_
