#include "chainplan/ee_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "chainplan/errors.hpp"

namespace chainplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inclusive row interval of nodes that a DP pass may visit in one column.
struct RowBand {
  int lo = 0;
  int hi = -1;
  bool contains(int row) const { return row >= lo && row <= hi; }
};

void check_endpoints(const PathProblem& p) {
  const auto in_range = [&](int row) { return row >= 0 && row <= p.grid.rows; };
  if (!in_range(p.start_row) || !in_range(p.goal_row)) {
    throw InvalidEndpoint("start/goal row out of range: start=" +
                          std::to_string(p.start_row) + " goal=" +
                          std::to_string(p.goal_row) + " rows=" +
                          std::to_string(p.grid.rows));
  }
  if (p.blocked.blocked(p.start_row, 0)) {
    throw InvalidEndpoint("start node is blocked");
  }
  if (p.blocked.blocked(p.goal_row, p.grid.cols)) {
    throw InvalidEndpoint("goal node is blocked");
  }
}

// Stage-wise forward pass restricted to one row band per column. Every
// examined (source, destination) pair counts as one relaxation.
DpTable dp_forward(const GridSpec& grid, const CollisionMatrix& blocked, int start_row,
                   const std::vector<RowBand>& bands) {
  DpTable t;
  t.best_cost = Eigen::MatrixXd::Constant(grid.node_rows(), grid.node_cols(), kInf);
  t.predecessor = Eigen::MatrixXi::Constant(grid.node_rows(), grid.node_cols(), -1);
  t.best_cost(start_row, 0) = 0.0;

  for (int j = 0; j < grid.cols; ++j) {
    const RowBand& from = bands[j];
    const RowBand& to = bands[j + 1];
    for (int i = from.lo; i <= from.hi; ++i) {
      const double base = t.best_cost(i, j);
      if (!std::isfinite(base)) continue;
      for (int i2 = to.lo; i2 <= to.hi; ++i2) {
        if (blocked.blocked(i2, j + 1)) continue;
        ++t.relaxations;
        const double cand = base + step_cost(grid, i, i2);
        // strict < keeps the smallest predecessor row on exact ties
        if (cand < t.best_cost(i2, j + 1)) {
          t.best_cost(i2, j + 1) = cand;
          t.predecessor(i2, j + 1) = i;
        }
      }
    }
  }
  return t;
}

std::vector<RowBand> full_bands(const GridSpec& grid) {
  return std::vector<RowBand>(grid.node_cols(), RowBand{0, grid.rows});
}

GridPath backtrack(const GridSpec& grid, const DpTable& table, int goal_row) {
  GridPath path;
  path.total_cost = table.best_cost(goal_row, grid.cols);
  path.row_indices.assign(grid.node_cols(), -1);
  path.row_indices[grid.cols] = goal_row;
  for (int j = grid.cols; j > 0; --j) {
    path.row_indices[j - 1] = table.predecessor(path.row_indices[j], j);
  }
  return path;
}

}  // namespace

double step_cost(const GridSpec& grid, int row, int next_row) {
  const double dy = grid.dy * (next_row - row);
  return std::hypot(grid.dx, dy);
}

DpTable compute_dp_table(const PathProblem& problem) {
  check_endpoints(problem);
  return dp_forward(problem.grid, problem.blocked, problem.start_row,
                    full_bands(problem.grid));
}

GridPath plan_path(const PathProblem& problem) {
  DpTable table;
  return plan_path(problem, table);
}

GridPath plan_path(const PathProblem& problem, DpTable& table_out) {
  table_out = compute_dp_table(problem);
  if (!std::isfinite(table_out.best_cost(problem.goal_row, problem.grid.cols))) {
    throw NoFeasiblePath("goal node unreachable from start");
  }
  return backtrack(problem.grid, table_out, problem.goal_row);
}

GridPath plan_path_coarse_to_fine(const PathProblem& problem, int coarse_factor,
                                  int corridor_margin, std::size_t* relaxations_out) {
  if (coarse_factor < 2) {
    throw std::invalid_argument("coarse_factor must be >= 2");
  }
  if (corridor_margin < 0) {
    throw std::invalid_argument("corridor_margin must be >= 0");
  }
  check_endpoints(problem);
  const GridSpec& grid = problem.grid;

  // Cap the factor so the coarse lattice keeps at least two column steps
  // and one row step; if even that is impossible the corridor would span
  // the whole grid, so plan at full resolution directly.
  const int f = std::min({coarse_factor, grid.rows, grid.cols / 2});
  if (f < 2) {
    DpTable table;
    GridPath path = plan_path(problem, table);
    if (relaxations_out != nullptr) *relaxations_out = table.relaxations;
    return path;
  }

  const int crows = grid.rows / f;  // max coarse row index
  const int ccols = grid.cols / f;  // max coarse column index

  // A coarse cell is blocked only when all fine nodes inside it are
  // blocked, so every coarse cell containing a free fine node stays
  // usable and the corridor margin compensates for the optimism.
  const int cnr = crows + 1;
  const int cnc = ccols + 1;
  std::vector<std::uint8_t> ccells(static_cast<std::size_t>(cnr) * cnc, 0);
  for (int u = 0; u <= crows; ++u) {
    for (int v = 0; v <= ccols; ++v) {
      bool all_blocked = true;
      const int i_hi = std::min(u * f + f - 1, grid.rows);
      const int j_hi = std::min(v * f + f - 1, grid.cols);
      for (int i = u * f; i <= i_hi && all_blocked; ++i) {
        for (int j = v * f; j <= j_hi && all_blocked; ++j) {
          if (!problem.blocked.blocked(i, j)) all_blocked = false;
        }
      }
      if (all_blocked) ccells[static_cast<std::size_t>(u) * cnc + v] = 1;
    }
  }

  GridSpec coarse_grid;
  coarse_grid.origin = grid.origin;
  coarse_grid.dx = grid.dx * f;
  coarse_grid.dy = grid.dy * f;
  coarse_grid.rows = crows;
  coarse_grid.cols = ccols;

  PathProblem coarse_problem;
  coarse_problem.grid = coarse_grid;
  coarse_problem.blocked = CollisionMatrix(cnr, cnc, std::move(ccells));
  coarse_problem.start_row = problem.start_row / f;
  coarse_problem.goal_row = problem.goal_row / f;

  DpTable coarse_table = dp_forward(coarse_grid, coarse_problem.blocked,
                                    coarse_problem.start_row, full_bands(coarse_grid));
  if (!std::isfinite(coarse_table.best_cost(coarse_problem.goal_row, ccols))) {
    throw NoFeasiblePath("coarse level disconnects start from goal");
  }
  const GridPath coarse_path = backtrack(coarse_grid, coarse_table, coarse_problem.goal_row);

  // Fine pass confined to the selected cell of each column, widened by
  // corridor_margin cells up and down.
  std::vector<RowBand> bands(grid.node_cols());
  for (int j = 0; j <= grid.cols; ++j) {
    const int v = std::min(j / f, ccols);
    const int u = coarse_path.row_indices[v];
    bands[j].lo = std::max(0, (u - corridor_margin) * f);
    bands[j].hi = std::min(grid.rows, (u + corridor_margin) * f + f - 1);
  }

  DpTable fine_table = dp_forward(grid, problem.blocked, problem.start_row, bands);
  if (relaxations_out != nullptr) {
    *relaxations_out = coarse_table.relaxations + fine_table.relaxations;
  }
  if (!std::isfinite(fine_table.best_cost(problem.goal_row, grid.cols))) {
    throw CorridorInfeasible("no fine-resolution path inside the corridor; widen the margin");
  }
  return backtrack(grid, fine_table, problem.goal_row);
}

std::vector<Eigen::Vector2d> path_to_waypoints(const GridSpec& grid, const GridPath& path) {
  std::vector<Eigen::Vector2d> points;
  points.reserve(path.row_indices.size());
  for (std::size_t j = 0; j < path.row_indices.size(); ++j) {
    points.push_back(grid.node(path.row_indices[j], static_cast<int>(j)));
  }
  return points;
}

}  // namespace chainplan
