#include "toponav/sim/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

namespace toponav::sim {

std::vector<std::uint8_t> inflate_obstacles(const OccupancyGrid& grid, double radius) {
  std::vector<std::uint8_t> blocked(grid.cells.size(), 0);
  const int reach = static_cast<int>(std::floor(radius / grid.resolution));
  const double r2 = (radius / grid.resolution) * (radius / grid.resolution);
  std::vector<std::pair<int, int>> offsets;
  for (int di = -reach; di <= reach; ++di) {
    for (int dj = -reach; dj <= reach; ++dj) {
      if (di * di + dj * dj <= r2) offsets.emplace_back(di, dj);
    }
  }
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      if (grid.at(i, j) != CellState::kObstacle) continue;
      for (const auto& [di, dj] : offsets) {
        if (grid.contains(i + di, j + dj)) blocked[static_cast<std::size_t>(i + di) * grid.ny + (j + dj)] = 1;
      }
    }
  }
  return blocked;
}

GridPlanner::GridPlanner(const OccupancyGrid& grid, double inflation)
    : grid_(grid), blocked_(inflate_obstacles(grid, inflation)), inflation_(inflation) {}

bool GridPlanner::goal_admissible(const Vec2& to) const {
  if (grid_.empty()) return false;
  const GridIndex goal = grid_.cell_of(to.x(), to.y());
  return grid_.contains(goal.i, goal.j) && grid_.at(goal.i, goal.j) == CellState::kFree &&
         !blocked_[static_cast<std::size_t>(goal.i) * grid_.ny + goal.j];
}

std::optional<PlannedPath> plan_path(const OccupancyGrid& grid, const Vec2& from, const Vec2& to, double inflation) {
  return GridPlanner(grid, inflation).plan(from, to);
}

std::optional<PlannedPath> GridPlanner::plan(const Vec2& from, const Vec2& to) const {
  const OccupancyGrid& grid = grid_;
  const auto& blocked = blocked_;
  if (grid.empty()) return std::nullopt;
  const GridIndex start = grid.cell_of(from.x(), from.y());
  const GridIndex goal = grid.cell_of(to.x(), to.y());
  if (!grid.contains(start.i, start.j) || !goal_admissible(to)) return std::nullopt;
  const auto idx = [&](int i, int j) { return static_cast<std::size_t>(i) * grid.ny + j; };
  const auto free_cell = [&](int i, int j) { return grid.at(i, j) == CellState::kFree; };

  // free-but-inflated cells connected to the start and within one inflation
  // radius of it may be used to escape
  const double escape_reach = inflation_ + grid.resolution;
  std::vector<std::uint8_t> escape(grid.cells.size(), 0);
  escape[idx(start.i, start.j)] = 1;
  if (blocked[idx(start.i, start.j)] || !free_cell(start.i, start.j)) {
    std::vector<GridIndex> stack{start};
    while (!stack.empty()) {
      const GridIndex c = stack.back();
      stack.pop_back();
      for (const auto& [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
        const int ni = c.i + di, nj = c.j + dj;
        if (!grid.contains(ni, nj) || escape[idx(ni, nj)]) continue;
        const double di_m = (ni - start.i) * grid.resolution, dj_m = (nj - start.j) * grid.resolution;
        const bool nearby = std::hypot(di_m, dj_m) <= escape_reach;
        if (nearby && free_cell(ni, nj) && blocked[idx(ni, nj)]) {
          escape[idx(ni, nj)] = 1;
          stack.push_back({ni, nj});
        }
      }
    }
  }
  const auto passable = [&](int i, int j) {
    return grid.contains(i, j) && (escape[idx(i, j)] || (free_cell(i, j) && !blocked[idx(i, j)]));
  };

  const double r = grid.resolution;
  const double diag = std::numbers::sqrt2 * r;
  const auto heuristic = [&](int i, int j) {
    const int dx = std::abs(i - goal.i), dy = std::abs(j - goal.j);
    return r * (std::max(dx, dy) - std::min(dx, dy)) + diag * std::min(dx, dy);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(grid.cells.size(), inf);
  std::vector<std::int64_t> parent(grid.cells.size(), -1);
  std::vector<std::uint8_t> closed(grid.cells.size(), 0);
  using Entry = std::tuple<double, std::uint64_t, int, int>;  // f, sequence, i, j
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  g[idx(start.i, start.j)] = 0.0;
  open.emplace(heuristic(start.i, start.j), seq++, start.i, start.j);

  static constexpr int kDi[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const auto [f, s, i, j] = open.top();
    open.pop();
    const std::size_t ci = idx(i, j);
    if (closed[ci]) continue;
    closed[ci] = 1;
    if (i == goal.i && j == goal.j) break;
    for (int k = 0; k < 8; ++k) {
      const int ni = i + kDi[k], nj = j + kDj[k];
      if (!passable(ni, nj)) continue;
      const bool diagonal = k >= 4;
      if (diagonal && (!passable(i + kDi[k], j) || !passable(i, j + kDj[k]))) continue;
      const double cand = g[ci] + (diagonal ? diag : r);
      const std::size_t ni_idx = idx(ni, nj);
      if (cand < g[ni_idx]) {
        g[ni_idx] = cand;
        parent[ni_idx] = static_cast<std::int64_t>(ci);
        open.emplace(cand + heuristic(ni, nj), seq++, ni, nj);
      }
    }
  }

  const std::size_t gi = idx(goal.i, goal.j);
  if (!std::isfinite(g[gi])) return std::nullopt;

  PlannedPath path;
  path.grid_cost = g[gi];
  for (auto c = static_cast<std::int64_t>(gi); c >= 0; c = parent[static_cast<std::size_t>(c)]) {
    path.cells.push_back({static_cast<int>(c / grid.ny), static_cast<int>(c % grid.ny)});
  }
  std::reverse(path.cells.begin(), path.cells.end());
  for (const auto& c : path.cells) path.points.push_back(grid.cell_center(c.i, c.j));
  path.points.front() = from;
  if (path.points.size() == 1) {
    path.points.push_back(to);
  } else {
    path.points.back() = to;
  }
  for (std::size_t k = 1; k < path.points.size(); ++k) path.length += (path.points[k] - path.points[k - 1]).norm();
  return path;
}

}  // namespace toponav::sim
