#pragma once

#include "toponav/semantic_map.hpp"

#include <optional>
#include <vector>

namespace toponav::sim {

struct PlannedPath {
  std::vector<Vec2> points;  ///< from, intermediate cell centers, to
  std::vector<GridIndex> cells;
  double grid_cost = 0.0;    ///< cell-center path cost (m)
  double length = 0.0;       ///< polyline length of `points` (m)
};

/// Cells that are not traversable: obstacle cells plus every cell whose
/// center lies within `radius` of an obstacle cell center.
std::vector<std::uint8_t> inflate_obstacles(const OccupancyGrid& grid, double radius);

/// Shortest 8-connected path over free, non-inflated cells (diagonal cost
/// sqrt(2) * resolution, no corner cutting). When the start sits inside the
/// inflation zone the path may leave through connected free cells within one
/// inflation radius of it.
/// Returns nullopt when the goal cell is not free, lies in the inflation
/// zone, or cannot be reached.
std::optional<PlannedPath> plan_path(const OccupancyGrid& grid, const Vec2& from, const Vec2& to, double inflation);

/// plan_path with the inflation computed once for many queries on the same
/// grid. Borrows the grid.
class GridPlanner {
 public:
  GridPlanner(const OccupancyGrid& grid, double inflation);

  /// Goal cell exists, is free and lies outside the inflation zone.
  bool goal_admissible(const Vec2& to) const;
  std::optional<PlannedPath> plan(const Vec2& from, const Vec2& to) const;

 private:
  const OccupancyGrid& grid_;
  std::vector<std::uint8_t> blocked_;
  double inflation_;
};

}  // namespace toponav::sim
