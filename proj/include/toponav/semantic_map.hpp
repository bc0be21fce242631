#pragma once

#include "toponav/frame.hpp"
#include "toponav/point_cloud.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace toponav {

struct MapConfig {
  double voxel_size = 0.05;        ///< scene/object voxel resolution (m)
  double floor_tolerance = 0.2;    ///< half-height of the navigable band (m)
  double interp_step = 0.1;        ///< spacing of stand-to-floor interpolants (m)
  double grid_resolution = 0.1;    ///< occupancy cell size (m)
  double ceiling_offset = 1.5;     ///< obstacle band top, above the floor (m)
  double max_depth = 10.0;         ///< depth readings beyond this are invalid (m)
  double camera_height = 0.88;     ///< sensor height above the floor (m)
  std::set<ClassId> nav_classes;   ///< classes navigable regardless of height

  void validate() const;
};

enum class CellState : std::int8_t { kObstacle = -1, kUnknown = 0, kFree = 1 };

struct GridIndex {
  int i = 0;
  int j = 0;
  auto operator<=>(const GridIndex&) const = default;
};

struct OccupancyGrid {
  double x_min = 0.0;
  double y_min = 0.0;
  double resolution = 0.1;
  int nx = 0;
  int ny = 0;
  std::vector<CellState> cells;  ///< index = i * ny + j

  bool empty() const { return cells.empty(); }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  CellState at(int i, int j) const { return cells[static_cast<std::size_t>(i) * ny + j]; }
  CellState& at(int i, int j) { return cells[static_cast<std::size_t>(i) * ny + j]; }

  /// phi(p): floor((p - min) / resolution). May fall outside the grid.
  GridIndex cell_of(double x, double y) const;
  Vec2 cell_center(int i, int j) const;

  bool operator==(const OccupancyGrid&) const = default;
};

/// Axis-aligned xy extent used to pin a grid's origin.
struct GridBounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
};

struct SemanticMap {
  MapConfig config;
  PointCloud scene;
  std::map<ClassId, PointCloud> objects;
  PointCloud navigable;
  PointCloud obstacles;
  PointCloud frontiers;
  /// Interpolants accumulated from every panorama's standing position.
  PointCloud bridges;
  std::optional<double> z_floor;
  OccupancyGrid grid;

  VoxelAccumulator scene_voxels;
  std::map<ClassId, VoxelAccumulator> object_voxels;

  std::size_t frames_integrated = 0;
  std::size_t invalid_pixels = 0;

  double floor() const;  ///< throws ConfigError while z_floor is unset
};

/// Adds a frame's valid pixels to the scene cloud and the per-class object
/// clouds, downsampling each at the voxel resolution. Invalid pixels are
/// skipped and counted. Derived clouds are left untouched (see
/// refresh_derived).
void integrate_frame(SemanticMap& map, const LabeledFrame& frame);

/// Ground height from the first panorama. The expected ground is
/// `camera_pose` z minus the configured camera height; valid points within
/// 0.5 m of it are kept and their 5th-percentile z is returned. With no
/// point inside that window the 5th percentile of all points is clamped
/// into it. Throws EmptyInputError without valid depth.
double estimate_floor(std::span<const LabeledFrame> panorama, const Pose& camera_pose,
                      const MapConfig& config);

/// Points p_k = stand + k * step * (x - stand) / |x - stand| for
/// k = 1..floor(|x - stand| / step), for every target farther than `step`,
/// keeping those with |z_k - z_floor| < tolerance.
PointCloud interpolate_from_stand(const Vec3& stand, std::span<const Vec3> targets, double step,
                                  double z_floor, double tolerance);

/// Scene points inside the floor band, plus navigable-class object points,
/// plus the accumulated bridges, downsampled.
PointCloud compute_navigable(const SemanticMap& map);

/// Scene points strictly above the floor band.
PointCloud compute_obstacles(const SemanticMap& map);

/// Projects both clouds onto a grid. Obstacle cells win over free cells.
/// Without explicit bounds the extent is taken from the clouds, with the
/// origin snapped down to a multiple of the resolution and `padding` extra
/// unknown cells on every side. Throws EmptyInputError when both clouds are
/// empty and no bounds are given.
OccupancyGrid build_occupancy_grid(const PointCloud& navigable, const PointCloud& obstacles,
                                   double resolution, std::optional<GridBounds> bounds = std::nullopt,
                                   int padding = 0);
OccupancyGrid build_occupancy_grid(const SemanticMap& map);

/// Free cells with an unknown 4-neighbor and no obstacle 4-neighbor,
/// ordered by (i, j).
std::vector<GridIndex> detect_frontiers(const OccupancyGrid& grid);

/// Lifts frontier cells to their min corner at floor height.
PointCloud frontiers_to_world(std::span<const GridIndex> cells, const OccupancyGrid& grid, double z_floor);

/// Frontier points at least `radius` (planar) from every stand position.
/// Used to retire frontiers inside the floor disc a level camera cannot see
/// from where it stood.
PointCloud drop_frontiers_near(const PointCloud& frontiers, std::span<const Vec2> stands, double radius);

/// Recomputes navigable, obstacle, grid and frontier layers from the scene.
void refresh_derived(SemanticMap& map);

/// Full per-panorama update: floor estimate on first use, frame
/// integration, bridging from the standing position toward the panorama's
/// floor-band points, then refresh_derived.
void integrate_panorama(SemanticMap& map, std::span<const LabeledFrame> panorama, const Vec2& agent_xy);

}  // namespace toponav
