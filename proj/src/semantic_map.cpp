#include "toponav/semantic_map.hpp"

#include "toponav/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace toponav {

void LabeledFrame::resize() {
  const auto n = static_cast<std::size_t>(intrinsics.width) * intrinsics.height;
  depth.assign(n, 0.0);
  color.assign(n, Rgb{});
  labels.assign(n, kUnlabeled);
}

void LabeledFrame::validate() const {
  const auto n = static_cast<std::size_t>(intrinsics.width) * intrinsics.height;
  if (depth.size() != n || color.size() != n || labels.size() != n) {
    throw ConfigError("frame arrays do not match the image dimensions");
  }
}

void MapConfig::validate() const {
  if (!(voxel_size > 0 && floor_tolerance > 0 && interp_step > 0 && grid_resolution > 0 &&
        ceiling_offset > 0 && max_depth > 0 && camera_height > 0)) {
    throw ConfigError("map lengths must be strictly positive");
  }
  if (interp_step < voxel_size) throw ConfigError("interpolation step must be >= voxel size");
}

double SemanticMap::floor() const {
  if (!z_floor) throw ConfigError("floor height has not been estimated");
  return *z_floor;
}

GridIndex OccupancyGrid::cell_of(double x, double y) const {
  return {static_cast<int>(std::floor((x - x_min) / resolution)),
          static_cast<int>(std::floor((y - y_min) / resolution))};
}

Vec2 OccupancyGrid::cell_center(int i, int j) const {
  return {x_min + (i + 0.5) * resolution, y_min + (j + 0.5) * resolution};
}

namespace {

void integrate_points(SemanticMap& map, const kernels::FramePoints& fp) {
  const auto& cfg = map.config;
  ++map.frames_integrated;
  map.invalid_pixels += fp.invalid;
  if (fp.cloud.empty()) return;

  std::map<ClassId, PointCloud> per_class;
  for (std::size_t i = 0; i < fp.cloud.size(); ++i) {
    if (fp.labels[i] >= 0) per_class[fp.labels[i]].push_back(fp.cloud.points[i], fp.cloud.colors[i]);
  }

  if (map.scene_voxels.voxel_size() != cfg.voxel_size) map.scene_voxels = VoxelAccumulator(cfg.voxel_size);
  map.scene_voxels.absorb(map.scene, fp.cloud);
  for (auto& [cls, pts] : per_class) {
    auto [it, fresh] = map.object_voxels.try_emplace(cls, cfg.voxel_size);
    if (!fresh && it->second.voxel_size() != cfg.voxel_size) it->second = VoxelAccumulator(cfg.voxel_size);
    it->second.absorb(map.objects[cls], pts);
  }
}

}  // namespace

void integrate_frame(SemanticMap& map, const LabeledFrame& frame) {
  integrate_points(map, kernels::backproject_frame(frame, map.config.max_depth));
}

double estimate_floor(std::span<const LabeledFrame> panorama, const Pose& camera_pose,
                      const MapConfig& config) {
  constexpr double kWindow = 0.5;
  constexpr double kPercentile = 0.05;

  std::vector<double> all;
  for (const auto& frame : panorama) {
    const auto fp = kernels::backproject_frame(frame, config.max_depth);
    for (const auto& p : fp.cloud.points) all.push_back(p.z());
  }
  if (all.empty()) throw EmptyInputError("no valid depth in the panorama");

  const double expected = camera_pose.position.z() - config.camera_height;
  const auto percentile = [](std::vector<double>& zs) {
    const auto k = static_cast<std::size_t>(std::floor(kPercentile * static_cast<double>(zs.size() - 1)));
    std::nth_element(zs.begin(), zs.begin() + k, zs.end());
    return zs[k];
  };

  std::vector<double> gated;
  for (const double z : all) {
    if (std::abs(z - expected) <= kWindow) gated.push_back(z);
  }
  if (!gated.empty()) return percentile(gated);
  return std::clamp(percentile(all), expected - kWindow, expected + kWindow);
}

PointCloud interpolate_from_stand(const Vec3& stand, std::span<const Vec3> targets, double step,
                                  double z_floor, double tolerance) {
  PointCloud out;
  for (const auto& x : targets) {
    const Vec3 delta = x - stand;
    const double dist = delta.norm();
    if (!(dist > step)) continue;
    const auto count = static_cast<long>(std::floor(dist / step));
    for (long k = 1; k <= count; ++k) {
      const Vec3 p = stand + (static_cast<double>(k) * step / dist) * delta;
      if (std::abs(p.z() - z_floor) < tolerance) out.push_back(p);
    }
  }
  return out;
}

PointCloud compute_navigable(const SemanticMap& map) {
  const double zf = map.floor();
  const double tol = map.config.floor_tolerance;
  PointCloud nav;
  for (const auto& p : map.scene.points) {
    if (p.z() >= zf - tol && p.z() <= zf + tol) nav.push_back(p);
  }
  for (const ClassId c : map.config.nav_classes) {
    if (auto it = map.objects.find(c); it != map.objects.end()) {
      nav.points.insert(nav.points.end(), it->second.points.begin(), it->second.points.end());
    }
  }
  nav.points.insert(nav.points.end(), map.bridges.points.begin(), map.bridges.points.end());
  return voxel_downsample(nav, map.config.voxel_size);
}

PointCloud compute_obstacles(const SemanticMap& map) {
  const double limit = map.floor() + map.config.floor_tolerance;
  PointCloud obs;
  for (const auto& p : map.scene.points) {
    if (p.z() > limit) obs.push_back(p);
  }
  return obs;
}

OccupancyGrid build_occupancy_grid(const PointCloud& navigable, const PointCloud& obstacles,
                                   double resolution, std::optional<GridBounds> bounds, int padding) {
  if (!(resolution > 0.0)) throw ConfigError("grid resolution must be positive");
  OccupancyGrid grid;
  grid.resolution = resolution;

  if (bounds) {
    grid.x_min = bounds->x_min - padding * resolution;
    grid.y_min = bounds->y_min - padding * resolution;
    grid.nx = std::max(1, static_cast<int>(std::ceil((bounds->x_max - bounds->x_min) / resolution))) + 2 * padding;
    grid.ny = std::max(1, static_cast<int>(std::ceil((bounds->y_max - bounds->y_min) / resolution))) + 2 * padding;
  } else {
    if (navigable.empty() && obstacles.empty()) throw EmptyInputError("cannot build a grid from empty clouds");
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const auto* cloud : {&navigable, &obstacles}) {
      for (const auto& p : cloud->points) {
        x0 = std::min(x0, p.x());
        y0 = std::min(y0, p.y());
        x1 = std::max(x1, p.x());
        y1 = std::max(y1, p.y());
      }
    }
    grid.x_min = std::floor(x0 / resolution) * resolution - padding * resolution;
    grid.y_min = std::floor(y0 / resolution) * resolution - padding * resolution;
    grid.nx = static_cast<int>(std::floor((x1 - grid.x_min) / resolution)) + 1 + padding;
    grid.ny = static_cast<int>(std::floor((y1 - grid.y_min) / resolution)) + 1 + padding;
  }
  grid.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, CellState::kUnknown);

  const auto mark = [&grid](const PointCloud& cloud, CellState state) {
    for (const auto& p : cloud.points) {
      const auto c = grid.cell_of(p.x(), p.y());
      if (grid.contains(c.i, c.j)) grid.at(c.i, c.j) = state;
    }
  };
  mark(navigable, CellState::kFree);
  mark(obstacles, CellState::kObstacle);  // obstacle precedence
  return grid;
}

OccupancyGrid build_occupancy_grid(const SemanticMap& map) {
  return build_occupancy_grid(map.navigable, map.obstacles, map.config.grid_resolution, std::nullopt, 1);
}

std::vector<GridIndex> detect_frontiers(const OccupancyGrid& grid) {
  static constexpr int kDi[4] = {1, -1, 0, 0};
  static constexpr int kDj[4] = {0, 0, 1, -1};
  std::vector<GridIndex> out;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      if (grid.at(i, j) != CellState::kFree) continue;
      bool unknown = false;
      bool obstacle = false;
      for (int k = 0; k < 4; ++k) {
        const int ni = i + kDi[k];
        const int nj = j + kDj[k];
        if (!grid.contains(ni, nj)) continue;
        const CellState s = grid.at(ni, nj);
        unknown |= s == CellState::kUnknown;
        obstacle |= s == CellState::kObstacle;
      }
      if (unknown && !obstacle) out.push_back({i, j});
    }
  }
  return out;
}

PointCloud frontiers_to_world(std::span<const GridIndex> cells, const OccupancyGrid& grid, double z_floor) {
  PointCloud out;
  out.points.reserve(cells.size());
  for (const auto& c : cells) {
    if (!grid.contains(c.i, c.j)) throw OutOfBoundsError("frontier cell outside the grid");
    out.push_back({c.i * grid.resolution + grid.x_min, c.j * grid.resolution + grid.y_min, z_floor});
  }
  return out;
}

PointCloud drop_frontiers_near(const PointCloud& frontiers, std::span<const Vec2> stands, double radius) {
  PointCloud out;
  for (const auto& f : frontiers.points) {
    const bool near = std::any_of(stands.begin(), stands.end(),
                                  [&](const Vec2& s) { return (f.head<2>() - s).norm() < radius; });
    if (!near) out.push_back(f);
  }
  return out;
}

void refresh_derived(SemanticMap& map) {
  map.navigable = compute_navigable(map);
  map.obstacles = compute_obstacles(map);
  if (map.navigable.empty() && map.obstacles.empty()) {
    map.grid = {};
    map.frontiers = {};
    return;
  }
  map.grid = build_occupancy_grid(map);
  const auto cells = detect_frontiers(map.grid);
  map.frontiers = frontiers_to_world(cells, map.grid, map.floor());
}

void integrate_panorama(SemanticMap& map, std::span<const LabeledFrame> panorama, const Vec2& agent_xy) {
  if (panorama.empty()) return;
  const auto& cfg = map.config;
  if (!map.z_floor) {
    try {
      map.z_floor = estimate_floor(panorama, panorama.front().pose, cfg);
    } catch (const EmptyInputError&) {
      map.z_floor = panorama.front().pose.position.z() - cfg.camera_height;
    }
  }
  const double zf = *map.z_floor;

  PointCloud fresh;
  for (const auto& frame : panorama) {
    const auto fp = kernels::backproject_frame(frame, cfg.max_depth);
    integrate_points(map, fp);
    for (std::size_t i = 0; i < fp.cloud.size(); ++i) {
      const Vec3& p = fp.cloud.points[i];
      const bool in_band = std::abs(p.z() - zf) <= cfg.floor_tolerance;
      if (in_band || cfg.nav_classes.contains(fp.labels[i])) fresh.push_back(p);
    }
  }
  fresh = voxel_downsample(fresh, cfg.voxel_size);

  const Vec3 stand(agent_xy.x(), agent_xy.y(), zf);
  map.bridges.append(interpolate_from_stand(stand, fresh.points, cfg.interp_step, zf, cfg.floor_tolerance));
  map.bridges = voxel_downsample(map.bridges, cfg.voxel_size);
  refresh_derived(map);
}

}  // namespace toponav
