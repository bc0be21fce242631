#pragma once

#include "toponav/types.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace toponav::sim {

struct Box {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  bool contains_xy(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
  }
  /// Planar distance from p to the box footprint (0 inside).
  double distance_xy(const Vec2& p) const;
};

struct SceneObject {
  std::string cls;
  Box box;
};

/// Optional episode defaults stored alongside a scene.
struct SceneEpisode {
  Vec2 start = Vec2::Zero();
  double yaw = 0.0;
  std::string target;
  std::optional<int> max_steps;
};

/// Box world on a z = 0 floor. The bounds rectangle acts as four walls of
/// unbounded height.
struct Scene {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  std::vector<Box> walls;
  std::vector<SceneObject> objects;
  std::vector<SceneEpisode> episodes;

  /// Throws ConfigError when boxes are degenerate or leave the bounds.
  void validate() const;

  bool has_class(const std::string& cls) const;
  std::vector<std::string> class_names() const;  ///< sorted, unique

  /// Planar distance from p to the nearest wall, object or bound.
  double clearance(const Vec2& p) const;
  /// Planar distance from p to the nearest instance of `cls`.
  double distance_to_class(const Vec2& p, const std::string& cls) const;
  /// True when p is inside the bounds and outside every box footprint.
  bool free_at(const Vec2& p) const;
};

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
/// Throws Error on IO or schema problems.
Scene load_scene(const std::string& path);
void save_scene(const std::string& path, const Scene& scene);

}  // namespace toponav::sim
