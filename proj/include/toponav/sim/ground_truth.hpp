#pragma once

#include "toponav/sim/scene.hpp"

#include <string>
#include <vector>

namespace toponav::sim {

/// Fine planar grid over the true scene, used for reference path lengths.
/// A cell is blocked when its center is closer than the agent radius to any
/// geometry.
class GroundTruth {
 public:
  GroundTruth(const Scene& scene, double resolution, double agent_radius);

  /// Geodesic length from `start` to the nearest unblocked cell within
  /// `success_distance` of an instance of `cls` (8-connected, no corner
  /// cutting). Infinity when unreachable; 0 when the start already
  /// qualifies.
  double shortest_path_length(const Vec2& start, const std::string& cls, double success_distance) const;

  double resolution() const { return resolution_; }

 private:
  const Scene& scene_;
  double resolution_;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<std::uint8_t> blocked_;
};

}  // namespace toponav::sim
