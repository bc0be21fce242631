#pragma once

#include "toponav/geometry.hpp"

#include <vector>

namespace toponav {

/// One posed RGB-D frame with per-pixel class labels, row-major.
/// Non-positive or non-finite depth marks an invalid pixel.
struct LabeledFrame {
  std::vector<double> depth;
  std::vector<Rgb> color;
  std::vector<ClassId> labels;
  Pose pose;
  CameraIntrinsics intrinsics;
  int heading_index = 0;

  int width() const { return intrinsics.width; }
  int height() const { return intrinsics.height; }
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * intrinsics.width + u; }

  /// Allocates arrays for the intrinsics' dimensions (depth 0, unlabeled).
  void resize();
  /// Throws ConfigError when array sizes disagree with the intrinsics.
  void validate() const;
};

}  // namespace toponav
