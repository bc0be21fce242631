#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial reference with the
// same contract; tests compare the two and bench/ times them.

#include "toponav/frame.hpp"
#include "toponav/point_cloud.hpp"

#include <span>
#include <vector>

namespace toponav::kernels {

/// For every query, the Euclidean distance to the nearest point of `set`.
/// `set` must be non-empty.
std::vector<double> nearest_distances(std::span<const Vec3> queries, std::span<const Vec3> set);
std::vector<double> nearest_distances_serial(std::span<const Vec3> queries, std::span<const Vec3> set);

struct FramePoints {
  PointCloud cloud;             ///< world frame, colored
  std::vector<ClassId> labels;  ///< parallel to cloud.points
  std::size_t invalid = 0;      ///< pixels skipped for invalid depth
};

/// Back-projects every valid pixel of `frame` into the world frame, in
/// row-major pixel order.
FramePoints backproject_frame(const LabeledFrame& frame, double max_depth);
FramePoints backproject_frame_serial(const LabeledFrame& frame, double max_depth);

}  // namespace toponav::kernels
