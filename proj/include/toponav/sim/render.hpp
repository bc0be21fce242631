#pragma once

#include "toponav/frame.hpp"
#include "toponav/oracle.hpp"
#include "toponav/sim/scene.hpp"
#include "toponav/vocabulary.hpp"

#include <numbers>
#include <optional>
#include <vector>

namespace toponav::sim {

struct RenderConfig {
  int width = 64;
  int height = 64;
  double horizontal_fov = std::numbers::pi / 2.0;
  double camera_height = 0.88;
  double max_depth = 10.0;

  CameraIntrinsics intrinsics() const { return CameraIntrinsics::from_fov(width, height, horizontal_fov); }
};

struct RayHit {
  double t = 0.0;  ///< ray parameter; equals optical depth for rays with unit z in the camera frame
  ClassId label = kUnlabeled;
  Rgb color;
};

/// Nearest intersection of origin + t * dir (t > 0) with the floor plane,
/// the bounds walls, the wall boxes and the object boxes.
std::optional<RayHit> cast_ray(const Scene& scene, const ClassVocabulary& vocabulary, const Vec3& origin,
                               const Vec3& dir);

/// Ray/box slab test; returns the entry parameter when positive.
std::optional<double> intersect_box(const Box& box, const Vec3& origin, const Vec3& dir);

/// Depth + label frame. Hits farther than max_depth are invalid (depth 0).
LabeledFrame render_frame(const Scene& scene, const ClassVocabulary& vocabulary, const Pose& pose,
                          const CameraIntrinsics& intrinsics, double max_depth, int heading_index = 0);
LabeledFrame render_frame_serial(const Scene& scene, const ClassVocabulary& vocabulary, const Pose& pose,
                                 const CameraIntrinsics& intrinsics, double max_depth, int heading_index = 0);

/// Frames at yaw 2*pi*k/num_headings, k = 0..num_headings-1. Throws
/// GeometryError when `agent_xy` is not in free space.
std::vector<LabeledFrame> render_panorama(const Scene& scene, const ClassVocabulary& vocabulary,
                                          const Vec2& agent_xy, const RenderConfig& config, int num_headings);

/// Visible classes and horizon-band mean depth of one frame (invalid
/// pixels count as max_depth). Only pixel columns whose bearing lies within
/// `sector_half_angle` of the optical axis count, so a panorama of n
/// overlapping frames can be read as n disjoint sectors (pass pi / n).
/// The default keeps the whole frame.
HeadingSummary summarize_frame(const LabeledFrame& frame, const ClassVocabulary& vocabulary, double max_depth,
                               double sector_half_angle = std::numbers::pi);

Rgb class_color(const std::string& cls);

}  // namespace toponav::sim
