#pragma once

#include "toponav/types.hpp"

#include <Eigen/Geometry>

namespace toponav {

/// Pinhole intrinsics. Pixel (u, v) is column u, row v.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 1;
  int height = 1;

  void validate() const;

  /// Square-pixel camera with the principal point at the image center.
  static CameraIntrinsics from_fov(int width, int height, double horizontal_fov);
};

/// Camera pose in the world frame (z up). The orientation maps the optical
/// frame (x right, y down, z forward) into the world.
struct Pose {
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  Eigen::Matrix3d rotation() const { return orientation.toRotationMatrix(); }

  /// Throws ConfigError unless the quaternion has unit norm within 1e-9.
  void validate() const;

  /// Yaw of the optical axis projected onto the ground plane.
  double yaw() const;

  /// Camera mounted at `height` above the floor, looking horizontally along
  /// world yaw angle `yaw` (x axis = 0, counter-clockwise).
  static Pose camera_at(const Vec2& xy, double height, double yaw);
};

/// Rotation taking optical-frame vectors to a level body frame whose x axis
/// points forward.
Eigen::Matrix3d optical_to_body();

Vec3 backproject_pixel(double u, double v, double depth, const CameraIntrinsics& intrinsics,
                       double max_depth);

inline Vec3 camera_to_world(const Vec3& camera_point, const Pose& pose) {
  return pose.orientation * camera_point + pose.position;
}

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

}  // namespace toponav
