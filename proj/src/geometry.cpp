#include "toponav/geometry.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace toponav {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw ConfigError("camera focal lengths must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw ConfigError("camera image dimensions must be positive");
  }
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw ConfigError("principal point lies outside the image");
  }
}

CameraIntrinsics CameraIntrinsics::from_fov(int width, int height, double horizontal_fov) {
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = 0.5 * width / std::tan(0.5 * horizontal_fov);
  k.fy = k.fx;
  k.cx = 0.5 * (width - 1);
  k.cy = 0.5 * (height - 1);
  k.validate();
  return k;
}

void Pose::validate() const {
  if (std::abs(orientation.norm() - 1.0) > 1e-9) {
    throw ConfigError("pose quaternion is not normalized");
  }
}

double Pose::yaw() const {
  const Vec3 forward = orientation * Vec3::UnitZ();
  return std::atan2(forward.y(), forward.x());
}

Eigen::Matrix3d optical_to_body() {
  Eigen::Matrix3d m;
  // columns: images of optical x (right), y (down), z (forward)
  m << 0.0, 0.0, 1.0,
      -1.0, 0.0, 0.0,
       0.0, -1.0, 0.0;
  return m;
}

Pose Pose::camera_at(const Vec2& xy, double height, double yaw) {
  Pose pose;
  pose.position = Vec3(xy.x(), xy.y(), height);
  const Eigen::Matrix3d r = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix() * optical_to_body();
  pose.orientation = Eigen::Quaterniond(r).normalized();
  return pose;
}

Vec3 backproject_pixel(double u, double v, double depth, const CameraIntrinsics& k, double max_depth) {
  if (!std::isfinite(depth) || depth <= 0.0 || depth > max_depth) {
    throw InvalidDepthError("invalid depth value " + std::to_string(depth));
  }
  if (u < 0.0 || v < 0.0 || u >= k.width || v >= k.height) {
    throw OutOfBoundsError("pixel outside image bounds");
  }
  return {depth * (u - k.cx) / k.fx, depth * (v - k.cy) / k.fy, depth};
}

double wrap_angle(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace toponav
