#include "toponav/sim/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace toponav::sim {

namespace {

constexpr Rgb kFloorColor{120, 110, 100};
constexpr Rgb kWallColor{200, 200, 200};

}  // namespace

Rgb class_color(const std::string& cls) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a, stable across platforms
  for (const unsigned char ch : cls) h = (h ^ ch) * 1099511628211ull;
  return {static_cast<std::uint8_t>(64 + (h & 0x7f)), static_cast<std::uint8_t>(64 + ((h >> 8) & 0x7f)),
          static_cast<std::uint8_t>(64 + ((h >> 16) & 0x7f))};
}

std::optional<double> intersect_box(const Box& box, const Vec3& o, const Vec3& d) {
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(d[a]) < 1e-15) {
      if (o[a] < box.min[a] || o[a] > box.max[a]) return std::nullopt;
      continue;
    }
    double t1 = (box.min[a] - o[a]) / d[a];
    double t2 = (box.max[a] - o[a]) / d[a];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
  }
  if (t_near > t_far || !(t_near > 0.0)) return std::nullopt;
  return t_near;
}

std::optional<RayHit> cast_ray(const Scene& scene, const ClassVocabulary& vocabulary, const Vec3& o,
                               const Vec3& d) {
  std::optional<RayHit> best;
  const auto offer = [&](double t, ClassId label, Rgb color) {
    if (t > 0.0 && (!best || t < best->t)) best = RayHit{t, label, color};
  };

  for (const auto& obj : scene.objects) {
    if (auto t = intersect_box(obj.box, o, d)) offer(*t, vocabulary.id(obj.cls), class_color(obj.cls));
  }
  for (const auto& w : scene.walls) {
    if (auto t = intersect_box(w, o, d)) offer(*t, kWallLabel, kWallColor);
  }
  if (d.z() < 0.0) offer(-o.z() / d.z(), kUnlabeled, kFloorColor);

  // bounds: exit of the xy slab from the inside
  double t_exit = std::numeric_limits<double>::infinity();
  if (d.x() > 0.0) t_exit = std::min(t_exit, (scene.x1 - o.x()) / d.x());
  if (d.x() < 0.0) t_exit = std::min(t_exit, (scene.x0 - o.x()) / d.x());
  if (d.y() > 0.0) t_exit = std::min(t_exit, (scene.y1 - o.y()) / d.y());
  if (d.y() < 0.0) t_exit = std::min(t_exit, (scene.y0 - o.y()) / d.y());
  if (std::isfinite(t_exit) && o.z() + t_exit * d.z() >= 0.0) offer(t_exit, kWallLabel, kWallColor);
  return best;
}

namespace {

void render_pixel(const Scene& scene, const ClassVocabulary& vocabulary, const Eigen::Matrix3d& r,
                  double max_depth, int u, int v, LabeledFrame& f) {
  const auto& k = f.intrinsics;
  const Vec3 ray_cam((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
  const auto hit = cast_ray(scene, vocabulary, f.pose.position, r * ray_cam);
  const std::size_t idx = f.index(u, v);
  if (!hit || hit->t > max_depth) return;  // left invalid
  f.depth[idx] = hit->t;
  f.labels[idx] = hit->label;
  f.color[idx] = hit->color;
}

LabeledFrame blank_frame(const Pose& pose, const CameraIntrinsics& k, int heading) {
  k.validate();
  LabeledFrame f;
  f.pose = pose;
  f.intrinsics = k;
  f.heading_index = heading;
  f.resize();
  return f;
}

}  // namespace

LabeledFrame render_frame_serial(const Scene& scene, const ClassVocabulary& vocabulary, const Pose& pose,
                                 const CameraIntrinsics& k, double max_depth, int heading_index) {
  LabeledFrame f = blank_frame(pose, k, heading_index);
  const Eigen::Matrix3d r = pose.rotation();
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) render_pixel(scene, vocabulary, r, max_depth, u, v, f);
  }
  return f;
}

LabeledFrame render_frame(const Scene& scene, const ClassVocabulary& vocabulary, const Pose& pose,
                          const CameraIntrinsics& k, double max_depth, int heading_index) {
  LabeledFrame f = blank_frame(pose, k, heading_index);
  const Eigen::Matrix3d r = pose.rotation();
#pragma omp parallel for schedule(static)
  for (int v = 0; v < k.height; ++v) {
    for (int u = 0; u < k.width; ++u) render_pixel(scene, vocabulary, r, max_depth, u, v, f);
  }
  return f;
}

std::vector<LabeledFrame> render_panorama(const Scene& scene, const ClassVocabulary& vocabulary,
                                          const Vec2& agent_xy, const RenderConfig& config, int num_headings) {
  if (num_headings <= 0) throw ConfigError("panorama needs at least one heading");
  if (!scene.free_at(agent_xy)) throw GeometryError("camera pose lies inside scene geometry");
  const CameraIntrinsics k = config.intrinsics();
  std::vector<LabeledFrame> frames;
  frames.reserve(static_cast<std::size_t>(num_headings));
  for (int h = 0; h < num_headings; ++h) {
    const double yaw = 2.0 * std::numbers::pi * h / num_headings;
    const Pose pose = Pose::camera_at(agent_xy, config.camera_height, yaw);
    frames.push_back(render_frame(scene, vocabulary, pose, k, config.max_depth, h));
  }
  return frames;
}

HeadingSummary summarize_frame(const LabeledFrame& frame, const ClassVocabulary& vocabulary, double max_depth,
                               double sector_half_angle) {
  HeadingSummary s;
  s.heading = frame.heading_index;
  std::set<ClassId> seen;
  const auto& k = frame.intrinsics;
  for (int u = 0; u < frame.width(); ++u) {
    if (std::abs(std::atan((u - k.cx) / k.fx)) > sector_half_angle) continue;
    for (int v = 0; v < frame.height(); ++v) {
      const std::size_t i = frame.index(u, v);
      if (frame.labels[i] >= 0 && frame.depth[i] > 0.0) seen.insert(frame.labels[i]);
    }
  }
  for (const ClassId c : seen) s.classes.push_back(vocabulary.name(c));
  std::sort(s.classes.begin(), s.classes.end());

  const int v0 = std::max(0, static_cast<int>(std::floor(frame.intrinsics.cy)) - 1);
  const int v1 = std::min(frame.height() - 1, static_cast<int>(std::ceil(frame.intrinsics.cy)) + 1);
  double sum = 0.0;
  int n = 0;
  for (int v = v0; v <= v1; ++v) {
    for (int u = 0; u < frame.width(); ++u) {
      const double d = frame.depth[frame.index(u, v)];
      sum += (std::isfinite(d) && d > 0.0) ? d : max_depth;
      ++n;
    }
  }
  s.free_depth = n ? sum / n : 0.0;
  return s;
}

}  // namespace toponav::sim
