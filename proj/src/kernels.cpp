#include "toponav/kernels.hpp"

#include "toponav/kdtree.hpp"

#include <cmath>
#include <limits>

namespace toponav::kernels {

std::vector<double> nearest_distances_serial(std::span<const Vec3> queries, std::span<const Vec3> set) {
  if (set.empty()) throw EmptyInputError("nearest_distances: empty reference set");
  std::vector<double> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : set) best = std::min(best, (queries[i] - s).squaredNorm());
    out[i] = std::sqrt(best);
  }
  return out;
}

std::vector<double> nearest_distances(std::span<const Vec3> queries, std::span<const Vec3> set) {
  if (set.empty()) throw EmptyInputError("nearest_distances: empty reference set");
  const KdTree tree(set);
  std::vector<double> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = std::sqrt(tree.nearest(queries[i]).squared_distance);
  }
  return out;
}

namespace {

bool valid_depth(double d, double max_depth) {
  return std::isfinite(d) && d > 0.0 && d <= max_depth;
}

// Back-projects one image row; shared by both kernels so they agree bit for bit.
void backproject_row(const LabeledFrame& frame, int v, double max_depth, FramePoints& out) {
  const auto& k = frame.intrinsics;
  for (int u = 0; u < k.width; ++u) {
    const std::size_t idx = frame.index(u, v);
    const double d = frame.depth[idx];
    if (!valid_depth(d, max_depth)) {
      ++out.invalid;
      continue;
    }
    const Vec3 xc(d * (u - k.cx) / k.fx, d * (v - k.cy) / k.fy, d);
    out.cloud.push_back(camera_to_world(xc, frame.pose), frame.color[idx]);
    out.labels.push_back(frame.labels[idx]);
  }
}

}  // namespace

FramePoints backproject_frame_serial(const LabeledFrame& frame, double max_depth) {
  frame.validate();
  FramePoints out;
  for (int v = 0; v < frame.height(); ++v) backproject_row(frame, v, max_depth, out);
  return out;
}

FramePoints backproject_frame(const LabeledFrame& frame, double max_depth) {
  frame.validate();
  std::vector<FramePoints> rows(static_cast<std::size_t>(frame.height()));
#pragma omp parallel for schedule(static)
  for (int v = 0; v < frame.height(); ++v) backproject_row(frame, v, max_depth, rows[v]);

  FramePoints out;
  for (auto& row : rows) {
    out.cloud.append(row.cloud);
    out.labels.insert(out.labels.end(), row.labels.begin(), row.labels.end());
    out.invalid += row.invalid;
  }
  return out;
}

}  // namespace toponav::kernels
