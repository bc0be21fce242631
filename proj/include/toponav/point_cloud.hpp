#pragma once

#include "toponav/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace toponav {

/// World-frame points with optional parallel colors.
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Rgb> colors;  ///< empty, or one entry per point

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_colors() const { return !colors.empty(); }

  void push_back(const Vec3& p) { points.push_back(p); }
  void push_back(const Vec3& p, const Rgb& c) {
    points.push_back(p);
    colors.push_back(c);
  }

  /// Appends `other`. Colors are kept only when both sides carry them (or
  /// this cloud was empty).
  void append(const PointCloud& other);

  std::span<const Vec3> view() const { return points; }
};

/// Replaces the points of each occupied cubic voxel of side `voxel_size` with
/// their centroid; colors are averaged. Output order follows the first
/// occurrence of each voxel in the input.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size);

/// Incremental voxel_downsample for clouds that grow by appending. After
/// absorb(cloud, extra), `cloud` equals voxel_downsample(cloud + extra) bit
/// for bit, but only voxels touched by `extra` are recomputed. The voxel
/// index is rebuilt when the cloud's size or buffer changed since the last
/// call; in-place edits that keep both are not detected.
class VoxelAccumulator {
 public:
  explicit VoxelAccumulator(double voxel_size = 0.05);

  void absorb(PointCloud& cloud, const PointCloud& extra);
  double voxel_size() const { return voxel_size_; }

 private:
  using Key = std::array<std::int64_t, 3>;

  Key key_of(const Vec3& p) const;
  std::size_t* find(const Key& key);  // null when absent
  void insert(const Key& key, std::size_t index);
  void rebuild(const PointCloud& cloud);

  double voxel_size_;
  std::vector<std::size_t> slots_;  // cloud index + 1, 0 = empty
  std::vector<Key> keys_;
  std::size_t used_ = 0;
  std::size_t synced_size_ = 0;
  const Vec3* synced_data_ = nullptr;
  bool exact_ = false;  // false: index unusable, fall back to full downsampling
};

}  // namespace toponav
