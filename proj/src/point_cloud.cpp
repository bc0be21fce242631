#include "toponav/point_cloud.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace toponav {

void PointCloud::append(const PointCloud& other) {
  if (other.empty()) return;
  if (empty()) {
    *this = other;
    return;
  }
  const bool keep_colors = has_colors() && other.has_colors();
  if (!keep_colors) colors.clear();
  points.insert(points.end(), other.points.begin(), other.points.end());
  if (keep_colors) colors.insert(colors.end(), other.colors.begin(), other.colors.end());
}

namespace {

using VoxelKey = std::array<std::int64_t, 3>;

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t hash_key(const VoxelKey& k) {
  return mix(static_cast<std::uint64_t>(k[0]) ^ mix(static_cast<std::uint64_t>(k[1]) ^ mix(static_cast<std::uint64_t>(k[2]))));
}

// Open addressing, linear probing. Slots hold accumulator index + 1, 0 is empty.
class VoxelIndex {
 public:
  explicit VoxelIndex(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    slots_.assign(cap, 0);
    keys_.resize(cap);
  }

  // Returns the accumulator index for key, assigning next_index when absent.
  std::size_t find_or_insert(const VoxelKey& key, std::size_t next_index, bool& inserted) {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash_key(key) & mask;; i = (i + 1) & mask) {
      if (slots_[i] == 0) {
        slots_[i] = next_index + 1;
        keys_[i] = key;
        inserted = true;
        return next_index;
      }
      if (keys_[i] == key) {
        inserted = false;
        return slots_[i] - 1;
      }
    }
  }

 private:
  std::vector<std::size_t> slots_;
  std::vector<VoxelKey> keys_;
};

struct Accumulator {
  Vec3 sum = Vec3::Zero();
  std::array<std::uint32_t, 3> rgb{0, 0, 0};
  std::size_t count = 0;
};

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size) {
  if (!(voxel_size > 0.0)) throw ConfigError("voxel size must be positive");
  PointCloud out;
  if (cloud.empty()) return out;

  const bool colored = cloud.has_colors();
  VoxelIndex index(cloud.size());
  std::vector<Accumulator> acc;

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    const VoxelKey key{static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
                       static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
                       static_cast<std::int64_t>(std::floor(p.z() / voxel_size))};
    bool inserted = false;
    const std::size_t slot = index.find_or_insert(key, acc.size(), inserted);
    if (inserted) acc.emplace_back();
    Accumulator& a = acc[slot];
    a.sum += p;
    ++a.count;
    if (colored) {
      a.rgb[0] += cloud.colors[i].r;
      a.rgb[1] += cloud.colors[i].g;
      a.rgb[2] += cloud.colors[i].b;
    }
  }

  out.points.reserve(acc.size());
  if (colored) out.colors.reserve(acc.size());
  for (const auto& a : acc) {
    const double n = static_cast<double>(a.count);
    out.points.push_back(a.sum / n);
    if (colored) {
      const auto avg = [&](std::uint32_t s) {
        return static_cast<std::uint8_t>((s + a.count / 2) / a.count);
      };
      out.colors.push_back({avg(a.rgb[0]), avg(a.rgb[1]), avg(a.rgb[2])});
    }
  }
  return out;
}

VoxelAccumulator::VoxelAccumulator(double voxel_size) : voxel_size_(voxel_size) {
  if (!(voxel_size > 0.0)) throw ConfigError("voxel size must be positive");
}

VoxelAccumulator::Key VoxelAccumulator::key_of(const Vec3& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x() / voxel_size_)),
          static_cast<std::int64_t>(std::floor(p.y() / voxel_size_)),
          static_cast<std::int64_t>(std::floor(p.z() / voxel_size_))};
}

std::size_t* VoxelAccumulator::find(const Key& key) {
  if (slots_.empty()) return nullptr;
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = hash_key(key) & mask;; i = (i + 1) & mask) {
    if (slots_[i] == 0) return nullptr;
    if (keys_[i] == key) return &slots_[i];
  }
}

void VoxelAccumulator::insert(const Key& key, std::size_t index) {
  if (2 * (used_ + 1) > slots_.size()) {
    std::vector<std::size_t> old_slots(std::max<std::size_t>(16, 2 * slots_.size()), 0);
    std::vector<Key> old_keys(old_slots.size());
    old_slots.swap(slots_);
    old_keys.swap(keys_);
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t j = 0; j < old_slots.size(); ++j) {
      if (old_slots[j] == 0) continue;
      std::size_t i = hash_key(old_keys[j]) & mask;
      while (slots_[i] != 0) i = (i + 1) & mask;
      slots_[i] = old_slots[j];
      keys_[i] = old_keys[j];
    }
  }
  const std::size_t mask = slots_.size() - 1;
  std::size_t i = hash_key(key) & mask;
  while (slots_[i] != 0) i = (i + 1) & mask;
  slots_[i] = index + 1;
  keys_[i] = key;
  ++used_;
}

void VoxelAccumulator::rebuild(const PointCloud& cloud) {
  slots_.clear();
  keys_.clear();
  used_ = 0;
  exact_ = true;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Key k = key_of(cloud.points[i]);
    if (find(k)) {
      exact_ = false;  // not a downsampled cloud
      break;
    }
    insert(k, i);
  }
  synced_size_ = cloud.size();
  synced_data_ = cloud.points.data();
}

void VoxelAccumulator::absorb(PointCloud& cloud, const PointCloud& extra) {
  const auto full = [&] {
    cloud.append(extra);
    cloud = voxel_downsample(cloud, voxel_size_);
    rebuild(cloud);
  };
  if (cloud.size() != synced_size_ || cloud.points.data() != synced_data_) rebuild(cloud);
  if (extra.empty()) {
    if (!exact_) full();
    return;
  }
  // color bookkeeping of append() differs when only one side carries colors
  if (!exact_ || cloud.empty() || cloud.has_colors() != extra.has_colors()) {
    full();
    return;
  }

  const bool colored = cloud.has_colors();
  const std::size_t old_size = cloud.size();
  std::vector<Accumulator> acc;
  std::vector<std::size_t> target;  // cloud index for each accumulator
  std::vector<std::size_t> touched(old_size, 0);  // accumulator index + 1 for old points
  std::vector<Key> fresh_keys;
  VoxelIndex fresh(extra.size());

  for (std::size_t i = 0; i < extra.size(); ++i) {
    const Vec3& p = extra.points[i];
    const Key k = key_of(p);
    std::size_t a_idx;
    if (std::size_t* slot = find(k)) {
      const std::size_t c = *slot - 1;
      if (touched[c] == 0) {
        touched[c] = acc.size() + 1;
        Accumulator a;
        a.sum += cloud.points[c];
        a.count = 1;
        if (colored) a.rgb = {cloud.colors[c].r, cloud.colors[c].g, cloud.colors[c].b};
        acc.push_back(a);
        target.push_back(c);
      }
      a_idx = touched[c] - 1;
    } else {
      bool inserted = false;
      a_idx = fresh.find_or_insert(k, acc.size(), inserted);
      if (inserted) {
        acc.emplace_back();
        target.push_back(old_size + fresh_keys.size());
        fresh_keys.push_back(k);
      }
    }
    Accumulator& a = acc[a_idx];
    a.sum += p;
    ++a.count;
    if (colored) {
      a.rgb[0] += extra.colors[i].r;
      a.rgb[1] += extra.colors[i].g;
      a.rgb[2] += extra.colors[i].b;
    }
  }

  std::vector<Vec3> centroid(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) {
    centroid[j] = acc[j].sum / static_cast<double>(acc[j].count);
    // A centroid that rounds into a neighbouring voxel would make the next
    // full pass merge differently; recompute from scratch in that case.
    const std::size_t c = target[j];
    const Key expect = c < old_size ? key_of(cloud.points[c]) : fresh_keys[c - old_size];
    if (key_of(centroid[j]) != expect) {
      full();
      return;
    }
  }
  cloud.points.resize(old_size + fresh_keys.size());
  if (colored) cloud.colors.resize(cloud.points.size());
  for (std::size_t j = 0; j < acc.size(); ++j) {
    const Accumulator& a = acc[j];
    const std::size_t c = target[j];
    cloud.points[c] = centroid[j];
    if (colored) {
      const auto avg = [&](std::uint32_t s) { return static_cast<std::uint8_t>((s + a.count / 2) / a.count); };
      cloud.colors[c] = {avg(a.rgb[0]), avg(a.rgb[1]), avg(a.rgb[2])};
    }
  }
  for (std::size_t f = 0; f < fresh_keys.size(); ++f) insert(fresh_keys[f], old_size + f);
  synced_size_ = cloud.size();
  synced_data_ = cloud.points.data();
}

}  // namespace toponav
