#include "toponav/sim/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <utility>

namespace toponav::sim {

GroundTruth::GroundTruth(const Scene& scene, double resolution, double agent_radius)
    : scene_(scene), resolution_(resolution) {
  nx_ = static_cast<int>(std::ceil((scene.x1 - scene.x0) / resolution));
  ny_ = static_cast<int>(std::ceil((scene.y1 - scene.y0) / resolution));
  blocked_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
  for (int i = 0; i < nx_; ++i) {
    for (int j = 0; j < ny_; ++j) {
      const Vec2 c(scene.x0 + (i + 0.5) * resolution, scene.y0 + (j + 0.5) * resolution);
      blocked_[static_cast<std::size_t>(i) * ny_ + j] = !scene.free_at(c) || scene.clearance(c) < agent_radius;
    }
  }
}

double GroundTruth::shortest_path_length(const Vec2& start, const std::string& cls, double success_distance) const {
  const double inf = std::numeric_limits<double>::infinity();
  if (scene_.distance_to_class(start, cls) <= success_distance) return 0.0;
  const int si = std::clamp(static_cast<int>(std::floor((start.x() - scene_.x0) / resolution_)), 0, nx_ - 1);
  const int sj = std::clamp(static_cast<int>(std::floor((start.y() - scene_.y0) / resolution_)), 0, ny_ - 1);
  const auto idx = [&](int i, int j) { return static_cast<std::size_t>(i) * ny_ + j; };
  const auto center = [&](int i, int j) {
    return Vec2(scene_.x0 + (i + 0.5) * resolution_, scene_.y0 + (j + 0.5) * resolution_);
  };
  const auto open_cell = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < nx_ && j < ny_ && (!blocked_[idx(i, j)] || (i == si && j == sj));
  };

  std::vector<double> dist(blocked_.size(), inf);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  const double d0 = (start - center(si, sj)).norm();
  dist[idx(si, sj)] = d0;
  pq.emplace(d0, idx(si, sj));
  static constexpr int kDi[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const double diag = std::numbers::sqrt2 * resolution_;

  while (!pq.empty()) {
    const auto [d, c] = pq.top();
    pq.pop();
    if (d > dist[c]) continue;
    const int i = static_cast<int>(c / ny_), j = static_cast<int>(c % ny_);
    if (!blocked_[c] && scene_.distance_to_class(center(i, j), cls) <= success_distance) return d;
    for (int k = 0; k < 8; ++k) {
      const int ni = i + kDi[k], nj = j + kDj[k];
      if (!open_cell(ni, nj)) continue;
      if (k >= 4 && (!open_cell(i + kDi[k], j) || !open_cell(i, j + kDj[k]))) continue;
      const double nd = d + (k >= 4 ? diag : resolution_);
      if (nd < dist[idx(ni, nj)]) {
        dist[idx(ni, nj)] = nd;
        pq.emplace(nd, idx(ni, nj));
      }
    }
  }
  return inf;
}

}  // namespace toponav::sim
