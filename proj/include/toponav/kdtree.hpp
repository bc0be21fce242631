#pragma once

#include "toponav/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace toponav {

/// Static 3-d tree over a borrowed point array. The points must outlive the
/// tree.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points);

  bool empty() const { return order_.empty(); }

  struct Neighbor {
    std::size_t index = 0;
    double squared_distance = 0.0;
  };

  /// Nearest stored point to `query`; ties resolve to the lowest index.
  Neighbor nearest(const Vec3& query) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int axis = -1;  ///< -1 for leaves
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end, int depth);
  void search(std::size_t node, const Vec3& query, Neighbor& best) const;

  std::span<const Vec3> points_;
  std::vector<std::size_t> order_;
  std::vector<Vec3> packed_;  ///< points in `order_` sequence, for leaf scans
  std::vector<Node> nodes_;
};

}  // namespace toponav
