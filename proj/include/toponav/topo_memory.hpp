#pragma once

#include "toponav/semantic_map.hpp"
#include "toponav/vocabulary.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace toponav {

struct TopoNode {
  NodeId id = 0;
  Vec2 position = Vec2::Zero();
  std::set<ClassId> objects;
  std::string room = "unknown";
  std::size_t frontier_count = 0;
  int created_step = 0;
};

struct TopoConfig {
  double neighborhood_radius = 2.0;  ///< r_topo (m)
  double merge_distance = 1.0;       ///< d_merge (m)

  void validate() const;
};

/// Classes with an object point strictly within `radius` of `xy` (planar
/// distance).
std::set<ClassId> objects_near(const Vec2& xy, const SemanticMap& map, double radius);

/// Frontier points strictly within `radius` of `xy` (planar distance).
std::size_t frontiers_near(const Vec2& xy, const SemanticMap& map, double radius);

/// True when no obstacle point inside the vertical band
/// [z_floor, z_floor + ceiling_offset] lies within `half_width` (closed) of
/// segment a-b in the plane.
bool line_of_sight_clear(const Vec2& a, const Vec2& b, const SemanticMap& map, double half_width);

/// Planar distance from p to segment a-b.
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

class TopoGraph {
 public:
  explicit TopoGraph(TopoConfig config = {});

  const TopoConfig& config() const { return config_; }
  const std::vector<TopoNode>& nodes() const { return nodes_; }
  const std::vector<NodeId>& history() const { return history_; }
  bool empty() const { return nodes_.empty(); }

  const TopoNode* find(NodeId id) const;

  /// Follows merge redirections to the live node that absorbed `id`.
  NodeId resolve(NodeId id) const;

  /// Appends a node whose objects and frontier count are measured from
  /// `map`. Ids are issued monotonically and never reused.
  NodeId create_node(const Vec2& position, const SemanticMap& map, std::string room, int step);

  /// Merges, to a fixpoint, every pair closer than d_merge with a clear line
  /// of sight, lowest id pair first. The lower id and its room survive at the
  /// midpoint; history entries are redirected. `los_half_width` defaults to
  /// the map voxel size.
  std::vector<std::pair<NodeId, NodeId>> try_merge(const SemanticMap& map,
                                                   std::optional<double> los_half_width = std::nullopt);

  void refresh_attributes(const SemanticMap& map);

  void record_visit(NodeId id);

  /// Overrides a node's room label (room classification arrives after the
  /// node exists in some pipelines).
  void set_room(NodeId id, std::string room);

 private:
  TopoNode* find_mutable(NodeId id);

  TopoConfig config_;
  std::vector<TopoNode> nodes_;
  std::vector<NodeId> history_;
  std::map<NodeId, NodeId> redirects_;
  NodeId next_id_ = 1;
};

/// Attribute blanking applied when the graph is rendered to text.
struct TopoTextOptions {
  bool hide_frontiers = false;  ///< omit the frontiers= field
  bool hide_rooms = false;      ///< every room reads "unknown"
  bool hide_objects = false;    ///< every object list is empty
};

/// Line-oriented rendering consumed by the decision oracle:
///   NODE <id> pos=(<x>,<y>) room=<R> objects=[<a>,<b>] frontiers=<f>
///   HISTORY <id>,<id>,...
///   CURRENT <id>|none
///   TARGET <class>
/// Nodes by ascending id, coordinates with two decimals, object names sorted.
std::string serialize_text(const TopoGraph& graph, std::optional<NodeId> current, const std::string& target,
                           const ClassVocabulary& vocabulary, const TopoTextOptions& options = {});

/// Structure recovered from serialize_text output.
struct TopoText {
  struct Node {
    NodeId id = 0;
    double x = 0.0;
    double y = 0.0;
    std::string room;
    std::vector<std::string> objects;
    std::optional<std::size_t> frontiers;
    bool operator==(const Node&) const = default;
  };
  std::vector<Node> nodes;
  std::vector<NodeId> history;
  std::optional<NodeId> current;
  std::string target;
  bool operator==(const TopoText&) const = default;
};

/// Throws Error on malformed input.
TopoText parse_topo_text(const std::string& text);

}  // namespace toponav
