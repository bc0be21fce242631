#include "toponav/topo_memory.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <sstream>

namespace toponav {

void TopoConfig::validate() const {
  if (!(neighborhood_radius > 0.0 && merge_distance > 0.0)) {
    throw ConfigError("topological radii must be positive");
  }
  if (merge_distance > 2.0 * neighborhood_radius) {
    throw ConfigError("merge distance must not exceed twice the node radius");
  }
}

std::set<ClassId> objects_near(const Vec2& xy, const SemanticMap& map, double radius) {
  const double r2 = radius * radius;
  std::set<ClassId> out;
  for (const auto& [cls, cloud] : map.objects) {
    for (const auto& p : cloud.points) {
      if ((p.head<2>() - xy).squaredNorm() < r2) {
        out.insert(cls);
        break;
      }
    }
  }
  return out;
}

std::size_t frontiers_near(const Vec2& xy, const SemanticMap& map, double radius) {
  const double r2 = radius * radius;
  return static_cast<std::size_t>(std::count_if(map.frontiers.points.begin(), map.frontiers.points.end(),
                                                [&](const Vec3& p) { return (p.head<2>() - xy).squaredNorm() < r2; }));
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool line_of_sight_clear(const Vec2& a, const Vec2& b, const SemanticMap& map, double half_width) {
  const double z_lo = map.floor();
  const double z_hi = z_lo + map.config.ceiling_offset;
  const Vec2 lo = a.cwiseMin(b).array() - half_width;
  const Vec2 hi = a.cwiseMax(b).array() + half_width;
  for (const auto& p : map.obstacles.points) {
    if (p.z() < z_lo || p.z() > z_hi) continue;
    if (p.x() < lo.x() || p.y() < lo.y() || p.x() > hi.x() || p.y() > hi.y()) continue;
    if (point_segment_distance(p.head<2>(), a, b) <= half_width) return false;
  }
  return true;
}

TopoGraph::TopoGraph(TopoConfig config) : config_(config) { config_.validate(); }

const TopoNode* TopoGraph::find(NodeId id) const {
  auto it = std::find_if(nodes_.begin(), nodes_.end(), [id](const TopoNode& n) { return n.id == id; });
  return it == nodes_.end() ? nullptr : &*it;
}

TopoNode* TopoGraph::find_mutable(NodeId id) {
  return const_cast<TopoNode*>(std::as_const(*this).find(id));
}

NodeId TopoGraph::resolve(NodeId id) const {
  for (auto it = redirects_.find(id); it != redirects_.end(); it = redirects_.find(id)) id = it->second;
  return id;
}

NodeId TopoGraph::create_node(const Vec2& position, const SemanticMap& map, std::string room, int step) {
  TopoNode node;
  node.id = next_id_++;
  node.position = position;
  node.objects = objects_near(position, map, config_.neighborhood_radius);
  node.room = room.empty() ? std::string("unknown") : std::move(room);
  node.frontier_count = frontiers_near(position, map, config_.neighborhood_radius);
  node.created_step = step;
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

std::vector<std::pair<NodeId, NodeId>> TopoGraph::try_merge(const SemanticMap& map,
                                                            std::optional<double> los_half_width) {
  const double width = los_half_width.value_or(map.config.voxel_size);
  const double d2 = config_.merge_distance * config_.merge_distance;
  std::vector<std::pair<NodeId, NodeId>> merged;

  for (;;) {
    // nodes_ stays sorted by id: ids are issued increasingly and merges only erase
    std::optional<std::pair<std::size_t, std::size_t>> pick;
    for (std::size_t a = 0; a < nodes_.size() && !pick; ++a) {
      for (std::size_t b = a + 1; b < nodes_.size(); ++b) {
        if ((nodes_[a].position - nodes_[b].position).squaredNorm() >= d2) continue;
        if (!line_of_sight_clear(nodes_[a].position, nodes_[b].position, map, width)) continue;
        pick = {a, b};
        break;
      }
    }
    if (!pick) break;

    TopoNode& kept = nodes_[pick->first];
    const NodeId absorbed = nodes_[pick->second].id;
    kept.position = 0.5 * (kept.position + nodes_[pick->second].position);
    kept.objects = objects_near(kept.position, map, config_.neighborhood_radius);
    kept.frontier_count = frontiers_near(kept.position, map, config_.neighborhood_radius);
    const NodeId kept_id = kept.id;
    nodes_.erase(nodes_.begin() + static_cast<std::ptrdiff_t>(pick->second));

    redirects_[absorbed] = kept_id;
    std::replace(history_.begin(), history_.end(), absorbed, kept_id);
    merged.emplace_back(kept_id, absorbed);
  }
  return merged;
}

void TopoGraph::refresh_attributes(const SemanticMap& map) {
  for (auto& node : nodes_) {
    node.objects = objects_near(node.position, map, config_.neighborhood_radius);
    node.frontier_count = frontiers_near(node.position, map, config_.neighborhood_radius);
  }
}

void TopoGraph::record_visit(NodeId id) {
  if (!find(id)) throw UnknownIdError("no topological node with id " + std::to_string(id));
  history_.push_back(id);
}

void TopoGraph::set_room(NodeId id, std::string room) {
  TopoNode* node = find_mutable(id);
  if (!node) throw UnknownIdError("no topological node with id " + std::to_string(id));
  node->room = room.empty() ? std::string("unknown") : std::move(room);
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

template <typename Range>
std::string join_ids(const Range& ids) {
  std::string out;
  for (const auto id : ids) {
    if (!out.empty()) out += ',';
    out += std::to_string(id);
  }
  return out;
}

}  // namespace

std::string serialize_text(const TopoGraph& graph, std::optional<NodeId> current, const std::string& target,
                           const ClassVocabulary& vocabulary, const TopoTextOptions& options) {
  std::vector<const TopoNode*> ordered;
  for (const auto& n : graph.nodes()) ordered.push_back(&n);
  std::sort(ordered.begin(), ordered.end(), [](const TopoNode* a, const TopoNode* b) { return a->id < b->id; });

  std::ostringstream os;
  for (const TopoNode* n : ordered) {
    std::vector<std::string> names;
    if (!options.hide_objects) {
      for (const ClassId c : n->objects) names.push_back(vocabulary.name(c));
      std::sort(names.begin(), names.end());
    }
    os << "NODE " << n->id << " pos=(" << fixed2(n->position.x()) << ',' << fixed2(n->position.y()) << ')'
       << " room=" << (options.hide_rooms ? std::string("unknown") : n->room) << " objects=[";
    for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
    os << ']';
    if (!options.hide_frontiers) os << " frontiers=" << n->frontier_count;
    os << '\n';
  }
  const std::string history = join_ids(graph.history());
  os << "HISTORY" << (history.empty() ? "" : " ") << history << '\n';
  os << "CURRENT " << (current ? std::to_string(*current) : std::string("none")) << '\n';
  os << "TARGET " << target << '\n';
  return os.str();
}

TopoText parse_topo_text(const std::string& text) {
  static const std::regex node_re(
      R"(^NODE (-?\d+) pos=\((-?\d+\.\d+),(-?\d+\.\d+)\) room=(\S+) objects=\[([^\]\s]*)\]( frontiers=(\d+))?$)");
  TopoText out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  bool have_history = false, have_current = false, have_target = false;
  const auto fail = [&](const std::string& why) {
    throw Error("topo text line " + std::to_string(line_no) + ": " + why);
  };
  const auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::smatch m;
    if (line.rfind("NODE ", 0) == 0) {
      if (!std::regex_match(line, m, node_re)) fail("malformed NODE");
      TopoText::Node node;
      node.id = std::stoll(m[1]);
      node.x = std::stod(m[2]);
      node.y = std::stod(m[3]);
      node.room = m[4];
      if (m[5].length() > 0) node.objects = split(m[5]);
      if (m[6].matched) node.frontiers = std::stoull(m[7]);
      out.nodes.push_back(std::move(node));
    } else if (line == "HISTORY" || line.rfind("HISTORY ", 0) == 0) {
      have_history = true;
      if (line.size() > 8) {
        for (const auto& id : split(line.substr(8))) {
          try {
            out.history.push_back(std::stoll(id));
          } catch (const std::exception&) {
            fail("bad history id '" + id + "'");
          }
        }
      }
    } else if (line.rfind("CURRENT ", 0) == 0) {
      have_current = true;
      const std::string v = line.substr(8);
      if (v != "none") {
        try {
          out.current = std::stoll(v);
        } catch (const std::exception&) {
          fail("bad current id");
        }
      }
    } else if (line.rfind("TARGET ", 0) == 0) {
      have_target = true;
      out.target = line.substr(7);
    } else {
      fail("unrecognized line");
    }
  }
  if (!have_history || !have_current || !have_target) throw Error("topo text is missing HISTORY/CURRENT/TARGET");
  return out;
}

}  // namespace toponav
