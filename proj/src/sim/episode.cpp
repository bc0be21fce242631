#include "toponav/sim/episode.hpp"

#include "toponav/sim/ground_truth.hpp"
#include "toponav/sim/planner.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace toponav::sim {

std::string_view to_string(OracleMode mode) {
  switch (mode) {
    case OracleMode::kScripted: return "scripted";
    case OracleMode::kRemote: return "remote";
    case OracleMode::kVlmOnly: return "vlm-only";
    case OracleMode::kDetectorOnly: return "detector-only";
  }
  return "scripted";
}

OracleMode parse_oracle_mode(std::string_view name) {
  if (name == "scripted") return OracleMode::kScripted;
  if (name == "remote") return OracleMode::kRemote;
  if (name == "vlm-only") return OracleMode::kVlmOnly;
  if (name == "detector-only") return OracleMode::kDetectorOnly;
  throw ConfigError("unknown oracle mode: " + std::string(name));
}

void EpisodeSpec::validate() const {
  scene.validate();
  if (target.empty()) throw ConfigError("episode target is empty");
  if (!(success_distance > 0.0)) throw ConfigError("success_distance must be positive");
  if (max_steps < 0) throw ConfigError("max_steps must be non-negative");
  if (num_headings <= 0) throw ConfigError("num_headings must be positive");
  if (!scene.free_at(start)) throw GeometryError("episode start is not in free space");
}

void ComponentConfig::validate() const {
  map.validate();
  topo.validate();
  affordance.validate();
  if (!(agent_radius >= 0.0) || !(inflation >= 0.0)) throw ConfigError("radii must be non-negative");
  if (!(move_step > 0.0)) throw ConfigError("move_step must be positive");
  if (max_replans <= 0) throw ConfigError("max_replans must be positive");
  if (render.width <= 0 || render.height <= 0) throw ConfigError("render size must be positive");
}

double ComponentConfig::retire_radius() const {
  if (frontier_retire_radius >= 0.0) return frontier_retire_radius;
  const CameraIntrinsics k = render.intrinsics();
  const double half_v = std::atan2(render.height / 2.0, k.fy);
  return render.camera_height / std::tan(half_v);
}

namespace {

using nlohmann::json;

double round4(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;  // no -0
}

json xy_json(const Vec2& p) { return json::array({round4(p.x()), round4(p.y())}); }

double planar_distance_to(const Vec2& p, const PointCloud& cloud) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& q : cloud.points) best = std::min(best, (q.head<2>() - p).norm());
  return best;
}

int max_free_depth_heading(const std::vector<HeadingSummary>& panorama) {
  int best = 0;
  for (std::size_t k = 1; k < panorama.size(); ++k) {
    if (panorama[k].free_depth > panorama[best].free_depth) best = static_cast<int>(k);
  }
  return best;
}

// S_node: frontier points around the chosen node; a dead or unknown id falls
// back to the node with the most frontiers.
PointCloud node_frontiers(const TopoGraph& graph, NodeId requested, const SemanticMap& map) {
  const TopoNode* node = graph.find(graph.resolve(requested));
  if (node == nullptr) {
    for (const auto& n : graph.nodes()) {
      if (node == nullptr || n.frontier_count > node->frontier_count) node = &n;
    }
  }
  PointCloud out;
  if (node == nullptr) return out;
  const double r = graph.config().neighborhood_radius;
  for (const auto& f : map.frontiers.points) {
    if ((f.head<2>() - node->position).norm() < r) out.push_back(f);
  }
  return out;
}

struct Walk {
  std::vector<Vec2> positions;  // executed teleport positions, excluding the start
  double length = 0.0;
  bool guarded = false;
  bool arrived = false;
};

// Teleports along the polyline in fixed increments. A step is refused when
// it would leave free space or end closer than the agent radius to true
// geometry (unless it does not reduce the current clearance). The walk ends
// early once `arrived` holds.
Walk execute_path(const Scene& scene, const std::vector<Vec2>& polyline, double step, double radius,
                  const std::function<bool(const Vec2&)>& arrived) {
  Walk w;
  if (polyline.size() < 2) return w;
  Vec2 cur = polyline.front();
  double cur_clear = scene.clearance(cur);
  double carried = 0.0;  // arc length since the last teleport
  Vec2 last_stop = cur;
  const auto try_move = [&](const Vec2& next, double arc) {
    const double c = scene.clearance(next);
    if (!scene.free_at(next) || (c < radius && c < cur_clear)) {
      w.guarded = true;
      return false;
    }
    w.positions.push_back(next);
    w.length += arc;
    cur_clear = c;
    last_stop = next;
    if (arrived && arrived(next)) {
      w.arrived = true;
      return false;
    }
    return true;
  };
  for (std::size_t s = 0; s + 1 < polyline.size(); ++s) {
    const Vec2 a = polyline[s];
    const Vec2 b = polyline[s + 1];
    const double seg = (b - a).norm();
    if (seg <= 0.0) continue;
    double t = 0.0;
    while (carried + (seg - t) >= step) {
      t += step - carried;
      const Vec2 next = a + (b - a) * (t / seg);
      if (!try_move(next, step)) return w;
      carried = 0.0;
    }
    carried += seg - t;
  }
  if (carried > 1e-9 && (polyline.back() - last_stop).norm() > 1e-9) try_move(polyline.back(), carried);
  return w;
}

}  // namespace

EpisodeResult run_episode(const EpisodeSpec& spec, const ComponentConfig& cc, DecisionOracle& oracle,
                          const EpisodeHooks& hooks) {
  spec.validate();
  cc.validate();

  EpisodeResult result;
  GroundTruth truth(spec.scene, cc.map.grid_resolution / 2.0, cc.agent_radius);
  result.shortest_length = truth.shortest_path_length(spec.start, spec.target, spec.success_distance);

  ClassVocabulary vocab(spec.scene.class_names());
  const ClassId target_id = vocab.add(spec.target);
  SemanticMap map;
  map.config = cc.map;
  map.config.max_depth = cc.render.max_depth;
  map.config.camera_height = cc.render.camera_height;
  for (const auto& n : cc.nav_class_names) {
    if (const auto id = vocab.find(n)) map.config.nav_classes.insert(*id);
  }
  TopoGraph graph(cc.topo);

  AgentPose pose{spec.start, spec.start_yaw};
  result.trajectory.push_back(pose);
  std::vector<Vec2> visited{spec.start};
  std::vector<Vec2> stands;  // panorama positions

  for (int cycle = 0;; ++cycle) {
    if (result.steps >= spec.max_steps) {
      result.events.push_back("budget exhausted");
      break;
    }
    json rec;
    rec["step"] = cycle;
    std::vector<std::string> cycle_events;

    const auto frames = render_panorama(spec.scene, vocab, pose.position, cc.render, spec.num_headings);
    integrate_panorama(map, frames, pose.position);
    stands.push_back(pose.position);
    map.frontiers = drop_frontiers_near(map.frontiers, stands, cc.retire_radius());
    const double sector = std::numbers::pi / spec.num_headings;
    std::vector<HeadingSummary> summaries;
    summaries.reserve(frames.size());
    for (const auto& f : frames) summaries.push_back(summarize_frame(f, vocab, cc.render.max_depth, sector));

    const std::string room = classify_room(summaries, cc.rooms);
    const NodeId created = graph.create_node(pose.position, map, room, result.steps);
    const auto merges = graph.try_merge(map);
    const NodeId current = graph.resolve(created);
    graph.refresh_attributes(map);
    graph.record_visit(current);
    result.visits.push_back(current);

    OracleRequest request;
    request.topo_text = serialize_text(graph, current, spec.target, vocab, cc.ablations.text_options());
    request.target = spec.target;
    request.panorama = summaries;
    request.history = graph.history();
    OracleDecision decision = oracle.decide(request);

    const auto obj_it = map.objects.find(target_id);
    const bool detected = obj_it != map.objects.end() && !obj_it->second.empty();
    Phase phase;
    switch (cc.oracle_mode) {
      case OracleMode::kVlmOnly:
        phase = decision.found ? Phase::kTargetAcquisition : Phase::kExploration;
        break;
      case OracleMode::kDetectorOnly:
        decision.found = detected;
        decision.direction = max_free_depth_heading(summaries);
        phase = choose_phase(decision.found, target_id, map.objects);
        break;
      default:
        phase = choose_phase(decision.found, target_id, map.objects);
        break;
    }
    // vlm-only may claim the target before any detection; acquisition then
    // has no semantic set and is driven by direction alone.

    rec["pose"] = json::array({round4(pose.position.x()), round4(pose.position.y()), round4(pose.yaw)});
    rec["phase"] = std::string(to_string(phase));
    rec["decision"] = {{"next_node", decision.next_node}, {"direction", decision.direction},
                       {"found", decision.found ? 1 : 0}};
    rec["node"] = current;
    rec["node_count"] = graph.nodes().size();
    rec["frontier_count"] = map.frontiers.size();
    rec["history"] = graph.history();
    json nodes = json::array();
    for (const auto& n : graph.nodes()) {
      nodes.push_back({{"id", n.id}, {"pos", xy_json(n.position)}, {"room", n.room}, {"frontiers", n.frontier_count}});
    }
    rec["nodes"] = std::move(nodes);
    json merged = json::array();
    for (const auto& [kept, absorbed] : merges) merged.push_back(json::array({kept, absorbed}));
    rec["merges"] = std::move(merged);
    json fr = json::array();
    for (const auto& f : map.frontiers.points) fr.push_back(xy_json(f.head<2>()));
    rec["frontiers"] = std::move(fr);

    const auto finish_record = [&](json wp, json path) {
      rec["waypoint"] = std::move(wp);
      rec["path"] = std::move(path);
      rec["events"] = cycle_events;
      for (auto& e : cycle_events) result.events.push_back("step " + std::to_string(cycle) + ": " + e);
      if (hooks.log != nullptr) *hooks.log << rec.dump() << '\n';
    };

    if (phase == Phase::kTargetAcquisition && detected &&
        planar_distance_to(pose.position, obj_it->second) <= spec.success_distance) {
      result.success = spec.scene.distance_to_class(pose.position, spec.target) <= spec.success_distance;
      cycle_events.push_back("stop");
      finish_record(nullptr, json::array());
      break;
    }

    PhaseInputs in;
    in.phase = phase;
    in.direction = directional_point_set(pose.position, decision.direction, spec.num_headings, map.navigable,
                                         cc.affordance.cone_half_angle);
    if (phase == Phase::kExploration) {
      in.node = node_frontiers(graph, decision.next_node, map);
      in.history = history_points(visited, cc.affordance.history_spacing, map.floor());
      in.frontiers = map.frontiers;
    } else if (detected) {
      in.semantic = obj_it->second;
    }
    in.obstacles = map.obstacles;

    AffordanceField field = compose_field(map.navigable, in, cc.affordance);
    safety_mask(field, map.obstacles, cc.affordance);
    if (hooks.on_field) hooks.on_field(cycle, field);

    const Vec3 agent3(pose.position.x(), pose.position.y(), map.floor());
    const auto ranked = rank_candidates(field, agent3);
    const GridPlanner planner(map.grid, cc.inflation);
    // waypoints closer than one motion step are not actionable
    const auto actionable = [&](const Vec2& p) {
      return (p - pose.position).norm() >= cc.move_step && planner.goal_admissible(p);
    };
    std::optional<PlannedPath> path;
    std::optional<Vec3> waypoint;
    int failures = 0;
    for (std::size_t r = 0; r < ranked.size() && !path && failures < cc.max_replans; ++r) {
      const Vec3& c = field.candidates.points[ranked[r]];
      if (!actionable(c.head<2>())) continue;
      path = planner.plan(pose.position, c.head<2>());
      if (path) {
        waypoint = c;
      } else {
        cycle_events.push_back("replan");
        ++failures;
      }
    }
    if (!path) {
      // nearest reachable frontier
      std::vector<std::size_t> order(map.frontiers.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return (map.frontiers.points[a].head<2>() - pose.position).norm() <
               (map.frontiers.points[b].head<2>() - pose.position).norm();
      });
      failures = 0;
      for (std::size_t r = 0; r < order.size() && !path && failures < cc.max_replans; ++r) {
        const Vec3& fp = map.frontiers.points[order[r]];
        const GridIndex g = map.grid.cell_of(fp.x(), fp.y());
        const Vec2 f = map.grid.cell_center(g.i, g.j);
        if (!actionable(f)) continue;
        path = planner.plan(pose.position, f);
        if (path) {
          waypoint = Vec3(f.x(), f.y(), map.floor());
        } else {
          ++failures;
        }
      }
      if (path) cycle_events.push_back("frontier fallback");
    }
    if (!path) {
      cycle_events.push_back("stuck");
      finish_record(nullptr, json::array());
      break;
    }

    std::function<bool(const Vec2&)> arrived;
    if (phase == Phase::kTargetAcquisition && detected) {
      const PointCloud& target_cloud = obj_it->second;
      arrived = [&](const Vec2& p) { return planar_distance_to(p, target_cloud) <= spec.success_distance; };
    }
    const Walk walk = execute_path(spec.scene, path->points, cc.move_step, cc.agent_radius, arrived);
    if (walk.guarded) cycle_events.push_back("guard");
    json path_json = json::array();
    path_json.push_back(xy_json(pose.position));
    Vec2 prev = pose.position;
    for (const auto& q : walk.positions) {
      if ((q - prev).norm() > 1e-12) pose.yaw = std::atan2(q.y() - prev.y(), q.x() - prev.x());
      prev = q;
      pose.position = q;
      result.trajectory.push_back(pose);
      visited.push_back(q);
      path_json.push_back(xy_json(q));
    }
    result.path_length += walk.length;
    ++result.steps;
    finish_record(json::array({round4(waypoint->x()), round4(waypoint->y()), round4(waypoint->z())}),
                  std::move(path_json));
  }

  result.dtg = spec.scene.distance_to_class(pose.position, spec.target);
  return result;
}

}  // namespace toponav::sim
