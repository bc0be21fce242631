#pragma once

#include "toponav/affordance.hpp"
#include "toponav/oracle.hpp"
#include "toponav/semantic_map.hpp"
#include "toponav/sim/render.hpp"
#include "toponav/sim/scene.hpp"
#include "toponav/topo_memory.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace toponav::sim {

enum class OracleMode {
  kScripted,      ///< scripted decisions, detector-confirmed phase
  kRemote,        ///< caller supplies a remote oracle
  kVlmOnly,       ///< phase follows g_found alone
  kDetectorOnly,  ///< g_found := target in the object map, direction := max free depth
};

std::string_view to_string(OracleMode mode);
/// Accepts scripted, remote, vlm-only, detector-only. Throws ConfigError.
OracleMode parse_oracle_mode(std::string_view name);

struct Ablations {
  bool disable_frontier_attr = false;
  bool disable_room_attr = false;
  bool disable_object_attr = false;

  TopoTextOptions text_options() const {
    return {disable_frontier_attr, disable_room_attr, disable_object_attr};
  }
};

struct EpisodeSpec {
  Scene scene;
  Vec2 start = Vec2::Zero();
  double start_yaw = 0.0;
  std::string target;
  int max_steps = 40;
  double success_distance = 1.0;
  int num_headings = 12;
  std::uint64_t seed = 0;
  std::string name;

  /// Throws ConfigError.
  void validate() const;
};

struct ComponentConfig {
  MapConfig map;
  TopoConfig topo;
  AffordanceConfig affordance;
  RenderConfig render;
  RoomTable rooms = default_room_table();
  std::vector<std::string> nav_class_names = {"ramp", "stairs"};
  OracleMode oracle_mode = OracleMode::kScripted;
  Ablations ablations;

  double agent_radius = 0.15;  ///< executor refuses steps closer than this to true geometry
  double inflation = 0.25;     ///< planner obstacle inflation (m)
  double move_step = 0.25;     ///< teleport increment along planned paths (m)
  int max_replans = 24;        ///< ranked candidates tried before frontier fallback
  /// Frontiers closer than this to a panorama stop are retired; negative
  /// means the camera's blind floor radius, height / tan(vertical fov / 2).
  double frontier_retire_radius = -1.0;

  double retire_radius() const;

  void validate() const;
};

struct AgentPose {
  Vec2 position = Vec2::Zero();
  double yaw = 0.0;
};

struct EpisodeResult {
  bool success = false;
  double path_length = 0.0;      ///< p (m)
  double shortest_length = 0.0;  ///< l (m); infinity when unreachable
  double dtg = 0.0;              ///< final distance to the nearest target instance (m)
  int steps = 0;                 ///< executed waypoint steps
  std::vector<AgentPose> trajectory;
  std::vector<std::string> events;
  std::vector<NodeId> visits;  ///< current node per decision cycle
};

struct EpisodeHooks {
  /// JSON-lines trajectory log, one record per decision cycle.
  std::ostream* log = nullptr;
  /// Called with each composed and masked field before waypoint selection.
  std::function<void(int step, const AffordanceField& field)> on_field;
};

EpisodeResult run_episode(const EpisodeSpec& spec, const ComponentConfig& components, DecisionOracle& oracle,
                          const EpisodeHooks& hooks = {});

}  // namespace toponav::sim
