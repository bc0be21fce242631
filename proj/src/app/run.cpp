#include "toponav/app/app.hpp"

#include "toponav/remote_oracle.hpp"
#include "toponav/sim/procedural.hpp"

#include <glob.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace toponav::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.3.0";

const char* safety_name(SafetyMode m) { return m == SafetyMode::kLiteral ? "literal" : "clearance"; }

SafetyMode parse_safety(const std::string& s) {
  if (s == "clearance") return SafetyMode::kClearance;
  if (s == "literal") return SafetyMode::kLiteral;
  throw ConfigError("unknown safety mode: " + s);
}

template <typename T>
void take(const json& j, const char* key, T& v) {
  if (j.contains(key)) v = j.at(key).get<T>();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

std::string safe_name(std::string s) {
  for (auto& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
  }
  return s;
}

std::string field_csv(const AffordanceField& f) {
  std::ostringstream os;
  os << "x,y,z,score,masked\n";
  for (std::size_t i = 0; i < f.candidates.size(); ++i) {
    const auto& p = f.candidates.points[i];
    os << sim::format_metric(p.x()) << ',' << sim::format_metric(p.y()) << ',' << sim::format_metric(p.z()) << ','
       << sim::format_metric(f.scores[i]) << ',' << static_cast<int>(f.masked[i]) << '\n';
  }
  return os.str();
}

}  // namespace

json components_to_json(const sim::ComponentConfig& cc) {
  json nav = json::array();
  for (const auto& n : cc.nav_class_names) nav.push_back(n);
  json rooms = json::object();
  for (const auto& [cls, room] : cc.rooms) rooms[cls] = room;
  return {
      {"map",
       {{"voxel_size", cc.map.voxel_size},
        {"floor_tolerance", cc.map.floor_tolerance},
        {"interp_step", cc.map.interp_step},
        {"grid_resolution", cc.map.grid_resolution},
        {"ceiling_offset", cc.map.ceiling_offset}}},
      {"topo", {{"neighborhood_radius", cc.topo.neighborhood_radius}, {"merge_distance", cc.topo.merge_distance}}},
      {"affordance",
       {{"epsilon", cc.affordance.epsilon},
        {"sigma", cc.affordance.sigma},
        {"safe_distance", cc.affordance.safe_distance},
        {"cone_half_angle", cc.affordance.cone_half_angle},
        {"history_spacing", cc.affordance.history_spacing},
        {"safety", safety_name(cc.affordance.safety)},
        {"use_history", cc.affordance.use_history}}},
      {"render",
       {{"width", cc.render.width},
        {"height", cc.render.height},
        {"horizontal_fov", cc.render.horizontal_fov},
        {"camera_height", cc.render.camera_height},
        {"max_depth", cc.render.max_depth}}},
      {"agent",
       {{"agent_radius", cc.agent_radius},
        {"inflation", cc.inflation},
        {"move_step", cc.move_step},
        {"max_replans", cc.max_replans},
        {"frontier_retire_radius", cc.frontier_retire_radius}}},
      {"oracle_mode", std::string(sim::to_string(cc.oracle_mode))},
      {"ablations",
       {{"disable_frontier_attr", cc.ablations.disable_frontier_attr},
        {"disable_room_attr", cc.ablations.disable_room_attr},
        {"disable_object_attr", cc.ablations.disable_object_attr}}},
      {"nav_classes", nav},
      {"rooms", rooms},
  };
}

void apply_components_json(sim::ComponentConfig& cc, const json& j) {
  try {
    if (j.contains("map")) {
      const auto& m = j.at("map");
      take(m, "voxel_size", cc.map.voxel_size);
      take(m, "floor_tolerance", cc.map.floor_tolerance);
      take(m, "interp_step", cc.map.interp_step);
      take(m, "grid_resolution", cc.map.grid_resolution);
      take(m, "ceiling_offset", cc.map.ceiling_offset);
    }
    if (j.contains("topo")) {
      take(j.at("topo"), "neighborhood_radius", cc.topo.neighborhood_radius);
      take(j.at("topo"), "merge_distance", cc.topo.merge_distance);
    }
    if (j.contains("affordance")) {
      const auto& a = j.at("affordance");
      take(a, "epsilon", cc.affordance.epsilon);
      take(a, "sigma", cc.affordance.sigma);
      take(a, "safe_distance", cc.affordance.safe_distance);
      take(a, "cone_half_angle", cc.affordance.cone_half_angle);
      take(a, "history_spacing", cc.affordance.history_spacing);
      take(a, "use_history", cc.affordance.use_history);
      if (a.contains("safety")) cc.affordance.safety = parse_safety(a.at("safety").get<std::string>());
    }
    if (j.contains("render")) {
      const auto& r = j.at("render");
      take(r, "width", cc.render.width);
      take(r, "height", cc.render.height);
      take(r, "horizontal_fov", cc.render.horizontal_fov);
      take(r, "camera_height", cc.render.camera_height);
      take(r, "max_depth", cc.render.max_depth);
    }
    if (j.contains("agent")) {
      const auto& a = j.at("agent");
      take(a, "agent_radius", cc.agent_radius);
      take(a, "inflation", cc.inflation);
      take(a, "move_step", cc.move_step);
      take(a, "max_replans", cc.max_replans);
      take(a, "frontier_retire_radius", cc.frontier_retire_radius);
    }
    if (j.contains("oracle_mode")) cc.oracle_mode = sim::parse_oracle_mode(j.at("oracle_mode").get<std::string>());
    if (j.contains("ablations")) {
      const auto& a = j.at("ablations");
      take(a, "disable_frontier_attr", cc.ablations.disable_frontier_attr);
      take(a, "disable_room_attr", cc.ablations.disable_room_attr);
      take(a, "disable_object_attr", cc.ablations.disable_object_attr);
    }
    if (j.contains("nav_classes")) cc.nav_class_names = j.at("nav_classes").get<std::vector<std::string>>();
    if (j.contains("rooms")) {
      cc.rooms.clear();
      for (const auto& [cls, room] : j.at("rooms").items()) cc.rooms[cls] = room.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad component config: ") + e.what());
  }
}

sim::ComponentConfig resolve_components(const RunOptions& o) {
  sim::ComponentConfig cc;
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    if (!is) throw ConfigError("cannot read config " + o.config_path);
    json j;
    try {
      is >> j;
    } catch (const json::exception& e) {
      throw ConfigError("cannot parse config " + o.config_path + ": " + e.what());
    }
    // a run manifest is accepted as a config
    apply_components_json(cc, j.contains("components") ? j.at("components") : j);
  }
  if (!o.rooms_path.empty()) cc.rooms = load_room_table(o.rooms_path);
  cc.oracle_mode = sim::parse_oracle_mode(o.oracle);
  for (const auto& a : o.ablate) {
    if (a == "disable_frontier_attr") {
      cc.ablations.disable_frontier_attr = true;
    } else if (a == "disable_room_attr") {
      cc.ablations.disable_room_attr = true;
    } else if (a == "disable_object_attr") {
      cc.ablations.disable_object_attr = true;
    } else if (a == "disable_history") {
      cc.affordance.use_history = false;
    } else {
      throw ConfigError("unknown ablation: " + a);
    }
  }
  cc.validate();
  return cc;
}

std::string default_label(const RunOptions& o) {
  std::string label = o.oracle;
  auto ablate = o.ablate;
  std::sort(ablate.begin(), ablate.end());
  for (const auto& a : ablate) label += "+" + a;
  return label;
}

std::vector<BatchEpisode> collect_episodes(const RunOptions& o) {
  std::vector<BatchEpisode> out;
  for (const auto& pattern : o.scene_patterns) {
    auto paths = expand_glob(pattern);
    if (paths.empty()) throw Error("no scene file matches " + pattern);
    for (const auto& path : paths) {
      const sim::Scene scene = sim::load_scene(path);
      if (scene.episodes.empty()) throw ConfigError("scene has no episodes: " + path);
      const auto n = std::min<std::size_t>(scene.episodes.size(), static_cast<std::size_t>(std::max(o.episodes, 0)));
      for (std::size_t k = 0; k < n; ++k) {
        const auto& e = scene.episodes[k];
        BatchEpisode b;
        b.source = path;
        b.spec.scene = scene;
        b.spec.start = e.start;
        b.spec.start_yaw = e.yaw;
        b.spec.target = e.target;
        if (e.max_steps) b.spec.max_steps = *e.max_steps;
        b.spec.seed = o.seed;
        b.spec.name = fs::path(path).stem().string() + "_" + std::to_string(k);
        out.push_back(std::move(b));
      }
    }
  }
  if (o.procedural > 0) {
    sim::ProceduralOptions po;
    if (o.max_steps) po.max_steps = *o.max_steps;
    if (o.success_distance) po.success_distance = *o.success_distance;
    for (auto& spec : sim::generate_batch(o.seed, o.procedural, po)) out.push_back({std::move(spec), "procedural"});
  }
  for (auto& b : out) {
    if (o.max_steps) b.spec.max_steps = *o.max_steps;
    if (o.success_distance) b.spec.success_distance = *o.success_distance;
  }
  if (out.empty()) throw ConfigError("no episodes selected");
  return out;
}

BatchResult run_batch(const RunOptions& o) {
  BatchResult batch;
  const sim::ComponentConfig cc = resolve_components(o);
  batch.label = o.label.empty() ? default_label(o) : o.label;
  batch.episodes = collect_episodes(o);
  const auto n = batch.episodes.size();
  batch.results.resize(n);
  batch.logs.resize(n);
  std::vector<std::vector<std::pair<int, std::string>>> fields(n);
  std::vector<std::string> errors(n);

  const RemoteOracleConfig remote_cfg = RemoteOracleConfig::from_env();
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      std::unique_ptr<DecisionOracle> oracle;
      if (cc.oracle_mode == sim::OracleMode::kRemote) {
        oracle = std::make_unique<RemoteOracle>(remote_cfg);
      } else {
        oracle = std::make_unique<ScriptedOracle>();
      }
      std::ostringstream log;
      sim::EpisodeHooks hooks;
      hooks.log = &log;
      if (o.dump_fields) {
        hooks.on_field = [&fields, k](int step, const AffordanceField& f) { fields[k].emplace_back(step, field_csv(f)); };
      }
      batch.results[k] = sim::run_episode(batch.episodes[k].spec, cc, *oracle, hooks);
      batch.logs[k] = log.str();
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!errors[k].empty()) throw Error("episode " + batch.episodes[k].spec.name + ": " + errors[k]);
  }
  batch.metrics = sim::compute_metrics(batch.results);

  json eps = json::array();
  for (const auto& b : batch.episodes) {
    eps.push_back({{"name", b.spec.name},
                   {"source", b.source},
                   {"target", b.spec.target},
                   {"start", {b.spec.start.x(), b.spec.start.y()}},
                   {"yaw", b.spec.start_yaw},
                   {"max_steps", b.spec.max_steps},
                   {"success_distance", b.spec.success_distance},
                   {"num_headings", b.spec.num_headings}});
  }
  batch.manifest = {{"version", kVersion},
                    {"command_line", o.command_line},
                    {"label", batch.label},
                    {"seed", o.seed},
                    {"scenes", o.scene_patterns},
                    {"episodes_per_scene", o.episodes},
                    {"procedural", o.procedural},
                    {"oracle", o.oracle},
                    {"ablate", o.ablate},
                    {"components", components_to_json(cc)},
                    {"episode_specs", eps}};
  if (o.dump_fields) {
    json dumped = json::array();
    for (std::size_t k = 0; k < n; ++k) {
      for (auto& [step, csv] : fields[k]) {
        std::string file = "fields/" + safe_name(batch.episodes[k].spec.name) + "_step" + std::to_string(step) + ".csv";
        dumped.push_back(file);
        batch.fields.emplace_back(std::move(file), std::move(csv));
      }
    }
    batch.manifest["fields"] = std::move(dumped);
  }
  return batch;
}

void write_batch(const BatchResult& batch, const RunOptions& o) {
  const fs::path out(o.out_dir);
  fs::create_directories(out / "logs");
  const auto open = [](const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write " + p.string());
    return os;
  };
  {
    auto os = open(out / "metrics.csv");
    sim::write_metrics_header(os);
    sim::write_metrics_row(os, batch.label, batch.metrics);
  }
  {
    auto os = open(out / "episodes.csv");
    os << "name,source,target,success,steps,path_length,shortest_length,dtg\n";
    for (std::size_t k = 0; k < batch.results.size(); ++k) {
      const auto& r = batch.results[k];
      os << batch.episodes[k].spec.name << ',' << batch.episodes[k].source << ',' << batch.episodes[k].spec.target
         << ',' << (r.success ? 1 : 0) << ',' << r.steps << ',' << sim::format_metric(r.path_length) << ','
         << sim::format_metric(r.shortest_length) << ',' << sim::format_metric(r.dtg) << '\n';
    }
  }
  for (std::size_t k = 0; k < batch.logs.size(); ++k) {
    auto os = open(out / "logs" / (safe_name(batch.episodes[k].spec.name) + ".jsonl"));
    os << batch.logs[k];
  }
  if (!batch.fields.empty()) fs::create_directories(out / "fields");
  for (const auto& [file, csv] : batch.fields) {
    auto os = open(out / file);
    os << csv;
  }
  auto os = open(out / "manifest.json");
  os << batch.manifest.dump(2) << '\n';
}

int run_command(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.out_dir.empty()) throw ConfigError("--out is required");
    const BatchResult batch = run_batch(o);
    write_batch(batch, o);
    out << batch.label << ": " << batch.metrics.episodes << " episodes, SR " << sim::format_metric(batch.metrics.sr)
        << ", SPL " << sim::format_metric(batch.metrics.spl) << ", DTG " << sim::format_metric(batch.metrics.dtg)
        << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "toponav run: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace toponav::app
