#include "toponav/sim/scene.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

namespace toponav::sim {

double Box::distance_xy(const Vec2& p) const {
  const double dx = std::max({min.x() - p.x(), 0.0, p.x() - max.x()});
  const double dy = std::max({min.y() - p.y(), 0.0, p.y() - max.y()});
  return std::hypot(dx, dy);
}

void Scene::validate() const {
  if (!(x1 > x0 && y1 > y0)) throw ConfigError("scene bounds must have positive extent");
  const auto check = [&](const Box& b, const std::string& what) {
    if (!((b.max - b.min).array() > 0.0).all()) throw ConfigError(what + " box has non-positive extent");
    if (b.min.x() < x0 - 1e-9 || b.min.y() < y0 - 1e-9 || b.max.x() > x1 + 1e-9 || b.max.y() > y1 + 1e-9) {
      throw ConfigError(what + " box leaves the scene bounds");
    }
  };
  for (const auto& w : walls) check(w, "wall");
  for (const auto& o : objects) check(o.box, "object '" + o.cls + "'");
}

bool Scene::has_class(const std::string& cls) const {
  return std::any_of(objects.begin(), objects.end(), [&](const SceneObject& o) { return o.cls == cls; });
}

std::vector<std::string> Scene::class_names() const {
  std::set<std::string> names;
  for (const auto& o : objects) names.insert(o.cls);
  return {names.begin(), names.end()};
}

double Scene::clearance(const Vec2& p) const {
  double d = std::min({p.x() - x0, x1 - p.x(), p.y() - y0, y1 - p.y()});
  for (const auto& w : walls) d = std::min(d, w.distance_xy(p));
  for (const auto& o : objects) d = std::min(d, o.box.distance_xy(p));
  return d;
}

double Scene::distance_to_class(const Vec2& p, const std::string& cls) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& o : objects) {
    if (o.cls == cls) d = std::min(d, o.box.distance_xy(p));
  }
  return d;
}

bool Scene::free_at(const Vec2& p) const {
  if (p.x() <= x0 || p.x() >= x1 || p.y() <= y0 || p.y() >= y1) return false;
  for (const auto& w : walls) {
    if (w.contains_xy(p)) return false;
  }
  for (const auto& o : objects) {
    if (o.box.contains_xy(p)) return false;
  }
  return true;
}

namespace {

nlohmann::json box_json(const Box& b) {
  return {b.min.x(), b.min.y(), b.min.z(), b.max.x(), b.max.y(), b.max.z()};
}

Box box_from(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 6) throw ConfigError("box must have 6 numbers [x0,y0,z0,x1,y1,z1]");
  return {Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
}

}  // namespace

nlohmann::json scene_to_json(const Scene& s) {
  nlohmann::json j;
  j["bounds"] = {s.x0, s.y0, s.x1, s.y1};
  j["walls"] = nlohmann::json::array();
  for (const auto& w : s.walls) j["walls"].push_back(box_json(w));
  j["objects"] = nlohmann::json::array();
  for (const auto& o : s.objects) j["objects"].push_back({{"class", o.cls}, {"box", box_json(o.box)}});
  if (!s.episodes.empty()) {
    j["episodes"] = nlohmann::json::array();
    for (const auto& e : s.episodes) {
      nlohmann::json ej = {{"start", {e.start.x(), e.start.y()}}, {"yaw", e.yaw}, {"target", e.target}};
      if (e.max_steps) ej["max_steps"] = *e.max_steps;
      j["episodes"].push_back(std::move(ej));
    }
  }
  return j;
}

Scene scene_from_json(const nlohmann::json& j) {
  Scene s;
  try {
    const auto b = j.at("bounds").get<std::vector<double>>();
    if (b.size() != 4) throw ConfigError("bounds must be [x0,y0,x1,y1]");
    s.x0 = b[0];
    s.y0 = b[1];
    s.x1 = b[2];
    s.y1 = b[3];
    if (j.contains("walls")) {
      for (const auto& w : j["walls"]) s.walls.push_back(box_from(w));
    }
    if (j.contains("objects")) {
      for (const auto& o : j["objects"]) s.objects.push_back({o.at("class").get<std::string>(), box_from(o.at("box"))});
    }
    if (j.contains("episodes")) {
      for (const auto& e : j["episodes"]) {
        SceneEpisode ep;
        const auto start = e.at("start").get<std::vector<double>>();
        if (start.size() != 2) throw ConfigError("episode start must be [x,y]");
        ep.start = {start[0], start[1]};
        ep.yaw = e.value("yaw", 0.0);
        ep.target = e.at("target").get<std::string>();
        if (e.contains("max_steps")) ep.max_steps = e["max_steps"].get<int>();
        s.episodes.push_back(std::move(ep));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scene schema error: ") + e.what());
  }
  s.validate();
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open scene file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
  return scene_from_json(j);
}

void save_scene(const std::string& path, const Scene& scene) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << scene_to_json(scene).dump(2) << '\n';
}

}  // namespace toponav::sim
