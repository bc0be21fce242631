#include "toponav/sim/procedural.hpp"

#include "toponav/sim/ground_truth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace toponav::sim {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

namespace {

constexpr double kWallThickness = 0.1;
constexpr double kWallHeight = 2.5;
constexpr double kDoorWidth = 1.0;

struct Rect {
  double x0, y0, x1, y1;
};

struct RoomType {
  const char* name;
  std::array<const char*, 3> classes;
};

constexpr std::array<RoomType, 5> kRoomTypes{{
    {"bedroom", {"bed", "wardrobe", "nightstand"}},
    {"kitchen", {"oven", "fridge", "sink"}},
    {"living_room", {"sofa", "tv", "fireplace"}},
    {"bathroom", {"toilet", "bathtub", "shower"}},
    {"office", {"desk", "bookshelf", "chair"}},
}};

Box wall_box(double x0, double y0, double x1, double y1) {
  return {Vec3(x0, y0, 0.0), Vec3(x1, y1, kWallHeight)};
}

// Vertical wall at x spanning [y0, y1] with a doorway centered at door_y.
void add_vertical_wall(Scene& s, double x, double y0, double y1, double door_y, std::vector<Vec2>& doors) {
  const double h = kWallThickness / 2.0;
  const double d0 = door_y - kDoorWidth / 2.0, d1 = door_y + kDoorWidth / 2.0;
  if (d0 > y0) s.walls.push_back(wall_box(x - h, y0, x + h, d0));
  if (d1 < y1) s.walls.push_back(wall_box(x - h, d1, x + h, y1));
  doors.emplace_back(x, door_y);
}

void add_horizontal_wall(Scene& s, double y, double x0, double x1, double door_x, std::vector<Vec2>& doors) {
  const double h = kWallThickness / 2.0;
  const double d0 = door_x - kDoorWidth / 2.0, d1 = door_x + kDoorWidth / 2.0;
  if (d0 > x0) s.walls.push_back(wall_box(x0, y - h, d0, y + h));
  if (d1 < x1) s.walls.push_back(wall_box(d1, y - h, x1, y + h));
  doors.emplace_back(door_x, y);
}

bool overlaps(const Box& a, const Box& b, double margin) {
  return a.min.x() - margin < b.max.x() && b.min.x() - margin < a.max.x() && a.min.y() - margin < b.max.y() &&
         b.min.y() - margin < a.max.y();
}

void furnish(Scene& s, std::mt19937_64& rng, const Rect& room, const RoomType& type,
             const std::vector<Vec2>& doors) {
  const int count = uniform_int(rng, 1, 2);
  for (int k = 0; k < count; ++k) {
    const char* cls = type.classes[static_cast<std::size_t>(uniform_int(rng, 0, 2))];
    for (int attempt = 0; attempt < 30; ++attempt) {
      const double w = uniform(rng, 0.4, 0.9), d = uniform(rng, 0.4, 0.9), h = uniform(rng, 0.5, 1.0);
      const double margin = 0.7;  // keeps a walkable ring around every object
      if (room.x1 - room.x0 < w + 2 * margin || room.y1 - room.y0 < d + 2 * margin) break;
      const double x = uniform(rng, room.x0 + margin, room.x1 - margin - w);
      const double y = uniform(rng, room.y0 + margin, room.y1 - margin - d);
      const Box box{Vec3(x, y, 0.0), Vec3(x + w, y + d, h)};
      bool ok = true;
      for (const auto& o : s.objects) ok = ok && !overlaps(o.box, box, 0.8);
      for (const auto& door : doors) ok = ok && box.distance_xy(door) > 1.0;
      if (ok) {
        s.objects.push_back({cls, box});
        break;
      }
    }
  }
}

}  // namespace

Scene generate_scene(std::mt19937_64& rng) {
  Scene s;
  const double W = uniform(rng, 7.0, 10.0);
  const double H = uniform(rng, 4.5, 7.0);
  s.x0 = 0.0;
  s.y0 = 0.0;
  s.x1 = W;
  s.y1 = H;

  std::vector<Rect> rooms;
  std::vector<Vec2> doors;
  const int layout = uniform_int(rng, 0, 2);
  const double xs = uniform(rng, 0.4, 0.6) * W;
  const double h = kWallThickness / 2.0;
  if (layout == 0) {
    add_vertical_wall(s, xs, 0.0, H, uniform(rng, 1.0, H - 1.0), doors);
    rooms = {{0.0, 0.0, xs - h, H}, {xs + h, 0.0, W, H}};
  } else {
    const double ys = uniform(rng, 0.4, 0.6) * H;
    add_vertical_wall(s, xs, 0.0, H, uniform(rng, 1.0, H - 1.0), doors);
    add_horizontal_wall(s, ys, xs + h, W, uniform(rng, xs + 1.0, W - 1.0), doors);
    rooms = {{0.0, 0.0, xs - h, H}, {xs + h, 0.0, W, ys - h}, {xs + h, ys + h, W, H}};
    if (layout == 2) {
      add_horizontal_wall(s, ys, 0.0, xs - h, uniform(rng, 1.0, xs - 1.0), doors);
      rooms = {{0.0, 0.0, xs - h, ys - h}, {0.0, ys + h, xs - h, H}, rooms[1], rooms[2]};
    }
  }

  std::array<std::size_t, kRoomTypes.size()> order{};
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::swap(order[i], order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(i)))]);
  }
  for (std::size_t r = 0; r < rooms.size(); ++r) furnish(s, rng, rooms[r], kRoomTypes[order[r]], doors);
  s.validate();
  return s;
}

std::vector<EpisodeSpec> generate_batch(std::uint64_t seed, int count, const ProceduralOptions& options) {
  std::vector<EpisodeSpec> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int index = 0; index < count; ++index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 200) throw Error("procedural generator could not place an episode");
      Scene scene = generate_scene(rng);
      if (scene.objects.empty()) continue;
      const auto& target_obj = scene.objects[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<int>(scene.objects.size()) - 1))];
      EpisodeSpec spec;
      spec.target = target_obj.cls;
      spec.max_steps = options.max_steps;
      spec.success_distance = options.success_distance;
      spec.num_headings = options.num_headings;
      spec.seed = seed;
      spec.name = "proc_" + std::to_string(index);
      bool placed = false;
      for (int tries = 0; tries < 100 && !placed; ++tries) {
        const Vec2 p(uniform(rng, scene.x0 + 0.5, scene.x1 - 0.5), uniform(rng, scene.y0 + 0.5, scene.y1 - 0.5));
        if (!scene.free_at(p) || scene.clearance(p) < options.min_start_clearance) continue;
        // start away from the goal so the episode needs some search
        if (scene.distance_to_class(p, spec.target) < 2.5 * options.success_distance) continue;
        spec.start = p;
        spec.start_yaw = uniform(rng, -3.14159, 3.14159);
        placed = true;
      }
      if (!placed) continue;
      spec.scene = std::move(scene);
      GroundTruth truth(spec.scene, 0.05, 0.15);
      if (!std::isfinite(truth.shortest_path_length(spec.start, spec.target, spec.success_distance))) continue;
      out.push_back(std::move(spec));
      break;
    }
  }
  return out;
}

}  // namespace toponav::sim
