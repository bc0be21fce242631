#include <doctest.h>

#include "oracles.hpp"

#include "toponav/sim/render.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace toponav;
using namespace toponav::sim;

namespace {

Scene room(double w, double h) {
  Scene s;
  s.x1 = w;
  s.y1 = h;
  return s;
}

// Floor plane and the inside exits of the bounds, computed without the
// renderer's ray setup.
double empty_room_depth(const Scene& s, const oracle::V3& o, const oracle::V3& d) {
  double t = std::numeric_limits<double>::infinity();
  if (d[2] < 0) t = std::min(t, -o[2] / d[2]);
  const double lo[2] = {s.x0, s.y0}, hi[2] = {s.x1, s.y1};
  for (int a = 0; a < 2; ++a) {
    if (d[a] > 0) t = std::min(t, (hi[a] - o[a]) / d[a]);
    if (d[a] < 0) t = std::min(t, (lo[a] - o[a]) / d[a]);
  }
  return t;
}

}  // namespace

TEST_SUITE("render") {
  TEST_CASE("center pixel sees the wall ahead") {
    const Scene s = room(4, 4);
    ClassVocabulary vocab;
    const auto k = CameraIntrinsics::from_fov(65, 65, std::numbers::pi / 2);
    const auto f = render_frame(s, vocab, Pose::camera_at({2, 2}, 0.88, 0.0), k, 10.0);
    const auto c = f.index(32, 32);
    CHECK(f.depth[c] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.labels[c] == kWallLabel);
    // bottom row hits the floor
    CHECK(f.labels[f.index(32, 64)] == kUnlabeled);
    CHECK(f.depth[f.index(32, 64)] > 0.0);
  }

  TEST_CASE("empty room agrees with the plane oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> pos(0.3, 4.7), ang(-std::numbers::pi, std::numbers::pi);
    const Scene s = room(5, 5);
    ClassVocabulary vocab;
    const auto k = CameraIntrinsics::from_fov(21, 15, 1.4);
    for (int trial = 0; trial < 20; ++trial) {
      const double x = pos(rng), y = pos(rng), yaw = ang(rng);
      const double max_depth = trial % 2 ? 3.0 : 10.0;
      const auto f = render_frame(s, vocab, Pose::camera_at({x, y}, 0.88, yaw), k, max_depth);
      const oracle::V3 fwd{std::cos(yaw), std::sin(yaw), 0}, right{std::sin(yaw), -std::cos(yaw), 0}, down{0, 0, -1};
      for (int v = 0; v < k.height; ++v) {
        for (int u = 0; u < k.width; ++u) {
          const double a = (u - k.cx) / k.fx, b = (v - k.cy) / k.fy;
          oracle::V3 d;
          for (int i = 0; i < 3; ++i) d[i] = fwd[i] + a * right[i] + b * down[i];
          const double t = empty_room_depth(s, {x, y, 0.88}, d);
          const double got = f.depth[f.index(u, v)];
          if (t > max_depth) {
            CHECK(got == 0.0);
          } else {
            CHECK(std::abs(got - t) < 1e-6);
          }
        }
      }
    }
  }

  TEST_CASE("boxes occlude and carry labels") {
    Scene s = room(4, 4);
    s.objects.push_back({"bed", {{2.5, 1.5, 0}, {3, 2.5, 2}}});
    s.walls.push_back({{3.5, 0, 0}, {3.6, 4, 2.5}});
    ClassVocabulary vocab({"bed"});
    const auto k = CameraIntrinsics::from_fov(65, 65, std::numbers::pi / 2);
    const auto f = render_frame(s, vocab, Pose::camera_at({2, 2}, 0.88, 0.0), k, 10.0);
    const auto c = f.index(32, 32);
    CHECK(f.depth[c] == doctest::Approx(0.5));
    CHECK(f.labels[c] == vocab.id("bed"));
    // looking away: the interior wall is irrelevant, bounds at 2 m
    const auto g = render_frame(s, vocab, Pose::camera_at({2, 2}, 0.88, std::numbers::pi), k, 10.0);
    CHECK(g.depth[c] == doctest::Approx(2.0));
    CHECK(g.labels[c] == kWallLabel);
  }

  TEST_CASE("slab intersection against the oracle") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 2000; ++trial) {
      Box b;
      for (int a = 0; a < 3; ++a) {
        const double p = u(rng), q = u(rng);
        b.min[a] = std::min(p, q);
        b.max[a] = std::max(p, q) + 0.01;
      }
      const Vec3 o(u(rng) * 2, u(rng) * 2, u(rng) * 2);
      Vec3 d(u(rng), u(rng), u(rng));
      if (trial % 7 == 0) d.z() = 0;
      const auto got = intersect_box(b, o, d);
      const auto want = oracle::slab({b.min.x(), b.min.y(), b.min.z()}, {b.max.x(), b.max.y(), b.max.z()},
                                     {o.x(), o.y(), o.z()}, {d.x(), d.y(), d.z()});
      REQUIRE(got.has_value() == want.has_value());
      if (got) CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
    }
  }

  TEST_CASE("serial and parallel renders agree") {
    Scene s = room(6, 4);
    s.objects.push_back({"sofa", {{1, 1, 0}, {2, 1.8, 0.9}}});
    s.walls.push_back({{3, 0, 0}, {3.1, 2.5, 2.5}});
    ClassVocabulary vocab({"sofa"});
    const auto k = CameraIntrinsics::from_fov(48, 32, 1.5);
    for (double yaw : {0.0, 1.0, 2.5, -2.0}) {
      const auto pose = Pose::camera_at({4.5, 3}, 0.88, yaw);
      const auto a = render_frame(s, vocab, pose, k, 10.0);
      const auto b = render_frame_serial(s, vocab, pose, k, 10.0);
      CHECK(a.depth == b.depth);
      CHECK(a.labels == b.labels);
      // determinism across calls
      CHECK(render_frame(s, vocab, pose, k, 10.0).depth == a.depth);
    }
  }

  TEST_CASE("panorama headings and invalid poses") {
    Scene s = room(4, 4);
    s.objects.push_back({"bed", {{0.5, 0.5, 0}, {1.5, 1.5, 0.6}}});
    ClassVocabulary vocab({"bed"});
    RenderConfig cfg;
    cfg.width = cfg.height = 16;
    const auto pano = render_panorama(s, vocab, {3, 3}, cfg, 8);
    REQUIRE(pano.size() == 8);
    for (int h = 0; h < 8; ++h) {
      CHECK(pano[static_cast<std::size_t>(h)].heading_index == h);
      CHECK(wrap_angle(pano[static_cast<std::size_t>(h)].pose.yaw() - 2 * std::numbers::pi * h / 8) ==
            doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(render_panorama(s, vocab, {1, 1}, cfg, 8), GeometryError);
    CHECK_THROWS_AS(render_panorama(s, vocab, {5, 1}, cfg, 8), GeometryError);
    CHECK_THROWS_AS(render_panorama(s, vocab, {3, 3}, cfg, 0), ConfigError);
  }

  TEST_CASE("frame summaries") {
    Scene s = room(4, 4);
    s.objects.push_back({"bed", {{3, 1.8, 0}, {3.5, 2.2, 1}}});
    ClassVocabulary vocab({"bed", "sofa"});
    const auto k = CameraIntrinsics::from_fov(33, 33, std::numbers::pi / 2);
    const auto f = render_frame(s, vocab, Pose::camera_at({1, 2}, 0.88, 0.0), k, 10.0, 3);
    const auto sum = summarize_frame(f, vocab, 10.0);
    CHECK(sum.heading == 3);
    CHECK(sum.classes == std::vector<std::string>{"bed"});
    CHECK(sum.free_depth > 0.0);
    CHECK(sum.free_depth <= 3.0 + 1e-9);
    // facing away the bed drops out and the horizon is farther than the bed
    const auto back = summarize_frame(render_frame(s, vocab, Pose::camera_at({3.8, 2}, 0.88, 0.0), k, 10.0), vocab,
                                      10.0, 0.05);
    CHECK(back.classes.empty());

    // all-invalid frame reads as max depth
    LabeledFrame blank;
    blank.intrinsics = k;
    blank.resize();
    CHECK(summarize_frame(blank, vocab, 7.0).free_depth == doctest::Approx(7.0));
  }

  TEST_CASE("class colors are stable") {
    CHECK(class_color("bed") == class_color("bed"));
    CHECK_FALSE(class_color("bed") == class_color("toilet"));
  }
}
