#include <doctest.h>

#include "oracles.hpp"
#include "suites.hpp"

#include "toponav/affordance.hpp"

#include <cmath>
#include <numbers>

using namespace toponav;

namespace {

PointCloud line_cloud(std::initializer_list<double> xs) {
  PointCloud c;
  for (double x : xs) c.push_back({x, 0, 0});
  return c;
}

}  // namespace

TEST_SUITE("affordance") {
  TEST_CASE("normalization endpoints") {
    const std::vector<double> d{2, 4, 6};
    const auto n = normalize_distances(d, 1e-6);
    CHECK(n[0] == 1.0);
    CHECK(n[1] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(n[2] == doctest::Approx(2.5e-7).epsilon(1e-3));
    CHECK(n[2] == doctest::Approx(1e-6 / (4 + 1e-6)));

    const std::vector<double> same{3, 3, 3};
    for (double v : normalize_distances(same, 1e-6)) CHECK(v == 1.0);
    CHECK_THROWS_AS(normalize_distances(std::vector<double>{}, 1e-6), EmptyInputError);
  }

  TEST_CASE("normalized affordance uses nearest distances") {
    const auto cand = line_cloud({0, 1, 2, 3});
    const auto set = line_cloud({0});
    const auto n = normalized_affordance(cand.points, set.points, 1e-6);
    const auto ref = oracle::normalized(oracle::nearest({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}}, {{0, 0, 0}}), 1e-6);
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(n[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK_THROWS_AS(normalized_affordance(cand.points, {}, 1e-6), EmptyInputError);
  }

  TEST_CASE("directional cone") {
    PointCloud nav;
    nav.push_back({1, 0, 0});   // east
    nav.push_back({0, 1, 0});   // north
    nav.push_back({-1, 0, 0});  // west
    const auto east = directional_point_set({0, 0}, 0, 12, nav, std::numbers::pi / 6);
    REQUIRE(east.size() == 1);
    CHECK(east.points[0] == Vec3(1, 0, 0));
    CHECK(directional_point_set({0, 0}, 0, 12, nav, std::numbers::pi).size() == 3);
    CHECK_THROWS_AS(directional_point_set({0, 0}, 12, 12, nav, 0.5), OutOfBoundsError);

    // grid of points against a brute-force bearing check
    PointCloud grid;
    for (int i = -5; i <= 5; ++i) {
      for (int j = -5; j <= 5; ++j) {
        if (i || j) grid.push_back({i * 0.5, j * 0.5, 0});
      }
    }
    for (int h = 0; h < 12; ++h) {
      const auto got = directional_point_set({0.1, -0.2}, h, 12, grid, 0.4);
      std::size_t want = 0;
      const double heading = 2 * std::numbers::pi * h / 12;
      for (const auto& p : grid.points) {
        double diff = std::atan2(p.y() + 0.2, p.x() - 0.1) - heading;
        while (diff > std::numbers::pi) diff -= 2 * std::numbers::pi;
        while (diff <= -std::numbers::pi) diff += 2 * std::numbers::pi;
        want += std::abs(diff) <= 0.4;
      }
      CHECK(got.size() == want);
    }
  }

  TEST_CASE("empty sets contribute nothing") {
    const auto cand = line_cloud({0, 1, 2});
    PhaseInputs in;
    in.frontiers = line_cloud({0});
    const auto f = compose_field(cand, in, AffordanceConfig{});
    // only the frontier term: 1, ~0.5, ~0
    CHECK(f.scores[0] == doctest::Approx(1.0));
    CHECK(f.scores[1] == doctest::Approx(0.5));
    CHECK(f.scores[2] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK_THROWS_AS(compose_field(PointCloud{}, in, AffordanceConfig{}), EmptyInputError);
  }

  TEST_CASE("acquisition scores the semantic set") {
    const auto cand = line_cloud({0, 1, 2});
    PhaseInputs in;
    in.phase = Phase::kTargetAcquisition;
    in.semantic = line_cloud({2.2});
    in.frontiers = line_cloud({0});  // ignored in this phase
    const auto f = compose_field(cand, in, AffordanceConfig{});
    CHECK(f.scores[2] == 1.0);
    CHECK(f.scores[0] < f.scores[1]);
  }

  TEST_CASE("hand-built five-candidate field") {
    // candidates on the x axis, each set a single point
    const auto cand = line_cloud({0, 1, 2, 3, 4});
    PhaseInputs in;
    in.direction = line_cloud({4});
    in.node = line_cloud({2});
    in.frontiers = line_cloud({0});
    in.history = line_cloud({1});
    const double e = 1e-6;
    const auto f = compose_field(cand, in, AffordanceConfig{e});
    // distances by hand: dir {4,3,2,1,0}, node {2,1,0,1,2}, front {0,1,2,3,4}, hist {1,0,1,2,3}
    const double dir[] = {4, 3, 2, 1, 0}, node[] = {2, 1, 0, 1, 2}, fr[] = {0, 1, 2, 3, 4}, hi[] = {1, 0, 1, 2, 3};
    for (int i = 0; i < 5; ++i) {
      const double want = (1 - dir[i] / (4 + e)) + (1 - node[i] / (2 + e)) + (1 - fr[i] / (4 + e)) + (hi[i] / (3 + e));
      CHECK(f.scores[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-12));
    }
    // disabling history removes exactly that term
    AffordanceConfig no_hist{e};
    no_hist.use_history = false;
    const auto g = compose_field(cand, in, no_hist);
    for (int i = 0; i < 5; ++i) {
      CHECK(f.scores[static_cast<std::size_t>(i)] - g.scores[static_cast<std::size_t>(i)] ==
            doctest::Approx(hi[i] / (3 + e)));
    }
  }

  TEST_CASE("clearance mask") {
    PointCloud cand;
    cand.push_back({0.05, 0, 0});
    cand.push_back({3, 0, 0});
    PhaseInputs in;
    in.frontiers = cand;
    auto f = compose_field(cand, in, AffordanceConfig{});
    const auto before = f.scores;
    PointCloud wall;
    wall.push_back({0, 0, 0.5});
    wall.push_back({0, 0, 0});
    safety_mask(f, wall, AffordanceConfig{});
    CHECK(f.masked[0] == 1);
    CHECK(f.scores[0] == 0.0);
    CHECK(f.masked[1] == 0);
    CHECK(f.scores[1] == before[1]);

    auto g = compose_field(cand, in, AffordanceConfig{});
    safety_mask(g, PointCloud{}, AffordanceConfig{});
    CHECK(g.scores == before);
  }

  TEST_CASE("literal mask reading keeps points near obstacles") {
    const auto cand = line_cloud({0.1, 1, 5});
    PhaseInputs in;
    in.frontiers = cand;
    AffordanceConfig cfg;
    cfg.safety = SafetyMode::kLiteral;
    auto f = compose_field(cand, in, cfg);
    safety_mask(f, line_cloud({0}), cfg);
    // closeness N: 1, ~0.8, 0 -> only the far point fails N > sigma
    CHECK(f.masked == std::vector<std::uint8_t>{0, 0, 1});
  }

  TEST_CASE("waypoint selection") {
    AffordanceField f;
    f.candidates = line_cloud({0});
    f.scores = {0.3};
    f.masked = {0};
    CHECK(select_waypoint(f, Vec3::Zero()).index == 0);

    f.candidates = line_cloud({0, 1});
    f.scores = {1.7, 2.3};
    f.masked = {0, 0};
    CHECK(select_waypoint(f, Vec3::Zero()).index == 1);

    // ties: nearer to the agent, then lower index
    f.candidates = line_cloud({5, 1, -1});
    f.scores = {2.0, 2.0, 2.0};
    f.masked = {0, 0, 0};
    CHECK(select_waypoint(f, Vec3::Zero()).index == 1);
    CHECK(rank_candidates(f, Vec3::Zero()) == std::vector<std::size_t>{1, 2, 0});

    f.masked = {1, 1, 1};
    CHECK_THROWS_AS(select_waypoint(f, Vec3::Zero()), AllMaskedError);
    CHECK(rank_candidates(f, Vec3::Zero()).empty());
  }

  TEST_CASE("phase rule") {
    std::map<ClassId, PointCloud> objects;
    objects[1] = line_cloud({0});
    CHECK(choose_phase(true, 1, objects) == Phase::kTargetAcquisition);
    CHECK(choose_phase(true, 2, objects) == Phase::kExploration);
    CHECK(choose_phase(false, 1, objects) == Phase::kExploration);
    objects[2] = {};
    CHECK(choose_phase(true, 2, objects) == Phase::kExploration);
  }

  TEST_CASE("history subsampling") {
    std::vector<Vec2> traj{{0, 0}, {0.2, 0}, {0.6, 0}, {0.7, 0}, {1.2, 0}};
    const auto h = history_points(traj, 0.5, 0.1);
    REQUIRE(h.size() == 3);
    CHECK(h.points[1] == Vec3(0.6, 0, 0.1));
    CHECK(h.points[2] == Vec3(1.2, 0, 0.1));
  }

  TEST_CASE("config validation") {
    AffordanceConfig c;
    CHECK_NOTHROW(c.validate());
    c.epsilon = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.cone_half_angle = 4.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("randomized fields against the quadratic oracle") {
    const auto r = suites::affordance(200, 31);
    INFO(r.first_failure);
    CHECK(r.ok());
  }
}
