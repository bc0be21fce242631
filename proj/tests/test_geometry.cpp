#include <doctest.h>

#include "oracles.hpp"
#include "suites.hpp"

#include "toponav/geometry.hpp"

#include <cmath>
#include <numbers>

using namespace toponav;

TEST_SUITE("geometry") {
  TEST_CASE("principal ray is the optical axis") {
    CameraIntrinsics k{100, 100, 50, 50, 100, 100};
    const Vec3 p = backproject_pixel(50, 50, 2, k, 10);
    CHECK(p.isApprox(Vec3(0, 0, 2)));
  }

  TEST_CASE("off-axis pixel matches the explicit inverse") {
    CameraIntrinsics k{100, 100, 50, 50, 200, 100};
    const Vec3 p = backproject_pixel(150, 50, 1, k, 10);
    const auto ref = oracle::backproject(150, 50, 1, 100, 100, 50, 50);
    CHECK(p.x() == doctest::Approx(ref[0]).epsilon(1e-12));
    CHECK(p.y() == doctest::Approx(ref[1]).epsilon(1e-12));
    CHECK(p.z() == doctest::Approx(ref[2]).epsilon(1e-12));
    CHECK(p.isApprox(Vec3(1, 0, 1)));
  }

  TEST_CASE("identity intrinsics") {
    CameraIntrinsics k{1, 1, 0, 0, 1, 1};
    CHECK(backproject_pixel(0, 0, 1, k, 10) == Vec3(0, 0, 1));
  }

  TEST_CASE("invalid depth and pixels are rejected") {
    CameraIntrinsics k{100, 100, 50, 50, 100, 100};
    CHECK_THROWS_AS(backproject_pixel(1, 1, 0.0, k, 10), InvalidDepthError);
    CHECK_THROWS_AS(backproject_pixel(1, 1, -1.0, k, 10), InvalidDepthError);
    CHECK_THROWS_AS(backproject_pixel(1, 1, std::nan(""), k, 10), InvalidDepthError);
    CHECK_THROWS_AS(backproject_pixel(1, 1, 10.5, k, 10), InvalidDepthError);
    CHECK_THROWS_AS(backproject_pixel(100, 1, 1.0, k, 10), OutOfBoundsError);
  }

  TEST_CASE("rigid transform examples") {
    Pose id;
    CHECK(camera_to_world(Vec3(1, 2, 3), id) == Vec3(1, 2, 3));

    Pose rz;
    rz.orientation = Eigen::Quaterniond(Eigen::AngleAxisd(std::numbers::pi / 2, Vec3::UnitZ()));
    const Vec3 got = camera_to_world(Vec3(1, 0, 0), rz);
    const double h = std::sqrt(0.5);
    const auto ref = oracle::rigid({h, 0, 0, h}, {0, 0, 0}, {1, 0, 0});
    CHECK(got.x() == doctest::Approx(ref[0]));
    CHECK(got.y() == doctest::Approx(ref[1]));
    CHECK(got.isApprox(Vec3(0, 1, 0), 1e-12));

    Pose t;
    t.orientation = Eigen::Quaterniond(0.3, -0.5, 0.1, 0.8).normalized();
    t.position = {4, 5, 6};
    CHECK(camera_to_world(Vec3::Zero(), t) == Vec3(4, 5, 6));
  }

  TEST_CASE("non-unit quaternion fails validation") {
    Pose p;
    p.orientation = Eigen::Quaterniond(1.0, 0.1, 0, 0);
    CHECK_THROWS_AS(p.validate(), ConfigError);
  }

  TEST_CASE("intrinsics validation") {
    CameraIntrinsics k{100, 100, 50, 50, 100, 100};
    CHECK_NOTHROW(k.validate());
    k.cx = 100;
    CHECK_THROWS_AS(k.validate(), ConfigError);
    k = {0, 100, 50, 50, 100, 100};
    CHECK_THROWS_AS(k.validate(), ConfigError);
  }

  TEST_CASE("level camera looks along its yaw") {
    for (double yaw : {0.0, 0.7, -2.0, 3.0}) {
      const Pose p = Pose::camera_at({1, 2}, 0.88, yaw);
      CHECK(p.yaw() == doctest::Approx(wrap_angle(yaw)));
      CHECK(p.position.z() == 0.88);
      // image "down" points at the floor
      CHECK((p.orientation * Vec3::UnitY()).z() == doctest::Approx(-1.0));
    }
  }

  TEST_CASE("wrap_angle range") {
    CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(wrap_angle(5 * std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 2));
  }

  TEST_CASE("randomized geometry against scalar oracles") {
    const auto r = suites::geometry(2000, 11);
    INFO(r.first_failure);
    CHECK(r.ok());
  }
}
