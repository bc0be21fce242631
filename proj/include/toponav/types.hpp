#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace toponav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

using ClassId = std::int32_t;
using NodeId = std::int64_t;

/// Pixel carries no semantic class (floor, free space).
inline constexpr ClassId kUnlabeled = -1;
/// Pixel belongs to structural geometry (walls, scene bounds).
inline constexpr ClassId kWallLabel = -2;

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDepthError : public Error {
 public:
  using Error::Error;
};

class OutOfBoundsError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

class UnknownIdError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace toponav
