#pragma once

#include "toponav/point_cloud.hpp"

#include <map>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

namespace toponav {

enum class Phase { kExploration, kTargetAcquisition };

std::string_view to_string(Phase phase);

/// How candidates near obstacles are removed.
enum class SafetyMode {
  kClearance,  ///< mask when the nearest obstacle is closer than safe_distance
  kLiteral,    ///< keep only when N(d_obs) > sigma, exactly as the closeness formula reads
};

struct AffordanceConfig {
  double epsilon = 1e-6;
  double sigma = 0.25;          ///< threshold for SafetyMode::kLiteral
  double safe_distance = 0.25;  ///< clearance for SafetyMode::kClearance (m)
  double cone_half_angle = std::numbers::pi / 6.0;
  double history_spacing = 0.5;  ///< trajectory subsampling for the history set (m)
  SafetyMode safety = SafetyMode::kClearance;
  bool use_history = true;  ///< include the history-avoidance term while exploring

  void validate() const;
};

struct PhaseInputs {
  Phase phase = Phase::kExploration;
  PointCloud direction;  ///< points along the oracle's preferred heading
  PointCloud node;       ///< frontier points around the oracle's chosen node
  PointCloud history;    ///< subsampled trajectory
  PointCloud semantic;   ///< target-class points
  PointCloud frontiers;
  PointCloud obstacles;
};

struct AffordanceField {
  PointCloud candidates;
  std::vector<double> scores;
  std::vector<std::uint8_t> masked;  ///< 1 where the safety mask zeroed the score
  Phase phase = Phase::kExploration;
};

/// N(d_i) = 1 - (d_i - d_min) / (d_max - d_min + eps) where d_i is the
/// distance from candidate i to its nearest point of `set`. Throws
/// EmptyInputError for an empty set or empty candidates.
std::vector<double> normalized_affordance(std::span<const Vec3> candidates, std::span<const Vec3> set,
                                          double epsilon);

/// Same formula applied to precomputed distances.
std::vector<double> normalize_distances(std::span<const double> distances, double epsilon);

/// Navigable points whose planar bearing from `agent_xy` lies within
/// `half_angle` (closed) of heading 2*pi*heading/num_headings.
PointCloud directional_point_set(const Vec2& agent_xy, int heading, int num_headings, const PointCloud& navigable,
                                 double half_angle);

/// Phase-conditioned sum of unit-range components. Components over an empty
/// source set contribute 0.
AffordanceField compose_field(const PointCloud& candidates, const PhaseInputs& inputs,
                              const AffordanceConfig& config);

/// Zeroes scores of candidates too close to `obstacles`; no-op when the
/// obstacle cloud is empty.
void safety_mask(AffordanceField& field, const PointCloud& obstacles, const AffordanceConfig& config);

struct Waypoint {
  Vec3 point = Vec3::Zero();
  double score = 0.0;
  std::size_t index = 0;
};

class AllMaskedError : public Error {
 public:
  using Error::Error;
};

/// Unmasked candidate indices, best first: score descending, then distance
/// to `agent` ascending, then index ascending.
std::vector<std::size_t> rank_candidates(const AffordanceField& field, const Vec3& agent);

/// Best unmasked candidate under rank_candidates ordering. Throws
/// AllMaskedError when every candidate is masked.
Waypoint select_waypoint(const AffordanceField& field, const Vec3& agent);

/// TargetAcquisition iff the oracle reports the target and the target's
/// object cloud is non-empty.
Phase choose_phase(bool found, ClassId target, const std::map<ClassId, PointCloud>& objects);

/// Trajectory positions kept when at least `spacing` from the last kept one,
/// lifted to z.
PointCloud history_points(std::span<const Vec2> trajectory, double spacing, double z);

}  // namespace toponav
