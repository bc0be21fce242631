#include "toponav/affordance.hpp"

#include "toponav/geometry.hpp"
#include "toponav/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace toponav {

std::string_view to_string(Phase phase) {
  return phase == Phase::kExploration ? "exploration" : "acquisition";
}

void AffordanceConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(sigma >= 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in [0, 1)");
  if (!(cone_half_angle > 0.0 && cone_half_angle < std::numbers::pi + 1e-12)) {
    throw ConfigError("cone half-angle must lie in (0, pi]");
  }
  if (!(safe_distance >= 0.0 && history_spacing > 0.0)) throw ConfigError("invalid affordance distances");
}

std::vector<double> normalize_distances(std::span<const double> d, double epsilon) {
  if (d.empty()) throw EmptyInputError("no candidates to normalize");
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double d_min = *lo;
  const double denom = *hi - d_min + epsilon;
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = 1.0 - (d[i] - d_min) / denom;
  return out;
}

std::vector<double> normalized_affordance(std::span<const Vec3> candidates, std::span<const Vec3> set,
                                          double epsilon) {
  if (candidates.empty()) throw EmptyInputError("no candidates");
  if (set.empty()) throw EmptyInputError("empty affordance source set");
  const auto d = kernels::nearest_distances(candidates, set);
  return normalize_distances(d, epsilon);
}

PointCloud directional_point_set(const Vec2& agent_xy, int heading, int num_headings, const PointCloud& navigable,
                                 double half_angle) {
  if (num_headings <= 0 || heading < 0 || heading >= num_headings) {
    throw OutOfBoundsError("heading index out of range");
  }
  const double target = 2.0 * std::numbers::pi * heading / num_headings;
  PointCloud out;
  for (const auto& p : navigable.points) {
    const double bearing = std::atan2(p.y() - agent_xy.y(), p.x() - agent_xy.x());
    if (std::abs(wrap_angle(bearing - target)) <= half_angle) out.push_back(p);
  }
  return out;
}

namespace {

void accumulate(std::vector<double>& total, std::span<const Vec3> candidates, const PointCloud& set,
                double epsilon, bool inverted) {
  if (set.empty()) return;  // neutral contribution
  const auto n = normalized_affordance(candidates, set.points, epsilon);
  for (std::size_t i = 0; i < total.size(); ++i) total[i] += inverted ? 1.0 - n[i] : n[i];
}

}  // namespace

AffordanceField compose_field(const PointCloud& candidates, const PhaseInputs& in, const AffordanceConfig& cfg) {
  if (candidates.empty()) throw EmptyInputError("no navigable candidates");
  AffordanceField field;
  field.candidates = candidates;
  field.phase = in.phase;
  field.scores.assign(candidates.size(), 0.0);
  field.masked.assign(candidates.size(), 0);

  const auto pts = std::span<const Vec3>(candidates.points);
  accumulate(field.scores, pts, in.direction, cfg.epsilon, false);
  if (in.phase == Phase::kExploration) {
    accumulate(field.scores, pts, in.node, cfg.epsilon, false);
    accumulate(field.scores, pts, in.frontiers, cfg.epsilon, false);
    if (cfg.use_history) accumulate(field.scores, pts, in.history, cfg.epsilon, true);
  } else {
    accumulate(field.scores, pts, in.semantic, cfg.epsilon, false);
  }
  return field;
}

void safety_mask(AffordanceField& field, const PointCloud& obstacles, const AffordanceConfig& cfg) {
  if (obstacles.empty() || field.candidates.empty()) return;
  const auto d = kernels::nearest_distances(field.candidates.points, obstacles.points);
  std::vector<std::uint8_t> drop(d.size(), 0);
  if (cfg.safety == SafetyMode::kClearance) {
    for (std::size_t i = 0; i < d.size(); ++i) drop[i] = d[i] < cfg.safe_distance;
  } else {
    const auto closeness = normalize_distances(d, cfg.epsilon);
    for (std::size_t i = 0; i < d.size(); ++i) drop[i] = !(closeness[i] > cfg.sigma);
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (drop[i]) {
      field.masked[i] = 1;
      field.scores[i] = 0.0;
    }
  }
}

std::vector<std::size_t> rank_candidates(const AffordanceField& field, const Vec3& agent) {
  std::vector<std::size_t> idx;
  std::vector<double> dist(field.candidates.size());
  for (std::size_t i = 0; i < field.candidates.size(); ++i) {
    if (field.masked[i]) continue;
    idx.push_back(i);
    dist[i] = (field.candidates.points[i] - agent).squaredNorm();
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (field.scores[a] != field.scores[b]) return field.scores[a] > field.scores[b];
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return a < b;
  });
  return idx;
}

Waypoint select_waypoint(const AffordanceField& field, const Vec3& agent) {
  std::optional<std::size_t> best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < field.candidates.size(); ++i) {
    if (field.masked[i]) continue;
    const double d = (field.candidates.points[i] - agent).squaredNorm();
    if (!best || field.scores[i] > field.scores[*best] ||
        (field.scores[i] == field.scores[*best] && d < best_d)) {
      best = i;
      best_d = d;
    }
  }
  if (!best) throw AllMaskedError("every waypoint candidate is masked");
  return {field.candidates.points[*best], field.scores[*best], *best};
}

Phase choose_phase(bool found, ClassId target, const std::map<ClassId, PointCloud>& objects) {
  const auto it = objects.find(target);
  const bool detected = it != objects.end() && !it->second.empty();
  return found && detected ? Phase::kTargetAcquisition : Phase::kExploration;
}

PointCloud history_points(std::span<const Vec2> trajectory, double spacing, double z) {
  PointCloud out;
  std::optional<Vec2> last;
  for (const auto& p : trajectory) {
    if (!last || (p - *last).norm() >= spacing) {
      out.push_back({p.x(), p.y(), z});
      last = p;
    }
  }
  return out;
}

}  // namespace toponav
