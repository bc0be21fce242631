#pragma once

// Randomized oracle suites. The unit tests run them at small sizes; the
// acceptance binary runs them at full size.

#include <cstddef>
#include <cstdint>
#include <string>

namespace suites {

struct Report {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0.0;

  bool ok() const { return cases > 0 && failures == 0; }
  void fail(const std::string& what);
};

/// Backprojection and rigid transform against scalar oracles (1e-9), the
/// projection round trip, isometry and invalid-depth rejection.
Report geometry(std::size_t cases, std::uint64_t seed);

/// Voxel bucketing, band filters, grid projection and frontier rule against
/// brute-force oracles, exact equality. Clouds hold at most `max_points`.
Report voxel_grid(std::size_t clouds, std::size_t max_points, std::uint64_t seed);

/// Random graphs with interleaved visits and merges against an exhaustive
/// merge oracle; fixpoint, earliest-id and history post-conditions.
Report topo_merge(std::size_t graphs, std::uint64_t seed);

/// Random fields against the quadratic oracle (1e-12); ranges,
/// monotonicity, translation invariance, argmax determinism, mask soundness.
Report affordance(std::size_t fields, std::uint64_t seed);

}  // namespace suites
