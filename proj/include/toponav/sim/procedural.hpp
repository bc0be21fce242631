#pragma once

#include "toponav/sim/episode.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace toponav::sim {

struct ProceduralOptions {
  int max_steps = 40;
  double success_distance = 1.0;
  int num_headings = 12;
  double min_start_clearance = 0.6;
};

/// Platform-independent uniform draw in [lo, hi).
double uniform(std::mt19937_64& rng, double lo, double hi);
/// Platform-independent integer draw in [lo, hi].
int uniform_int(std::mt19937_64& rng, int lo, int hi);

/// Multi-room box world: two to four rooms separated by thin walls with one
/// doorway each, furnished with room-typed objects.
Scene generate_scene(std::mt19937_64& rng);

/// `count` solvable episodes. Each episode draws its scene, target and
/// start from a generator seeded with (seed, index), so batches with the
/// same seed agree element by element regardless of size.
std::vector<EpisodeSpec> generate_batch(std::uint64_t seed, int count, const ProceduralOptions& options = {});

}  // namespace toponav::sim
