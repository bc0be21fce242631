#pragma once

#include "toponav/sim/episode.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace toponav::sim {

struct Metrics {
  double sr = 0.0;
  double spl = 0.0;
  double dtg = 0.0;
  std::size_t episodes = 0;
};

/// Per-episode inputs of the aggregate metrics.
struct EpisodeOutcome {
  bool success = false;
  double path_length = 0.0;
  double shortest_length = 0.0;
  double dtg = 0.0;
};

/// SR = mean success; SPL = mean S*l/max(p, l); DTG = mean final distance.
/// A success with l = 0 contributes 1 to SPL. Throws EmptyInputError.
Metrics compute_metrics(std::span<const EpisodeOutcome> outcomes);
Metrics compute_metrics(std::span<const EpisodeResult> results);

EpisodeOutcome outcome_of(const EpisodeResult& result);

/// Fixed six-decimal formatting used by every CSV writer.
std::string format_metric(double v);

/// `config,episodes,sr,spl,dtg` header plus one row per call.
void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const std::string& config, const Metrics& m);

}  // namespace toponav::sim
