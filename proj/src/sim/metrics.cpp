#include "toponav/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace toponav::sim {

EpisodeOutcome outcome_of(const EpisodeResult& r) {
  return {r.success, r.path_length, r.shortest_length, r.dtg};
}

Metrics compute_metrics(std::span<const EpisodeOutcome> outcomes) {
  if (outcomes.empty()) throw EmptyInputError("no episodes to aggregate");
  Metrics m;
  m.episodes = outcomes.size();
  for (const auto& o : outcomes) {
    if (o.success) {
      m.sr += 1.0;
      const double denom = std::max(o.path_length, o.shortest_length);
      if (std::isfinite(o.shortest_length)) m.spl += denom > 0.0 ? o.shortest_length / denom : 1.0;
    }
    m.dtg += o.dtg;
  }
  const double n = static_cast<double>(outcomes.size());
  m.sr /= n;
  m.spl /= n;
  m.dtg /= n;
  return m;
}

Metrics compute_metrics(std::span<const EpisodeResult> results) {
  std::vector<EpisodeOutcome> o;
  o.reserve(results.size());
  for (const auto& r : results) o.push_back(outcome_of(r));
  return compute_metrics(o);
}

std::string format_metric(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

void write_metrics_header(std::ostream& out) { out << "config,episodes,sr,spl,dtg\n"; }

void write_metrics_row(std::ostream& out, const std::string& config, const Metrics& m) {
  out << config << ',' << m.episodes << ',' << format_metric(m.sr) << ',' << format_metric(m.spl) << ','
      << format_metric(m.dtg) << '\n';
}

}  // namespace toponav::sim
