#pragma once

#include "toponav/sim/episode.hpp"
#include "toponav/sim/metrics.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace toponav::app {

struct RunOptions {
  std::vector<std::string> scene_patterns;  ///< glob patterns of scene JSON files
  int episodes = 1;                         ///< episodes taken from each scene's episode list
  int procedural = 0;                       ///< procedural episodes appended to the batch
  std::string oracle = "scripted";
  std::vector<std::string> ablate;  ///< disable_frontier_attr, disable_room_attr, disable_object_attr, disable_history
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string label;        ///< metrics row label; derived from mode and ablations when empty
  std::string config_path;  ///< optional JSON overrides of the component configs
  std::string rooms_path;   ///< optional room table
  std::optional<int> max_steps;
  std::optional<double> success_distance;
  int threads = 0;          ///< 0 = OpenMP default
  bool dump_fields = false; ///< write each step's affordance field as CSV
  std::string command_line; ///< recorded in the manifest
};

struct BatchEpisode {
  sim::EpisodeSpec spec;
  std::string source;  ///< scene path or "procedural"
};

struct BatchResult {
  std::string label;
  std::vector<BatchEpisode> episodes;
  std::vector<sim::EpisodeResult> results;
  std::vector<std::string> logs;  ///< JSON-lines per episode
  std::vector<std::pair<std::string, std::string>> fields;  ///< relative path, CSV text
  sim::Metrics metrics;
  nlohmann::json manifest;
};

/// Component configuration as JSON, and a partial-override loader.
nlohmann::json components_to_json(const sim::ComponentConfig& cc);
void apply_components_json(sim::ComponentConfig& cc, const nlohmann::json& j);

/// Resolves options into components; throws ConfigError on bad flags.
sim::ComponentConfig resolve_components(const RunOptions& options);
std::string default_label(const RunOptions& options);

/// Expands scene globs (sorted) and procedural episodes. Throws Error when a
/// pattern matches nothing or a file does not load.
std::vector<BatchEpisode> collect_episodes(const RunOptions& options);

/// Runs everything in memory. Episodes run in parallel; results are ordered.
BatchResult run_batch(const RunOptions& options);

/// Writes metrics.csv, episodes.csv, logs/, manifest.json (and fields/).
void write_batch(const BatchResult& batch, const RunOptions& options);

/// Command wrappers: return a process exit status, diagnostics go to `err`.
int run_command(const RunOptions& options, std::ostream& out, std::ostream& err);

struct PlotOptions {
  std::string log_path;
  std::string scene_path;
  std::string out_path;
  std::string heatmap_path;
};

/// Trajectory log parsed back from JSON lines. Throws Error naming the
/// offending line.
std::vector<nlohmann::json> read_log(const std::string& path);

std::string render_svg(const sim::Scene& scene, const std::vector<nlohmann::json>& log,
                       const std::string& heatmap_csv = {});
int plot_command(const PlotOptions& options, std::ostream& err);

struct ReportRow {
  std::string config;
  std::size_t episodes = 0;
  double sr = 0.0;
  double spl = 0.0;
  double dtg = 0.0;
};

/// Reads a metrics CSV (or a run directory containing metrics.csv). Throws
/// Error on schema mismatch.
std::vector<ReportRow> read_metrics_csv(const std::string& path);
std::string format_report(const std::vector<ReportRow>& rows);
int report_command(const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err);

}  // namespace toponav::app
