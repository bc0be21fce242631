#include "toponav/app/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App cli{"Object-goal navigation with a semantic point-cloud map and topological memory"};
  cli.require_subcommand(1);

  toponav::app::RunOptions run;
  std::string ablate_csv;
  auto* run_cmd = cli.add_subcommand("run", "run episodes and write logs, metrics and a manifest");
  run_cmd->add_option("--scenes", run.scene_patterns, "scene JSON glob(s)");
  run_cmd->add_option("--episodes", run.episodes, "episodes per scene file")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--procedural", run.procedural, "append N procedurally generated episodes")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--oracle", run.oracle, "scripted|remote|vlm-only|detector-only")
      ->check(CLI::IsMember({"scripted", "remote", "vlm-only", "detector-only"}));
  run_cmd->add_option("--ablate", ablate_csv,
                      "comma list of disable_frontier_attr, disable_room_attr, disable_object_attr, disable_history");
  run_cmd->add_option("--seed", run.seed, "seed for procedural episodes");
  run_cmd->add_option("--out", run.out_dir, "output directory")->required();
  run_cmd->add_option("--label", run.label, "metrics row label");
  run_cmd->add_option("--config", run.config_path, "component config JSON (a previous manifest works)");
  run_cmd->add_option("--rooms", run.rooms_path, "room table (class room per line)");
  run_cmd->add_option("--max-steps", run.max_steps, "override the step budget");
  run_cmd->add_option("--success-distance", run.success_distance, "override the success radius (m)");
  run_cmd->add_option("--threads", run.threads, "OpenMP threads for the episode batch");
  run_cmd->add_flag("--dump-fields", run.dump_fields, "write each step's affordance field as CSV");

  toponav::app::PlotOptions plot;
  auto* plot_cmd = cli.add_subcommand("plot", "render a trajectory log over its scene as SVG");
  plot_cmd->add_option("--log", plot.log_path, "trajectory log (JSON lines)")->required();
  plot_cmd->add_option("--scene", plot.scene_path, "scene JSON")->required();
  plot_cmd->add_option("--out", plot.out_path, "output SVG")->required();
  plot_cmd->add_option("--heatmap", plot.heatmap_path, "affordance field CSV");

  std::vector<std::string> report_inputs;
  auto* report_cmd = cli.add_subcommand("report", "tabulate metrics CSVs");
  report_cmd->add_option("inputs", report_inputs, "run directories or metrics CSVs")->required();

  CLI11_PARSE(cli, argc, argv);

  if (*run_cmd) {
    std::stringstream ss(ablate_csv);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!item.empty()) run.ablate.push_back(item);
    }
    std::ostringstream line;
    for (int i = 0; i < argc; ++i) line << (i ? " " : "") << argv[i];
    run.command_line = line.str();
    if (run.scene_patterns.empty() && run.procedural == 0) {
      std::cerr << "toponav run: give --scenes and/or --procedural\n";
      return 2;
    }
    return toponav::app::run_command(run, std::cout, std::cerr);
  }
  if (*plot_cmd) return toponav::app::plot_command(plot, std::cerr);
  return toponav::app::report_command(report_inputs, std::cout, std::cerr);
}
