#include "toponav/app/app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace toponav::app {

std::vector<ReportRow> read_metrics_csv(const std::string& input) {
  std::string path = input;
  if (std::filesystem::is_directory(path)) path = (std::filesystem::path(path) / "metrics.csv").string();
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path);
  std::string line;
  if (!std::getline(is, line) || line != "config,episodes,sr,spl,dtg") {
    throw Error(path + ":1: schema mismatch, expected header config,episodes,sr,spl,dtg");
  }
  std::vector<ReportRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw Error(path + ":" + std::to_string(lineno) + ": schema mismatch, expected 5 columns");
    try {
      rows.push_back({cells[0], std::stoul(cells[1]), std::stod(cells[2]), std::stod(cells[3]), std::stod(cells[4])});
    } catch (const std::exception&) {
      throw Error(path + ":" + std::to_string(lineno) + ": non-numeric metric");
    }
  }
  if (rows.empty()) throw Error(path + ": no rows");
  return rows;
}

std::string format_report(const std::vector<ReportRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.config.size());
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-*s  %8s  %6s  %6s  %7s\n", static_cast<int>(width), "config", "episodes", "SR",
                "SPL", "DTG");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %8zu  %6.3f  %6.3f  %7.3f\n", static_cast<int>(width), r.config.c_str(),
                  r.episodes, r.sr, r.spl, r.dtg);
    os << buf;
  }
  return os.str();
}

int report_command(const std::vector<std::string>& inputs, std::ostream& out, std::ostream& err) {
  try {
    if (inputs.empty()) throw Error("report needs at least one metrics CSV or run directory");
    std::vector<ReportRow> rows;
    for (const auto& in : inputs) {
      auto r = read_metrics_csv(in);
      rows.insert(rows.end(), r.begin(), r.end());
    }
    out << format_report(rows);
    return 0;
  } catch (const std::exception& e) {
    err << "toponav report: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace toponav::app
