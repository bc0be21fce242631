#include "toponav/app/app.hpp"

#include "toponav/sim/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace toponav::app {

using nlohmann::json;

std::vector<json> read_log(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read log " + path);
  std::vector<json> records;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    for (const char* key : {"step", "pose", "phase", "decision", "waypoint", "node_count", "frontier_count"}) {
      if (!rec.contains(key)) throw Error(path + ":" + std::to_string(lineno) + ": missing field '" + key + "'");
    }
    if (!rec.at("pose").is_array() || rec.at("pose").size() < 2) {
      throw Error(path + ":" + std::to_string(lineno) + ": pose is not [x, y, yaw]");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

namespace {

struct Frame {
  double x0, y0, scale, height;
  double sx(double x) const { return (x - x0) * scale + 20.0; }
  double sy(double y) const { return height - ((y - y0) * scale + 20.0); }  // y up
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string hex_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

// Blue (0) to red (1).
std::string heat_color(double s) {
  s = std::clamp(s, 0.0, 1.0);
  const Rgb c{static_cast<std::uint8_t>(std::lround(255 * s)), static_cast<std::uint8_t>(std::lround(64 * (1 - s))),
              static_cast<std::uint8_t>(std::lround(255 * (1 - s)))};
  return hex_color(c);
}

void rect(std::ostream& os, const Frame& f, double x0, double y0, double x1, double y1, const std::string& attrs) {
  os << "<rect x=\"" << num(f.sx(x0)) << "\" y=\"" << num(f.sy(y1)) << "\" width=\"" << num((x1 - x0) * f.scale)
     << "\" height=\"" << num((y1 - y0) * f.scale) << "\" " << attrs << "/>\n";
}

}  // namespace

std::string render_svg(const sim::Scene& scene, const std::vector<json>& log, const std::string& heatmap_csv) {
  const double scale = 60.0;
  const double w = (scene.x1 - scene.x0) * scale + 40.0;
  const double h = (scene.y1 - scene.y0) * scale + 40.0;
  const Frame f{scene.x0, scene.y0, scale, h};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
     << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n";
  os << "<g id=\"scene\">\n";
  rect(os, f, scene.x0, scene.y0, scene.x1, scene.y1, "class=\"bounds\" fill=\"#ffffff\" stroke=\"#000000\"");
  for (const auto& wall : scene.walls) {
    rect(os, f, wall.min.x(), wall.min.y(), wall.max.x(), wall.max.y(), "class=\"wall\" fill=\"#555555\"");
  }
  for (const auto& o : scene.objects) {
    rect(os, f, o.box.min.x(), o.box.min.y(), o.box.max.x(), o.box.max.y(),
         "class=\"object\" fill=\"" + hex_color(sim::class_color(o.cls)) + "\" fill-opacity=\"0.6\"");
    os << "<text class=\"object-label\" x=\"" << num(f.sx(o.box.min.x())) << "\" y=\"" << num(f.sy(o.box.max.y()) - 2)
       << "\" font-size=\"10\">" << o.cls << "</text>\n";
  }
  os << "</g>\n";

  if (!heatmap_csv.empty()) {
    std::ifstream is(heatmap_csv);
    if (!is) throw Error("cannot read heatmap " + heatmap_csv);
    std::string line;
    std::getline(is, line);
    if (line.rfind("x,y,z,score,masked", 0) != 0) throw Error(heatmap_csv + ":1: unexpected header");
    os << "<g id=\"heatmap\">\n";
    int lineno = 1;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      double x, y, z, s;
      int masked;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%d", &x, &y, &z, &s, &masked) != 5) {
        throw Error(heatmap_csv + ":" + std::to_string(lineno) + ": malformed row");
      }
      const double half = 0.025;
      std::ostringstream attrs;
      attrs << "class=\"heat\" data-x=\"" << sim::format_metric(x) << "\" data-y=\"" << sim::format_metric(y)
            << "\" data-score=\"" << sim::format_metric(s) << "\" data-masked=\"" << masked << "\" fill=\""
            << (masked ? std::string("#000000") : heat_color(s)) << "\" fill-opacity=\"0.5\"";
      rect(os, f, x - half, y - half, x + half, y + half, attrs.str());
    }
    os << "</g>\n";
  }

  // trajectory: every executed position in order
  std::vector<std::pair<double, double>> traj;
  for (const auto& rec : log) {
    const auto& pose = rec.at("pose");
    if (traj.empty()) traj.emplace_back(pose[0].get<double>(), pose[1].get<double>());
    if (rec.contains("path")) {
      for (const auto& p : rec.at("path")) traj.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
  }
  traj.erase(std::unique(traj.begin(), traj.end()), traj.end());
  if (traj.size() == 1) traj.push_back(traj.front());
  if (!traj.empty()) {
    os << "<polyline id=\"trajectory\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < traj.size(); ++i) {
      os << (i ? " " : "") << num(f.sx(traj[i].first)) << ',' << num(f.sy(traj[i].second));
    }
    os << "\"/>\n";
  }

  if (!log.empty()) {
    const auto& last = log.back();
    os << "<g id=\"frontiers\">\n";
    if (last.contains("frontiers")) {
      for (const auto& p : last.at("frontiers")) {
        os << "<circle class=\"frontier\" cx=\"" << num(f.sx(p[0].get<double>())) << "\" cy=\""
           << num(f.sy(p[1].get<double>())) << "\" r=\"1.5\" fill=\"#2ca02c\"/>\n";
      }
    }
    os << "</g>\n<g id=\"nodes\">\n";
    if (last.contains("nodes")) {
      for (const auto& n : last.at("nodes")) {
        const double x = n.at("pos")[0].get<double>(), y = n.at("pos")[1].get<double>();
        const auto id = n.at("id").get<long long>();
        os << "<circle class=\"node\" data-id=\"" << id << "\" cx=\"" << num(f.sx(x)) << "\" cy=\"" << num(f.sy(y))
           << "\" r=\"6\" fill=\"#ff7f0e\" stroke=\"#000000\"/>\n";
        os << "<text class=\"node-label\" x=\"" << num(f.sx(x) + 7) << "\" y=\"" << num(f.sy(y) - 7)
           << "\" font-size=\"11\">" << id << "</text>\n";
      }
    } else {
      // older logs without node snapshots: mark the current node only
      const auto& pose = last.at("pose");
      os << "<circle class=\"node\" data-id=\"" << last.value("node", 0) << "\" cx=\""
         << num(f.sx(pose[0].get<double>())) << "\" cy=\"" << num(f.sy(pose[1].get<double>()))
         << "\" r=\"6\" fill=\"#ff7f0e\" stroke=\"#000000\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

int plot_command(const PlotOptions& o, std::ostream& err) {
  try {
    const auto log = read_log(o.log_path);
    const sim::Scene scene = sim::load_scene(o.scene_path);
    const std::string svg = render_svg(scene, log, o.heatmap_path);
    std::ofstream os(o.out_path, std::ios::binary);
    if (!os) throw Error("cannot write " + o.out_path);
    os << svg;
    return 0;
  } catch (const std::exception& e) {
    err << "toponav plot: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace toponav::app
