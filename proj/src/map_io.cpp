#include "toponav/map_io.hpp"

#include <fstream>
#include <ostream>

namespace toponav {

namespace {

std::ofstream open_or_throw(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw Error("cannot open " + path + " for writing");
  return os;
}

std::uint8_t gray(CellState s) {
  switch (s) {
    case CellState::kFree: return 255;
    case CellState::kObstacle: return 0;
    case CellState::kUnknown: break;
  }
  return 128;
}

}  // namespace

void write_ply(std::ostream& os, const PointCloud& cloud) {
  os << "ply\nformat ascii 1.0\n"
     << "element vertex " << cloud.size() << "\n"
     << "property float x\nproperty float y\nproperty float z\n"
     << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
     << "end_header\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.points[i];
    const Rgb c = cloud.has_colors() ? cloud.colors[i] : Rgb{255, 255, 255};
    os << p.x() << ' ' << p.y() << ' ' << p.z() << ' ' << int{c.r} << ' ' << int{c.g} << ' ' << int{c.b}
       << '\n';
  }
}

void write_ply(const std::string& path, const PointCloud& cloud) {
  auto os = open_or_throw(path);
  write_ply(os, cloud);
}

void write_pgm(std::ostream& os, const OccupancyGrid& grid) {
  os << "P5\n" << grid.nx << ' ' << grid.ny << "\n255\n";
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) os.put(static_cast<char>(gray(grid.at(i, j))));
  }
}

void write_pgm(const std::string& path, const OccupancyGrid& grid) {
  auto os = open_or_throw(path, std::ios::out | std::ios::binary);
  write_pgm(os, grid);
}

}  // namespace toponav
