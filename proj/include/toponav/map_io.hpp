#pragma once

#include "toponav/semantic_map.hpp"

#include <iosfwd>
#include <string>

namespace toponav {

/// ASCII PLY, one `x y z r g b` line per point. Uncolored clouds are
/// written white.
void write_ply(std::ostream& os, const PointCloud& cloud);
void write_ply(const std::string& path, const PointCloud& cloud);

/// Binary PGM (P5): unknown 128, free 255, obstacle 0. Image rows run from
/// the top (largest j) down so the picture is y-up.
void write_pgm(std::ostream& os, const OccupancyGrid& grid);
void write_pgm(const std::string& path, const OccupancyGrid& grid);

}  // namespace toponav
