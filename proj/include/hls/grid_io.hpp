// GridFunction serialization: a one-line JSON header {m, n, L, N, encoding}
// followed by the cell values in row-major order, either as CSV rows of N
// values (last axis fastest) or as raw little-endian float64.
#pragma once

#include <iosfwd>
#include <string>

#include "hls/grid.hpp"

namespace hls {

enum class GridEncoding { csv, binary };

void write_grid_function(std::ostream& os, const GridFunction& f, GridEncoding encoding);
[[nodiscard]] GridFunction read_grid_function(std::istream& is);

void save_grid_function(const std::string& path, const GridFunction& f, GridEncoding encoding);
[[nodiscard]] GridFunction load_grid_function(const std::string& path);

}  // namespace hls
