#pragma once

#include "qfo/field.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qfo {

/// QFO1 dump: a 64-byte ASCII header "QFO1 nx ny dx dy x0 y0" (shortest
/// round-trip decimal, space padded, newline terminated) followed by
/// row-major little-endian complex64 pairs. Throws Error on I/O failure.
void write_grid(const std::filesystem::path& path, const SpatialField2D& f);

/// Real data (densities, phases) stored as complex64 with zero imaginary part.
void write_grid(const std::filesystem::path& path, const Grid2D& grid, const std::vector<double>& values);

SpatialField2D read_grid(const std::filesystem::path& path);

/// The 64-byte header for `g`.
std::string grid_header(const Grid2D& g);

/// CSV with columns `coord_name,re,im,abs2`.
void write_csv(const std::filesystem::path& path, const Samples1D& s, const std::string& coord_name);

/// CSV with one `name,value...` row per column set; columns share a length.
void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                     const std::vector<std::vector<double>>& columns);

} // namespace qfo
