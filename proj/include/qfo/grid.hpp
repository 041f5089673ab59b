#pragma once

#include <cstddef>

namespace qfo {

/// Uniform sampling of a rectangular region. Sample (i, j) sits at
/// (x0 + i*dx, y0 + j*dy); storage is row-major with j as the row index.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  double x0 = 0.0;
  double y0 = 0.0;

  /// Grid with the origin on sample (nx/2, ny/2).
  static Grid2D centered(int nx, int ny, double dx, double dy);

  /// Throws InvalidArgument unless counts are even and >= 2 and pitches > 0.
  void validate() const;

  double x(int i) const { return x0 + i * dx; }
  double y(int j) const { return y0 + j * dy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  double cell_area() const { return dx * dy; }

  /// Wavevector grid dual to this one: pitch 2*pi/(n*d), first sample at
  /// -n/2 * dk so that k = 0 sits on bin n/2.
  Grid2D conjugate() const;

  /// Same counts and, within `rel` relative tolerance, same pitch and origin.
  bool matches(const Grid2D& other, double rel = 1e-12) const;

  /// True when x0/dx and y0/dy are integers (within 1e-9), i.e. coordinate
  /// differences land back on grid samples.
  bool lattice_aligned() const;
};

} // namespace qfo
