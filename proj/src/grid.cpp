#include "qfo/grid.hpp"

#include "qfo/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qfo {
namespace {

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

} // namespace

Grid2D Grid2D::centered(int nx, int ny, double dx, double dy) {
  Grid2D g{nx, ny, dx, dy, -0.5 * nx * dx, -0.5 * ny * dy};
  g.validate();
  return g;
}

void Grid2D::validate() const {
  if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0)
    throw InvalidArgument("grid sample counts must be even and >= 2, got " + std::to_string(nx) +
                          "x" + std::to_string(ny));
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy))
    throw InvalidArgument("grid pitch must be positive and finite");
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw InvalidArgument("grid origin must be finite");
}

Grid2D Grid2D::conjugate() const {
  const double dkx = 2.0 * std::numbers::pi / (nx * dx);
  const double dky = 2.0 * std::numbers::pi / (ny * dy);
  return Grid2D{nx, ny, dkx, dky, -0.5 * nx * dkx, -0.5 * ny * dky};
}

bool Grid2D::matches(const Grid2D& o, double rel) const {
  if (nx != o.nx || ny != o.ny) return false;
  if (!close(dx, o.dx, rel) || !close(dy, o.dy, rel)) return false;
  // Origins are compared relative to the grid extent; a zero origin has no scale of its own.
  return std::abs(x0 - o.x0) <= rel * nx * dx && std::abs(y0 - o.y0) <= rel * ny * dy;
}

bool Grid2D::lattice_aligned() const { return near_integer(x0 / dx) && near_integer(y0 / dy); }

} // namespace qfo
