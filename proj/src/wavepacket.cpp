#include "qfo/wavepacket.hpp"

#include "qfo/errors.hpp"

#include <cmath>
#include <string>

namespace qfo {

SpatialField2D make_gaussian_2d(const Grid2D& grid, const GaussianSpec& s) {
  grid.validate();
  if (!(s.wx > 0.0) || !(s.wy > 0.0)) throw InvalidArgument("gaussian widths must be positive");
  if (2.0 * s.wx < 8.0 * grid.dx || 2.0 * s.wy < 8.0 * grid.dy)
    throw InvalidArgument("gaussian under-resolved: need w >= 4 samples, got wx/dx=" +
                          std::to_string(s.wx / grid.dx) + " wy/dy=" + std::to_string(s.wy / grid.dy));
  SpatialField2D f(grid);
  for (int j = 0; j < grid.ny; ++j) {
    const double y = grid.y(j) - s.cy;
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i) - s.cx;
      const double a = std::exp(-0.5 * (x * x / (s.wx * s.wx) + y * y / (s.wy * s.wy)));
      f.at(i, j) = std::polar(a, s.kx * grid.x(i) + s.ky * grid.y(j));
    }
  }
  return normalized(std::move(f));
}

SpatialField2D superpose(const std::vector<cplx>& weights, const std::vector<SpatialField2D>& fields) {
  if (fields.empty() || weights.size() != fields.size())
    throw InvalidArgument("superpose needs one weight per field");
  SpatialField2D out(fields.front().grid);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (!fields[k].grid.matches(out.grid)) throw GridMismatch("superpose: fields on different grids");
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += weights[k] * fields[k].values[i];
  }
  return normalized(std::move(out));
}

SpectralField1D make_rect_spectrum(int n, double omega_lo, double omega_hi, int samples_in_band) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("spectral sample count must be even");
  if (samples_in_band < 1 || samples_in_band > n) throw InvalidArgument("band does not fit the window");
  if (!(omega_hi > omega_lo)) throw InvalidArgument("empty spectral band");
  SpectralField1D s;
  s.n = n;
  s.pitch = (omega_hi - omega_lo) / samples_in_band;
  const int pad = (n - samples_in_band) / 2;
  s.start = omega_lo + 0.5 * s.pitch - pad * s.pitch;
  s.values.assign(n, cplx{});
  for (int i = pad; i < pad + samples_in_band; ++i) s.values[i] = 1.0;
  return normalized(std::move(s));
}

SpectralField1D make_gaussian_spectrum(int n, double pitch, double start, double omega_c, double sigma) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("spectral sample count must be even");
  if (!(sigma > 0.0) || !(pitch > 0.0)) throw InvalidArgument("gaussian spectrum needs positive width and pitch");
  SpectralField1D s;
  s.n = n;
  s.pitch = pitch;
  s.start = start;
  s.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double d = s.coord(i) - omega_c;
    s.values[i] = std::exp(-d * d / (4.0 * sigma * sigma));
  }
  return normalized(std::move(s));
}

double DensityGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_area();
}

DensityGrid probability_density(const SpatialField2D& f) {
  DensityGrid d{f.grid, std::vector<double>(f.values.size())};
  for (std::size_t i = 0; i < f.values.size(); ++i) d.values[i] = std::norm(f.values[i]);
  return d;
}

} // namespace qfo
