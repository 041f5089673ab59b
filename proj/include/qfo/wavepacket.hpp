#pragma once

#include "qfo/field.hpp"

#include <vector>

namespace qfo {

/// Spectral factor times spatial factor, each normalised on its own.
struct SeparablePacket {
  SpectralField1D spectral;
  SpatialField2D spatial;
};

/// Gaussian amplitude exp(-(x-cx)^2/(2 wx^2) - (y-cy)^2/(2 wy^2)) with a
/// plane-wave tilt exp(i(kx x + ky y)). The intensity waist (1/e^2 radius of
/// |xi|^2) is sqrt(2) w.
struct GaussianSpec {
  double wx = 1.0;
  double wy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double kx = 0.0;
  double ky = 0.0;
};

/// Normalised Gaussian wavefront. Throws InvalidArgument for non-positive
/// widths or when 2w spans fewer than 8 samples on either axis.
SpatialField2D make_gaussian_2d(const Grid2D& grid, const GaussianSpec& spec);

/// Normalised sum of weighted fields on a common grid.
SpatialField2D superpose(const std::vector<cplx>& weights, const std::vector<SpatialField2D>& fields);

/// Dual grid helper: n samples with the band [lo, hi) covered by whole
/// cells, samples at cell centres, the band centred in the window.
SpectralField1D make_rect_spectrum(int n, double omega_lo, double omega_hi, int samples_in_band);

/// Normalised Gaussian spectrum exp(-(w - wc)^2/(4 s^2)), so |xi|^2 has
/// standard deviation s.
SpectralField1D make_gaussian_spectrum(int n, double pitch, double start, double omega_c, double sigma);

/// |xi|^2 on the field's grid.
struct DensityGrid {
  Grid2D grid;
  std::vector<double> values;

  double integral() const;
};

DensityGrid probability_density(const SpatialField2D& f);

} // namespace qfo
