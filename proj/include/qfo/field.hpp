#pragma once

#include "qfo/grid.hpp"

#include <complex>
#include <vector>

namespace qfo {

using cplx = std::complex<double>;

/// Sampled wavefront xi(x, y). Amplitudes carry units of 1/length so that
/// sum |xi|^2 dx dy is dimensionless.
struct SpatialField2D {
  Grid2D grid;
  std::vector<cplx> values;

  SpatialField2D() = default;
  explicit SpatialField2D(const Grid2D& g);
  SpatialField2D(const Grid2D& g, std::vector<cplx> v);

  cplx& at(int i, int j) { return values[grid.index(i, j)]; }
  const cplx& at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// Angular spectrum xi~(kx, ky) on the conjugate grid. `spatial` remembers
/// the grid the spectrum was taken from so the inverse lands back on it.
struct AngularField2D {
  Grid2D kgrid;
  Grid2D spatial;
  std::vector<cplx> values;

  cplx& at(int i, int j) { return values[kgrid.index(i, j)]; }
  const cplx& at(int i, int j) const { return values[kgrid.index(i, j)]; }

  /// Fraction of power at |k| >= k0 is below 1e-12.
  bool band_limited(double k0) const;
};

/// Uniformly sampled 1D function on [start, start + n*pitch).
struct Samples1D {
  int n = 0;
  double pitch = 1.0;
  double start = 0.0;
  std::vector<cplx> values;

  double coord(int i) const { return start + i * pitch; }
};

/// Spectral wavepacket xi(omega), units omega^{-1/2}.
struct SpectralField1D : Samples1D {
  /// Band edges (omega_min, omega_max) of the samples whose power exceeds
  /// 1e-12 of the total, extended by half a pitch to the cell edges.
  struct Support {
    double omega_min = 0.0;
    double omega_max = 0.0;
    double bandwidth() const { return omega_max - omega_min; }
  };
  Support support() const;
};

/// Temporal wavepacket, the dotted representation. `spectral_start` and
/// `spectral_pitch` remember the dual grid.
struct TemporalField1D : Samples1D {
  double spectral_start = 0.0;
  double spectral_pitch = 1.0;
};

double norm2(const SpatialField2D& f);
double norm2(const AngularField2D& f);
double norm2(const Samples1D& f);

/// Discrete inner product <a, b> = sum conj(a) b dx dy.
cplx inner(const SpatialField2D& a, const SpatialField2D& b);
cplx inner(const Samples1D& a, const Samples1D& b);

/// sqrt(sum |a - b|^2 dx dy); grids must match.
double l2_distance(const SpatialField2D& a, const SpatialField2D& b);

/// l2_distance(a, b) / l2(b).
double relative_l2(const SpatialField2D& a, const SpatialField2D& b);
double relative_l2(const Samples1D& a, const Samples1D& b);

/// Best single unit-modulus factor u minimising |u a - b|, and the
/// resulting relative L2 error.
struct PhaseAlignment {
  cplx phase;
  double relative_error;
};
PhaseAlignment phase_aligned(const SpatialField2D& a, const SpatialField2D& b);
PhaseAlignment phase_aligned(const Samples1D& a, const Samples1D& b);

/// Returns f scaled to unit norm. Throws InvalidArgument on a zero field.
SpatialField2D normalized(SpatialField2D f);
SpectralField1D normalized(SpectralField1D f);

/// Second-moment statistics of |xi|^2.
struct Moments2D {
  double cx = 0.0;
  double cy = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};
Moments2D moments(const SpatialField2D& f);

} // namespace qfo
