#pragma once

#include "qfo/field.hpp"

namespace qfo {

/// Symmetric two-dimensional Fourier transform
///   xi~(k) = (1/2pi) \iint xi(x) e^{-i k.x} dx dy
/// evaluated on the conjugate grid. Off-centre grids are handled with
/// explicit phase ramps, so the discrete map is exactly unitary.
AngularField2D forward_ft2(const SpatialField2D& f);

/// Inverse of forward_ft2, landing on `g.spatial`.
SpatialField2D inverse_ft2(const AngularField2D& g);

/// Inverse onto an explicit spatial grid. Throws GridMismatch unless
/// `target.conjugate()` equals `g.kgrid`.
SpatialField2D inverse_ft2(const AngularField2D& g, const Grid2D& target);

/// Cyclic convolution with the symmetric prefactor,
///   (a * b)(x) = (1/2pi) \iint a(x') b(x - x') dx' dy',
/// so that forward_ft2(a * b) = forward_ft2(a) . forward_ft2(b).
/// Both fields must share a lattice-aligned grid.
SpatialField2D convolve2(const SpatialField2D& a, const SpatialField2D& b);

/// f(alpha x, beta y) * sqrt|alpha beta| on the grid with pitch
/// (dx/|alpha|, dy/|beta|). Samples are remapped, not interpolated, so the
/// norm is preserved exactly. Negative factors reverse the sample order.
SpatialField2D rescale_field(const SpatialField2D& f, double alpha, double beta);

/// Parity transform xi(-x, -y) on the same grid (indices wrap cyclically).
/// Requires 2*x0/dx and 2*y0/dy to be integers.
SpatialField2D parity(const SpatialField2D& f);

/// Translates a field by (sx, sy) using the Fourier shift theorem (exact
/// for band-limited, well-contained fields; cyclic otherwise).
SpatialField2D translate(const SpatialField2D& f, double sx, double sy);

/// Spectral to temporal representation,
///   xi'(t) = (1/sqrt(2pi)) \int xi(omega) e^{-i omega t} d omega,
/// on the dual grid dt = 2pi/(n domega), t starting at -n/2 dt.
TemporalField1D spectral_to_temporal(const SpectralField1D& s);

/// Exact inverse of spectral_to_temporal.
SpectralField1D temporal_to_spectral(const TemporalField1D& t);

} // namespace qfo
