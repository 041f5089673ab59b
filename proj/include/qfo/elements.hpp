#pragma once

#include "qfo/field.hpp"

#include <functional>
#include <vector>

namespace qfo {

/// Paraxial transfer function exp(i k0 z) exp(-i z (kx^2 + ky^2)/(2 k0))
/// sampled on the conjugate grid of `spatial`.
struct FresnelKernel {
  double z = 0.0;
  double k0 = 1.0;
  Grid2D spatial;
  std::vector<cplx> transfer;

  static FresnelKernel make(double z, double k0, const Grid2D& spatial);
};

/// Largest |z| for which the transfer-function phase advances by less than
/// pi per k-sample at the band edge: k0 n d^2 / (2 pi), minimised over axes.
double fresnel_max_z(const Grid2D& grid, double k0);

/// Transfer-function Fresnel propagation. Guards: band limit (no power at
/// |k| >= k0) and |z| <= fresnel_max_z. Violations throw GuardViolation
/// unless `enforce_guards` is false.
SpatialField2D fresnel_propagate(const SpatialField2D& f, double z, double k0, bool enforce_guards = true);
SpatialField2D fresnel_propagate(const SpatialField2D& f, const FresnelKernel& kernel);

/// Closed-form impulse response (-i k0/z) e^{i k0 z} e^{i k0 (x^2+y^2)/(2z)}.
/// Convolved (convolve2) with the input it reproduces fresnel_propagate.
SpatialField2D fresnel_impulse_response(double z, double k0, const Grid2D& grid);

/// Impulse-response path: linear (zero-padded) convolution with h. The chirp
/// is tapered to zero between half and full Nyquist local frequency, so it
/// is never aliased. Meant for |z| >= fresnel_max_z / 2 and fields whose
/// spectrum stays below half the Nyquist frequency; at shorter distances the
/// taper spans too few Fresnel zones.
SpatialField2D fresnel_propagate_ir(const SpatialField2D& f, double z, double k0);

/// Single-transform Fresnel integral for long distances,
///   (-i k0/z) e^{i k0 z} e^{i k0 r^2/2z} FT[xi e^{i k0 r'^2/2z}](k0 r/z),
/// landing on the grid of pitch z dk/k0. Guard: z >= fresnel_max_z (input
/// chirp resolved).
SpatialField2D fresnel_transform(const SpatialField2D& f, double z, double k0, bool enforce_guards = true);

/// Far-field threshold (k0/8)(Dx^2 + Dy^2) with D = 2(|c| + 2 sigma) from
/// second moments.
double fraunhofer_threshold(const SpatialField2D& f, double k0);

/// Fraunhofer closed form on the grid of pitch z dk/k0. Guard:
/// z >= 20 fraunhofer_threshold.
SpatialField2D fraunhofer_propagate(const SpatialField2D& f, double z, double k0, bool enforce_guards = true);

/// Non-paraxial angular-spectrum propagation with kz = sqrt(k0^2 - k^2);
/// evanescent components are dropped. Cross-check only.
SpatialField2D angular_spectrum_propagate(const SpatialField2D& f, double z, double k0);

/// Phase-only modulation exp(-i phi(x, y)).
struct PhaseMask {
  Grid2D grid;
  std::vector<double> phi;
  std::vector<cplx> factor;

  static PhaseMask from_phase(const Grid2D& grid, std::vector<double> phi);
  static PhaseMask from_function(const Grid2D& grid, const std::function<double(double, double)>& phi);
};

SpatialField2D apply_phase_mask(const SpatialField2D& f, const PhaseMask& m);

/// phi_l = (k0 / 2f)(x^2 + y^2).
PhaseMask lens_phase(double f_len, double k0, const Grid2D& grid);

/// Truncated Fourier series exp(-i phi_g(x)) = sum_{|r|<=R} g_r e^{i r kappa x},
/// kappa = 2 pi / period.
struct GratingSpec {
  double period = 1.0;
  int R = 0;
  std::vector<cplx> coeffs; // g_{-R} .. g_{R}
  double tail = 0.0;        // 1 - sum |g_r|^2 over retained orders

  double kappa() const;
  cplx g(int r) const { return (r < -R || r > R) ? cplx{} : coeffs[static_cast<std::size_t>(r + R)]; }
  double power() const;
};

/// g_r by trapezoid quadrature over one period from samples
/// phi_g(j period / N), j < N. Needs N >= 16 max(R, 1).
GratingSpec grating_coefficients(const std::vector<double>& phase_samples, double period, int R);
GratingSpec grating_coefficients(const std::function<double(double)>& phi, double period, int R, int samples);

/// Multiplies by the truncated series, replicating the angular spectrum at
/// shifts r kappa. Rejects orders that leave the k-grid or the band |k| < k0.
SpatialField2D grating_diffract(const SpatialField2D& f, const GratingSpec& g, double k0);

} // namespace qfo
