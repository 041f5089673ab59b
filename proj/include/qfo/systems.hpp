#pragma once

#include "qfo/elements.hpp"
#include "qfo/field.hpp"
#include "qfo/quantum_state.hpp"

#include <functional>
#include <vector>

namespace qfo {

/// L = T(f) U_lens T(f).
struct LensOperator {
  double f_len = 1.0;
  double k0 = 1.0;

  void validate() const;
};

/// Grid on which lens_apply lands: pitch f dk/k0, centred like the
/// conjugate grid.
Grid2D lens_output_grid(const Grid2D& input, const LensOperator& L);

/// Focal length for which lens_output_grid(g) has the same pitch as g,
/// f = k0 n dx^2 / (2 pi). Requires nx dx^2 == ny dy^2.
double fourier_matched_focal_length(const Grid2D& g, double k0);

/// Analytic lens operator: (-i k0/f) e^{2 i k0 f} xi~(k0 x/f, k0 y/f).
/// Rejects inputs that are not band limited or whose spectrum reaches the
/// edge of the k-grid (message suggests a finer grid).
SpatialField2D lens_apply(const SpatialField2D& f, const LensOperator& L, bool enforce_guards = true);

/// The same operator composed from elements: fresnel, lens mask, fresnel.
/// Stays on the input grid, so it matches lens_apply only on a
/// Fourier-matched grid.
SpatialField2D lens_apply_composed(const SpatialField2D& f, const LensOperator& L, bool enforce_guards = true);

/// Wavepacket through lens_apply, repr untouched.
QuantumLightState lens_apply_state(const QuantumLightState& s, const LensOperator& L, bool enforce_guards = true);

/// 4f processor with the pupil mask in the shared focal plane.
struct FourF {
  double f_len = 1.0;
  double k0 = 1.0;
};

/// Confocal-plane grid a pupil mask must be sampled on.
Grid2D confocal_grid(const Grid2D& input, const FourF& sys);

/// lens, pupil, lens. Output lives on a centred grid with the input pitch.
SpatialField2D four_f_apply(const SpatialField2D& f, const FourF& sys, const PhaseMask& pupil,
                            bool enforce_guards = true);

QuantumLightState four_f_apply_state(const QuantumLightState& s, const FourF& sys, const PhaseMask& pupil,
                                     bool enforce_guards = true);

/// Impulse response h = -e^{4 i k0 f}(k0/f)^2 FT(pupil)(k0 x/f) on `input`.
SpatialField2D four_f_impulse_response(const Grid2D& input, const FourF& sys, const PhaseMask& pupil);

/// Convolution path: parity(f) convolved with four_f_impulse_response.
SpatialField2D four_f_apply_convolution(const SpatialField2D& f, const FourF& sys, const PhaseMask& pupil);

/// phi'(x, y) = -phi(-x, -y), so that Phi' = conj(Phi(-x, -y)).
PhaseMask inverse_pupil(const PhaseMask& pupil);

/// Coefficients p_rs of a periodic phase-only pupil, the lattice of copies it
/// produces behind a 4f processor, and the cyclic orthogonality certificate.
struct LatticeResponse {
  double period_x = 1.0;
  double period_y = 1.0;
  double x1 = 0.0; // f kappa_x / k0
  double y1 = 0.0;
  int R = 0;
  int S = 0;
  std::vector<cplx> p; // row-major over s in [-S, S], r in [-R, R]
  double tail = 0.0;
  double norm_defect = 0.0;
  double max_offdiag = 0.0;
  bool certified = false;

  cplx weight(int r, int s) const;
};

/// Quadrature over one cell from samples phi(i Lx/Nx, j Ly/Ny) (row-major,
/// Nx*Ny values). Needs Nx >= 16 max(R, 1) and Ny >= 16 max(S, 1). A
/// normalisation defect above 1e-3 throws GuardViolation.
LatticeResponse periodic_pupil_analyze(const std::vector<double>& cell, int nx, int ny, double period_x,
                                       double period_y, int R, int S, const FourF& sys);
LatticeResponse periodic_pupil_analyze(const std::function<double(double, double)>& phi, int nx, int ny,
                                       double period_x, double period_y, int R, int S, const FourF& sys);

struct PeriodicOutput {
  SpatialField2D field;
  double width_margin_x = 0.0; // x1 - Dx, Dx = 4 sigma_x
  double width_margin_y = 0.0;
  double max_copy_overlap = 0.0;     // |<copy, neighbour>|, reported only
  bool orthogonality_certified = false; // width margins positive on used axes
};

/// Lattice form -e^{4 i k0 f} sum p_rs parity(f)(x - r x1, y - s y1).
PeriodicOutput four_f_periodic_apply(const SpatialField2D& f, const LatticeResponse& lat, const FourF& sys);

} // namespace qfo
