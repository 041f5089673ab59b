#pragma once

#include "qfo/elements.hpp"
#include "qfo/field.hpp"
#include "qfo/quantum_state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qfo {

/// Target spectral phase theta(omega).
struct SpectralPhase {
  enum class Kind { zero, linear, chips };

  Kind kind = Kind::zero;
  double tau = 0.0;                // linear: theta = omega tau
  double lo = 0.0, hi = 0.0;       // chips: band split into equal chips
  std::vector<double> chip_phases; // one phase per chip

  double operator()(double omega) const;

  static SpectralPhase zero();
  static SpectralPhase linear(double tau);
  static SpectralPhase chips(double lo, double hi, std::vector<double> phases);
  /// Phases uniform in [0, 2 pi) from mt19937_64(seed), 53-bit mantissas.
  static SpectralPhase random_chips(double lo, double hi, int count, std::uint64_t seed);
};

/// Three-step 8f shaper: 4f with a 1D periodic pupil, spatial phase
/// theta(Omega(x)) in the output plane, inverse 4f.
struct PulseShaperSpec {
  GratingSpec pupil;
  double f_len = 1.0;
  double c = 1.0;
  SpectralPhase theta;
  double spot_fraction = 1e-5; // spot sigma over x1(omega_max) in the simulated path
  int spot_samples = 129;
};

/// x1(omega) = f kappa c / omega.
double lattice_constant(const PulseShaperSpec& s, double omega);

/// Omega(x) = min(R, floor(|x|/x1max)) (x1max/|x|) omega_max, none for
/// |x| < x1max. Ratios within a few ulp of an integer count as that integer.
std::optional<double> omega_map(double x, double omega_max, int R, double x1_max);

struct ShaperCertificate {
  double p0_abs = 0.0;
  double p0_margin = 0.0; // 1e-9 - |p0|
  double omega_max = 0.0;
  double delta_omega = 0.0;
  double delta_omega_limit = 0.0; // omega_max / R
  double delta_omega_margin = 0.0;
  double tail = 0.0; // sum |p_r|^2 beyond R
  bool no_dc = false;
  bool separation = false;
  bool passed = false;

  std::string report() const;
};

/// Never throws on failed conditions; they are reported.
ShaperCertificate validate_shaper(const PulseShaperSpec& s, const SpectralField1D::Support& band);

/// xi(omega) e^{i omega 8f/c} e^{-i theta(omega)}.
SpectralField1D pulse_shaper_closed_form(const SpectralField1D& in, const PulseShaperSpec& s);

struct ShaperSimulation {
  SpectralField1D output;    // projection onto the input spatial mode at x = 0
  double residual = 0.0;     // power left outside that mode
  double transmitted = 0.0;  // total output power
};

/// Per-sample spatial simulation; parallel over omega samples, identical
/// results for any thread count.
ShaperSimulation pulse_shaper_simulate(const SpectralField1D& in, const PulseShaperSpec& s, int threads = 1);

struct ShaperResult {
  ShaperCertificate certificate;
  SpectralField1D closed_form;
  ShaperSimulation simulated;
  double relative_l2 = 0.0;
};

/// Validates, then runs both paths. A failed certificate throws
/// GuardViolation unless `enforce_guards` is false.
ShaperResult pulse_shaper_apply(const SpectralField1D& in, const PulseShaperSpec& s, int threads = 1,
                                bool enforce_guards = true);

/// Packet replaced by the closed-form output; repr untouched.
QuantumLightState pulse_shaper_apply_state(const QuantumLightState& st, const PulseShaperSpec& s,
                                           bool enforce_guards = true);

} // namespace qfo
