#include "qfo/errors.hpp"
#include "qfo/fourier.hpp"
#include "qfo/pulse_shaper.hpp"
#include "qfo/wavepacket.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qfo;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double j0_zero = 2.404825557695773;

PulseShaperSpec make_spec(int R, double amplitude, SpectralPhase theta = SpectralPhase::zero()) {
  PulseShaperSpec s;
  s.pupil = grating_coefficients([=](double x) { return amplitude * std::sin(2 * pi * x); }, 1.0, R, 32 * R);
  s.f_len = 10.0;
  s.c = 1.0;
  s.theta = std::move(theta);
  return s;
}

int peak(const TemporalField1D& t) {
  int best = 0;
  for (int i = 1; i < t.n; ++i)
    if (std::norm(t.values[i]) > std::norm(t.values[best])) best = i;
  return best;
}

} // namespace

TEST_CASE("spectral phases") {
  CHECK(SpectralPhase::zero()(0.7) == 0.0);
  CHECK(SpectralPhase::linear(3.0)(0.5) == doctest::Approx(1.5));
  const SpectralPhase c = SpectralPhase::chips(0.0, 1.0, {0.1, 0.2, 0.3, 0.4});
  CHECK(c(0.1) == 0.1);
  CHECK(c(0.3) == 0.2);
  CHECK(c(0.99) == 0.4);
  const SpectralPhase a = SpectralPhase::random_chips(0.9, 1.0, 31, 42), b = SpectralPhase::random_chips(0.9, 1.0, 31, 42);
  CHECK(a.chip_phases == b.chip_phases);
  for (double p : a.chip_phases) CHECK((p >= 0.0 && p < 2 * pi));
  CHECK(SpectralPhase::random_chips(0.9, 1.0, 31, 43).chip_phases != a.chip_phases);
  CHECK_THROWS_AS(SpectralPhase::chips(1.0, 1.0, {0.0}), InvalidArgument);
}

TEST_CASE("lattice constant and Omega map") {
  const PulseShaperSpec s = make_spec(4, j0_zero);
  CHECK(lattice_constant(s, 0.5) == doctest::Approx(10.0 * 2 * pi / 0.5));
  const double x1 = lattice_constant(s, 1.0);
  CHECK_FALSE(omega_map(0.0, 1.0, 4, x1));
  CHECK_FALSE(omega_map(0.99 * x1, 1.0, 4, x1));
  CHECK(*omega_map(x1, 1.0, 4, x1) == 1.0);
  CHECK(*omega_map(-2 * x1, 1.0, 4, x1) == 1.0);
  // Between copies: floor(|x|/x1) x1 omega_max / |x|.
  CHECK(*omega_map(2.5 * x1, 1.0, 4, x1) == doctest::Approx(2.0 / 2.5));
  // Beyond R the order is capped.
  CHECK(*omega_map(7.0 * x1, 1.0, 4, x1) == doctest::Approx(4.0 / 7.0));
}

TEST_CASE("validity certificate") {
  const SpectralField1D band = make_rect_spectrum(1024, 0.8, 1.0, 200);
  const ShaperCertificate ok = validate_shaper(make_spec(4, j0_zero), band.support());
  CHECK(ok.passed);
  CHECK(ok.delta_omega == doctest::Approx(0.2));
  CHECK(ok.delta_omega_limit == doctest::Approx(0.25));
  CHECK(ok.p0_abs <= 1e-12);
  CHECK(ok.report().find("FAIL") == std::string::npos);

  const ShaperCertificate dc = validate_shaper(make_spec(4, 1.0), band.support());
  CHECK_FALSE(dc.no_dc);
  CHECK(dc.p0_abs == doctest::Approx(std::cyl_bessel_j(0, 1.0)).epsilon(1e-12));
  try {
    pulse_shaper_apply(band, make_spec(4, 1.0));
    FAIL("expected a guard violation");
  } catch (const GuardViolation& g) {
    CHECK(g.guard() == "shaper-no-dc");
  }
  try {
    pulse_shaper_apply(make_rect_spectrum(1024, 0.7, 1.0, 300), make_spec(4, j0_zero));
    FAIL("expected a guard violation");
  } catch (const GuardViolation& g) {
    CHECK(g.guard() == "shaper-separation");
  }
  CHECK_NOTHROW(pulse_shaper_apply(band, make_spec(4, 1.0), 1, false));
}

TEST_CASE("zero mask delays the pulse by the 8f transit time") {
  const SpectralField1D in = make_gaussian_spectrum(2048, 0.002, 0.0, 2.0, 0.05);
  const PulseShaperSpec s = make_spec(8, j0_zero);
  const TemporalField1D a = spectral_to_temporal(in), b = spectral_to_temporal(pulse_shaper_closed_form(in, s));
  const double transit = 8 * s.f_len / s.c;
  CHECK(b.coord(peak(b)) - a.coord(peak(a)) == doctest::Approx(transit).epsilon(0.5 * b.pitch / transit));
  // Linear mask theta = omega tau advances it by tau.
  const PulseShaperSpec lin = make_spec(8, j0_zero, SpectralPhase::linear(30.0));
  const TemporalField1D c = spectral_to_temporal(pulse_shaper_closed_form(in, lin));
  CHECK(c.coord(peak(c)) - a.coord(peak(a)) == doctest::Approx(transit - 30.0).epsilon(b.pitch / 50.0));
}

TEST_CASE("simulated path matches the closed form and is thread independent") {
  const SpectralField1D in = make_rect_spectrum(512, 0.9, 1.0, 124);
  const PulseShaperSpec s = make_spec(8, j0_zero, SpectralPhase::random_chips(0.9, 1.0, 31, 9));
  const ShaperResult r = pulse_shaper_apply(in, s, 1);
  CHECK(r.certificate.passed);
  CHECK(r.relative_l2 <= 1e-3);
  CHECK(r.simulated.residual <= 1e-4);
  CHECK(r.simulated.transmitted == doctest::Approx(1.0).epsilon(1e-6));
  const ShaperSimulation many = pulse_shaper_simulate(in, s, 5);
  CHECK(many.output.values == r.simulated.output.values);
  CHECK(many.residual == r.simulated.residual);
  CHECK_THROWS_AS(pulse_shaper_simulate(in, [&] { auto t = s; t.spot_samples = 10; return t; }(), 1), InvalidArgument);
}

TEST_CASE("a pupil with a zero order leaks power out of the single mode") {
  const SpectralField1D in = make_rect_spectrum(512, 0.9, 1.0, 124);
  const PulseShaperSpec s = make_spec(8, 1.0, SpectralPhase::random_chips(0.9, 1.0, 31, 9));
  const ShaperResult r = pulse_shaper_apply(in, s, 1, false);
  CHECK(r.relative_l2 > 1e-2);
}
