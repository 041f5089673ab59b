#include "support.hpp"

#include "qfo/errors.hpp"
#include "qfo/fourier.hpp"
#include "qfo/systems.hpp"
#include "qfo/wavepacket.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace qfo;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};
const double k0 = 10 * pi;
const Grid2D grid = Grid2D::centered(256, 256, 0.05, 0.05);

SpatialField2D scaled(SpatialField2D f, cplx c) {
  for (auto& v : f.values) v *= c;
  return f;
}

} // namespace

TEST_CASE("lens output grid and matched focal length") {
  const double f = fourier_matched_focal_length(grid, k0);
  CHECK(f == doctest::Approx(k0 * 256 * 0.0025 / (2 * pi)));
  const Grid2D out = lens_output_grid(grid, {f, k0});
  CHECK(out.dx == doctest::Approx(grid.dx));
  CHECK(out.x0 == doctest::Approx(grid.x0));
  const Grid2D other = lens_output_grid(grid, {2.0, k0});
  CHECK(other.dx == doctest::Approx(2.0 * grid.conjugate().dx / k0));
  CHECK_THROWS_AS(fourier_matched_focal_length(Grid2D::centered(64, 32, 0.1, 0.1), k0), InvalidArgument);
  CHECK_THROWS_AS(LensOperator({-1.0, k0}).validate(), InvalidArgument);
}

TEST_CASE("lens maps a Gaussian of width w to width f/(k0 w)") {
  const LensOperator L{5.0, k0};
  const double w = 0.35;
  const SpatialField2D out = lens_apply(make_gaussian_2d(grid, {w, w}), L);
  const double wf = L.f_len / (k0 * w);
  const SpatialField2D expect =
      scaled(make_gaussian_2d(out.grid, {wf, wf}), -I * std::polar(1.0, 2 * k0 * L.f_len));
  CHECK(relative_l2(out, expect) <= 1e-9);
  CHECK(std::abs(norm2(out) - 1.0) <= 1e-12);
}

TEST_CASE("tilt maps to a focal-plane offset f kx/k0") {
  const double f = fourier_matched_focal_length(grid, k0);
  const double kx = 16 * grid.conjugate().dx;
  const SpatialField2D out = lens_apply(make_gaussian_2d(grid, {0.4, 0.4, 0, 0, kx, 0}), {f, k0});
  CHECK(moments(out).cx == doctest::Approx(f * kx / k0).epsilon(1e-9));
}

TEST_CASE("two lenses give the parity operator") {
  const LensOperator L{4.0, k0};
  const SpatialField2D in = make_gaussian_2d(grid, {0.3, 0.4, 0.3, -0.2, 2.0, 1.0});
  const SpatialField2D out = lens_apply(lens_apply(in, L), L);
  CHECK(out.grid.matches(grid));
  CHECK(relative_l2(out, scaled(parity(in), -std::polar(1.0, 4 * k0 * L.f_len))) <= 1e-12);
}

TEST_CASE("lens guards") {
  const double f = fourier_matched_focal_length(grid, k0);
  try {
    lens_apply(qfo::test::random_field(grid, 2), {f, 1e4});
    FAIL("expected a guard violation");
  } catch (const GuardViolation& g) {
    CHECK(g.guard() == "lens-support");
    CHECK(std::string(g.what()).find("512x512") != std::string::npos);
  }
  CHECK_THROWS_AS(lens_apply(qfo::test::random_field(grid, 2), {f, k0}), GuardViolation);
  CHECK_NOTHROW(lens_apply(qfo::test::random_field(grid, 2), {f, k0}, false));
}

TEST_CASE("composed lens path off the matched grid lands elsewhere") {
  const SpatialField2D a = lens_apply_composed(make_gaussian_2d(grid, {0.3, 0.3}), {3.0, k0});
  CHECK(a.grid.matches(grid));
  CHECK(std::abs(norm2(a) - 1.0) <= 1e-12);
}

TEST_CASE("4f: linear pupil displaces the parity image by -f a/k0") {
  const FourF sys{fourier_matched_focal_length(grid, k0), k0};
  const double a = 8.0;
  const PhaseMask ramp = PhaseMask::from_function(confocal_grid(grid, sys), [=](double u, double) { return a * u; });
  const SpatialField2D in = make_gaussian_2d(grid, {0.3, 0.3, 0.4, 0.1});
  const SpatialField2D out = four_f_apply(in, sys, ramp);
  const SpatialField2D expect =
      scaled(translate(parity(in), -sys.f_len * a / k0, 0.0), -std::polar(1.0, 4 * k0 * sys.f_len));
  CHECK(relative_l2(out, expect) <= 1e-9);
  CHECK(moments(out).cx == doctest::Approx(-0.4 - sys.f_len * a / k0).epsilon(1e-9));
}

TEST_CASE("4f: lens path equals the convolution path") {
  const FourF sys{3.0, k0};
  const Grid2D cg = confocal_grid(grid, sys);
  const PhaseMask pupil = PhaseMask::from_function(
      cg, [](double u, double v) { return 0.7 * std::sin(1.3 * u) + 0.4 * std::cos(2.1 * v + 0.3) + 0.8 * u * v; });
  const SpatialField2D in = make_gaussian_2d(grid, {0.3, 0.35, 0.2, -0.3, 1.0, 0.0});
  const SpatialField2D a = four_f_apply(in, sys, pupil);
  CHECK(relative_l2(four_f_apply_convolution(in, sys, pupil), a) <= 1e-9);
  CHECK(std::abs(norm2(a) - 1.0) <= 1e-12);
  const SpatialField2D h = four_f_impulse_response(grid, sys, pupil);
  CHECK(h.grid.matches(grid));
  CHECK_THROWS_AS(four_f_apply(in, sys, PhaseMask::from_function(grid, [](double, double) { return 0.0; })),
                  GridMismatch);
}

TEST_CASE("inverse pupil") {
  const FourF sys{fourier_matched_focal_length(grid, k0), k0};
  const PhaseMask p =
      PhaseMask::from_function(confocal_grid(grid, sys), [](double u, double v) { return u * u * u + 2 * v + 0.1; });
  const PhaseMask q = inverse_pupil(p);
  const Grid2D& g = p.grid;
  for (int j = 1; j < g.ny; j += 13)
    for (int i = 1; i < g.nx; i += 11)
      CHECK(q.phi[g.index(i, j)] == doctest::Approx(-p.phi[g.index(g.nx - i, g.ny - j)]));
  const SpatialField2D in = make_gaussian_2d(grid, {0.3, 0.3, -0.2});
  CHECK(relative_l2(four_f_apply(four_f_apply(in, sys, p), sys, q), in) <= 1e-9);
}

TEST_CASE("periodic pupil: sinusoid coefficients and lattice constant") {
  const FourF sys{6.4, k0};
  const double A = 1.1, L = 1.6;
  const LatticeResponse lat = periodic_pupil_analyze([=](double x, double) { return A * std::sin(2 * pi * x / L); }, 256,
                                                     16, L, 1.0, 10, 0, sys);
  CHECK(lat.x1 == doctest::Approx(sys.f_len * 2 * pi / L / k0));
  for (int r = -10; r <= 10; ++r) {
    const double j = std::cyl_bessel_j(std::abs(r), A) * ((r < 0 && r % 2) ? -1.0 : 1.0);
    CHECK(std::abs(lat.weight(r, 0) - j * (r % 2 ? -1.0 : 1.0)) <= 1e-12);
  }
  CHECK(lat.certified);
  CHECK(lat.weight(11, 0) == cplx{});
}

TEST_CASE("periodic pupil: guards") {
  const FourF sys{6.4, k0};
  auto binary = [](double x, double) { return x < 0.5 ? 0.0 : pi; };
  CHECK_THROWS_AS(periodic_pupil_analyze(binary, 256, 16, 1.0, 1.0, 15, 0, sys), GuardViolation);
  const LatticeResponse loose = periodic_pupil_analyze(binary, 16384, 16, 1.0, 1.0, 1023, 0, sys);
  CHECK_FALSE(loose.certified);
  CHECK(loose.norm_defect < 1e-3);
  CHECK_THROWS_AS(periodic_pupil_analyze(binary, 64, 16, 1.0, 1.0, 8, 0, sys), InvalidArgument);
}

TEST_CASE("periodic 4f: lattice of copies equals the full 4f path") {
  const Grid2D g = Grid2D::centered(512, 512, 0.05, 0.05);
  const FourF sys{fourier_matched_focal_length(g, k0), k0};
  // Period dividing the confocal window keeps the sampled pupil periodic.
  const double L = 1.6;
  auto phi = [=](double u, double v) { return 0.5 * std::sin(2 * pi * u / L) + 0.3 * std::cos(2 * pi * v / L); };
  const LatticeResponse lat = periodic_pupil_analyze(phi, 256, 256, L, L, 12, 12, sys);
  const SpatialField2D in = make_gaussian_2d(g, {0.2, 0.2, 0.1, -0.05});
  const PeriodicOutput out = four_f_periodic_apply(in, lat, sys);
  const SpatialField2D full = four_f_apply(in, sys, PhaseMask::from_function(confocal_grid(g, sys), phi));
  CHECK(relative_l2(out.field, full) <= 1e-9);
  CHECK(out.width_margin_x == doctest::Approx(lat.x1 - 4 * 0.2 / std::sqrt(2.0)));
  CHECK(out.orthogonality_certified);
  CHECK(out.max_copy_overlap == doctest::Approx(std::exp(-lat.x1 * lat.x1 / (4 * 0.04))).epsilon(1e-6));
  CHECK(std::abs(norm2(out.field) - 1.0) <= 1e-9);
  // Wide input: copies overlap, certificate withdrawn.
  const PeriodicOutput wide = four_f_periodic_apply(make_gaussian_2d(g, {0.6, 0.6}), lat, sys);
  CHECK_FALSE(wide.orthogonality_certified);
}
