// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "qfo/elements.hpp"
#include "qfo/errors.hpp"
#include "qfo/fourier.hpp"
#include "qfo/parallel.hpp"
#include "qfo/pulse_shaper.hpp"
#include "qfo/quantum_state.hpp"
#include "qfo/scenario.hpp"
#include "qfo/systems.hpp"
#include "qfo/wavepacket.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace qfo;
namespace fs = std::filesystem;
using qfo::test::Rng;

namespace {

constexpr double pi = std::numbers::pi;
const double k0_bench = 10.0 * pi; // wavelength 0.2
const Grid2D bench_grid = Grid2D::centered(256, 256, 0.05, 0.05);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome unitarity() {
  // Twice the bench grid, so fields stay inside the lens band |x| < f.
  const Grid2D g = Grid2D::centered(512, 512, 0.05, 0.05);
  const double f = fourier_matched_focal_length(g, k0_bench);
  double worst = 0.0;
  int stages = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(1000 + trial);
    SpatialField2D cur =
        rng.uniform() < 0.5
            ? make_gaussian_2d(g, {rng.uniform(0.25, 0.5), rng.uniform(0.25, 0.5), rng.uniform(-0.3, 0.3),
                                   rng.uniform(-0.3, 0.3), rng.uniform(-3, 3), rng.uniform(-3, 3)})
            : superpose({1.0, std::polar(1.0, rng.uniform(0, 2 * pi))},
                        {make_gaussian_2d(g, {0.3, 0.3, -0.4, 0.0}), make_gaussian_2d(g, {0.3, 0.3, 0.4, 0.1})});
    const int n = 4 + static_cast<int>(rng.uniform() * 3);
    for (int s = 0; s < n; ++s, ++stages) {
      const double pick = rng.uniform();
      if (pick < 0.3) {
        cur = fresnel_propagate(cur, rng.uniform(0.2, 3.2), k0_bench);
      } else if (pick < 0.55) {
        const double ax = rng.uniform(-2, 2), ay = rng.uniform(-2, 2), b = rng.uniform(-0.5, 0.5);
        const double c = rng.uniform(0, 1), q = rng.uniform(0, 4), ps = rng.uniform(0, 2 * pi);
        cur = apply_phase_mask(cur, PhaseMask::from_function(g, [=](double x, double y) {
                                 return ax * x + ay * y + b * (x * x + y * y) + c * std::sin(q * x + ps);
                               }));
      } else if (pick < 0.8) {
        cur = lens_apply(cur, {f, k0_bench});
      } else {
        const FourF sys{f, k0_bench};
        const double a = rng.uniform(0, 1), q = rng.uniform(0.5, 2), b = rng.uniform(-1, 1);
        cur = four_f_apply(cur, sys, PhaseMask::from_function(confocal_grid(g, sys), [=](double u, double v) {
                             return a * std::cos(q * u) + b * u * v;
                           }));
      }
      worst = std::max(worst, std::abs(norm2(cur) - 1.0));
    }
  }
  return {worst <= 1e-6, "20 pipelines, " + std::to_string(stages) + " stages, max |norm-1| = " + num(worst)};
}

Outcome gaussian_beam() {
  const auto t0 = std::chrono::steady_clock::now();
  const Grid2D g = Grid2D::centered(512, 512, 0.05, 0.05);
  const double W0 = 7 * g.dx; // intensity waist
  const double zr = k0_bench * W0 * W0 / 2;
  const SpatialField2D in = make_gaussian_2d(g, {W0 / std::sqrt(2.0), W0 / std::sqrt(2.0)});
  const FresnelKernel unit = FresnelKernel::make(zr / 8, k0_bench, g);
  double worst = 0.0;
  SpatialField2D cur = in;
  for (int step = 0; step <= 24; ++step) {
    if (step > 0) cur = fresnel_propagate(cur, unit);
    const double z = step * zr / 8;
    const double expect = W0 * std::sqrt(1 + std::pow(2 * z / (k0_bench * W0 * W0), 2));
    const Moments2D m = moments(cur);
    worst = std::max({worst, std::abs(2 * m.sigma_x / expect - 1), std::abs(2 * m.sigma_y / expect - 1)});
  }
  // A single step to 3 zR exercises the guard boundary directly.
  const Moments2D far = moments(fresnel_propagate(in, 3 * zr, k0_bench));
  worst = std::max(worst, std::abs(2 * far.sigma_x / (W0 * std::sqrt(10.0)) - 1));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {worst <= 5e-3 && secs < 5.0,
          "max relative waist error " + num(worst) + " over z in [0, 3 zR], " + num(secs) + " s"};
}

Outcome lens_fourier() {
  const LensOperator L{fourier_matched_focal_length(bench_grid, k0_bench), k0_bench};
  const SpatialField2D one = make_gaussian_2d(bench_grid, {0.4, 0.4, 0.1, -0.05, 2.0, 0.0});
  const SpatialField2D two = superpose({1.0, cplx{0.0, 1.0}}, {make_gaussian_2d(bench_grid, {0.3, 0.3, -0.5, 0.0}),
                                                               make_gaussian_2d(bench_grid, {0.3, 0.3, 0.5, 0.2})});
  double worst = 0.0;
  for (const auto* f : {&one, &two}) worst = std::max(worst, relative_l2(lens_apply_composed(*f, L), lens_apply(*f, L)));
  return {worst <= 1e-3, "relative L2 " + num(worst) + " at f = " + num(L.f_len)};
}

Outcome flat_four_f() {
  const Grid2D& g = bench_grid;
  const FourF sys{4.0, k0_bench};
  const PhaseMask flat = PhaseMask::from_function(confocal_grid(g, sys), [](double, double) { return 0.0; });
  const SpatialField2D ins[] = {make_gaussian_2d(g, {0.35, 0.3, 0.4, -0.2, 4.0, -2.0}),
                                superpose({1.0, 0.5}, {make_gaussian_2d(g, {0.25, 0.25, -0.6}),
                                                       make_gaussian_2d(g, {0.4, 0.3, 0.5, 0.3})})};
  const cplx e = -std::polar(1.0, 4 * k0_bench * sys.f_len);
  double worst = 0.0, worst_conv = 0.0;
  for (const auto& in : ins) {
    SpatialField2D expect = parity(in);
    for (auto& v : expect.values) v *= e;
    const SpatialField2D out = four_f_apply(in, sys, flat);
    worst = std::max({worst, phase_aligned(out, expect).relative_error, relative_l2(out, expect)});
    worst_conv = std::max(worst_conv, relative_l2(four_f_apply_convolution(in, sys, flat), expect));
  }
  return {worst <= 1e-9 && worst_conv <= 1e-9,
          "lens path " + num(worst) + ", convolution path " + num(worst_conv)};
}

Outcome grating_equation() {
  const double d = 1.0;
  const Grid2D g = Grid2D::centered(1024, 64, d, d);
  const double lambda = 4 * d, k0 = 2 * pi / lambda, period = 128 * d;
  const int R = 25;
  const GratingSpec gr =
      grating_coefficients([&](double x) { return std::fmod(x, period) < period / 2 ? 0.0 : pi; }, period, R, 1024);
  const Grid2D k = g.conjugate();
  const double kappa = gr.kappa();
  const int bins = static_cast<int>(std::lround(kappa / k.dx));
  std::string detail;
  bool ok = true;
  double worst_dir = 0.0, worst_pow = 0.0;
  for (int m : {0, 19, -37}) {
    const double ki = m * k.dx;
    const SpatialField2D in = make_gaussian_2d(g, {100 * d, 8 * d, 0, 0, ki, 0});
    double total = 0.0;
    for (const auto& v : forward_ft2(in).values) total += std::norm(v);
    const AngularField2D s = forward_ft2(grating_diffract(in, gr, k0));
    std::vector<double> col(k.nx, 0.0);
    for (int q = 0; q < k.ny; ++q)
      for (int p = 0; p < k.nx; ++p) col[p] += std::norm(s.at(p, q));
    for (int r : {-3, -1, 1, 3}) {
      // Grating equation in direction cosines.
      const double sin_r = ki / k0 + r * lambda / period;
      const int centre = static_cast<int>(std::lround((k0 * sin_r - k.x0) / k.dx));
      int best = centre;
      double power = 0.0;
      for (int p = centre - bins / 2; p < centre + bins / 2; ++p) {
        power += col[p] / total;
        if (col[p] > col[best]) best = p;
      }
      const double dir_err = std::abs(k.x(best) / k0 - sin_r) / (k.dx / k0);
      const double expect = 4 / (pi * pi * r * r);
      worst_dir = std::max(worst_dir, dir_err);
      worst_pow = std::max(worst_pow, std::abs(power / expect - 1));
      ok = ok && dir_err <= 1.0 && std::abs(power / expect - 1) <= 0.01;
    }
  }
  detail = "3 incidence angles, orders +-1 +-3: max direction error " + num(worst_dir) + " bins, max power error " +
           num(100 * worst_pow) + "%";
  return {ok, detail};
}

Outcome cyclic_orthogonality() {
  const FourF sys{3.2, k0_bench};
  const int R = 24;
  double worst_norm = 0.0, worst_off = 0.0;
  bool ok = true;
  for (int t = 0; t < 10; ++t) {
    Rng rng(500 + t);
    const double Lx = rng.uniform(0.5, 2), Ly = rng.uniform(0.5, 2);
    double a[3], b[3], c[3], d[3];
    for (int h = 0; h < 3; ++h) {
      a[h] = rng.uniform(0, 0.6);
      b[h] = rng.uniform(0, 2 * pi);
      c[h] = rng.uniform(0, 0.6);
      d[h] = rng.uniform(0, 2 * pi);
    }
    const double e = rng.uniform(0, 0.6), ep = rng.uniform(0, 2 * pi);
    const auto phi = [&](double x, double y) {
      const double u = 2 * pi * x / Lx, v = 2 * pi * y / Ly;
      double s = e * std::cos(u + v + ep);
      for (int h = 0; h < 3; ++h) s += a[h] * std::cos((h + 1) * u + b[h]) + c[h] * std::cos((h + 1) * v + d[h]);
      return s;
    };
    const LatticeResponse lat = periodic_pupil_analyze(phi, 16 * R, 16 * R, Lx, Ly, R, R, sys);
    worst_norm = std::max(worst_norm, lat.norm_defect);
    worst_off = std::max(worst_off, lat.max_offdiag);
    ok = ok && lat.certified;
  }
  return {ok && worst_norm <= 1e-6 && worst_off <= 1e-6,
          "10 pupils: max |sum |p|^2 - 1| = " + num(worst_norm) + ", max off-diagonal " + num(worst_off)};
}

Outcome inverse_four_f() {
  const Grid2D& g = bench_grid;
  const FourF sys{fourier_matched_focal_length(g, k0_bench), k0_bench};
  const SpatialField2D in = make_gaussian_2d(g, {0.3, 0.3, 0.2, -0.1, 1.5, 0.5});
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Rng rng(700 + t);
    const double a1 = rng.uniform(0.2, 1), q1 = rng.uniform(0.5, 2), p1 = rng.uniform(0, 2 * pi);
    const double a2 = rng.uniform(0.2, 1), q2 = rng.uniform(0.5, 2), p2 = rng.uniform(0, 2 * pi);
    const double b = rng.uniform(-2, 2);
    const PhaseMask p = PhaseMask::from_function(confocal_grid(g, sys), [=](double u, double v) {
      return a1 * std::sin(q1 * u + p1) + a2 * std::cos(q2 * v + p2) + b * (u * u + v * v);
    });
    const SpatialField2D back = four_f_apply(four_f_apply(in, sys, p), sys, inverse_pupil(p));
    worst = std::max(worst, phase_aligned(back, in).relative_error);
  }
  return {worst <= 1e-3, "5 pupils, max phase-aligned relative L2 " + num(worst)};
}

PulseShaperSpec shaper(int R, double amplitude) {
  PulseShaperSpec s;
  s.pupil = grating_coefficients([=](double x) { return amplitude * std::sin(2 * pi * x); }, 1.0, R, 32 * R);
  s.f_len = 10.0;
  s.c = 1.0;
  return s;
}

constexpr double j0_zero = 2.404825557695773;

Outcome omega_exact() {
  const int R = 5;
  const PulseShaperSpec s = shaper(R, j0_zero);
  const double wmax = 1.0, x1max = lattice_constant(s, wmax);
  double worst = 0.0;
  bool ok = true;
  for (int r = 1; r <= R; ++r)
    for (int j = 0; j < 20; ++j) {
      const double w = wmax * (1.0 - 0.19 * j / 19.0); // within omega_max/R of omega_max
      const auto om = omega_map(r * lattice_constant(s, w), wmax, R, x1max);
      if (!om) {
        ok = false;
        continue;
      }
      const double ulp = std::nextafter(w, 2 * w) - w;
      worst = std::max(worst, std::abs(*om - w) / ulp);
    }
  for (double x : {0.0, 0.3 * x1max, std::nextafter(x1max, 0.0), -0.7 * x1max}) ok = ok && !omega_map(x, wmax, R, x1max);
  return {ok && worst <= 4.0, "100 (r, omega) points, max error " + num(worst) + " ulp; none below x1(omega_max)"};
}

Outcome shaper_gate() {
  const PulseShaperSpec s = shaper(4, j0_zero);
  const SpectralField1D wide = make_rect_spectrum(1024, 0.7, 1.0, 300);
  const SpectralField1D narrow = make_rect_spectrum(1024, 0.8, 1.0, 200);
  const ShaperCertificate bad = validate_shaper(s, wide.support());
  const ShaperCertificate good = validate_shaper(s, narrow.support());
  bool threw = false;
  try {
    pulse_shaper_apply(wide, s);
  } catch (const GuardViolation&) {
    threw = true;
  }
  return {!bad.passed && good.passed && threw,
          "domega = 0.3: margin " + num(bad.delta_omega_margin) + (bad.passed ? " accepted" : " rejected") +
              "; domega = 0.2: margin " + num(good.delta_omega_margin) + (good.passed ? " accepted" : " rejected")};
}

Outcome shaper_two_path() {
  PulseShaperSpec s = shaper(8, j0_zero);
  const SpectralField1D in = make_rect_spectrum(1024, 0.9, 1.0, 248);
  const SpectralPhase thetas[] = {SpectralPhase::zero(), SpectralPhase::linear(25.0),
                                  SpectralPhase::random_chips(0.9, 1.0, 31, 20240917)};
  double worst_l2 = 0.0, worst_res = 0.0;
  for (const auto& th : thetas) {
    s.theta = th;
    const ShaperResult r = pulse_shaper_apply(in, s, 0);
    worst_l2 = std::max(worst_l2, r.relative_l2);
    worst_res = std::max(worst_res, r.simulated.residual);
  }
  return {worst_l2 <= 1e-3 && worst_res <= 1e-4,
          "theta in {0, linear, 31 chips}: max relative L2 " + num(worst_l2) + ", max residual " + num(worst_res)};
}

Outcome statistics_invariance() {
  const FockRepr reprs[] = {Coherent{1.3}, Fock{3}};
  const SpatialField2D spatial = make_gaussian_2d(bench_grid, {0.3, 0.3});
  const double f = fourier_matched_focal_length(bench_grid, k0_bench);
  const FourF sys{f, k0_bench};
  const PhaseMask pupil =
      PhaseMask::from_function(confocal_grid(bench_grid, sys), [](double u, double) { return std::sin(pi * u); });
  PulseShaperSpec sh = shaper(8, j0_zero);
  sh.theta = SpectralPhase::random_chips(0.9, 1.0, 31, 3);
  const SpectralField1D spectrum = make_rect_spectrum(1024, 0.9, 1.0, 248);

  bool ok = true;
  int benches = 0;
  for (const auto& r : reprs) {
    const PhotonDistribution before = photon_number_distribution(r);
    const QuantumLightState sp(r, spatial), sv(r, spectrum);
    const QuantumLightState outs[] = {lens_apply_state(sp, {f, k0_bench}), four_f_apply_state(sp, sys, pupil),
                                      pulse_shaper_apply_state(sv, sh)};
    for (const auto& o : outs) {
      ++benches;
      ok = ok && photon_number_distribution(o.repr).p == before.p && o.repr == r;
      if (const auto* c = std::get_if<Coherent>(&o.repr)) ok = ok && c->alpha == cplx{1.3};
    }
  }
  return {ok, std::to_string(benches) + " bench runs, distributions element-wise identical, coherent alpha = 1.3 kept"};
}

Outcome fraunhofer_limit() {
  const Grid2D g = Grid2D::centered(256, 256, 0.05, 0.05);
  const SpatialField2D in = make_gaussian_2d(g, {0.2, 0.25, 0.05, -0.03});
  const double z = 50 * fraunhofer_threshold(in, k0_bench);
  const SpatialField2D fr = fresnel_transform(in, z, k0_bench);
  const SpatialField2D fh = fraunhofer_propagate(in, z, k0_bench);
  const double err = relative_l2(fr, fh);
  return {err <= 0.02, "z = " + num(z) + " (50x threshold), relative L2 " + num(err)};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

Outcome determinism() {
  const fs::path file = fs::path(QFO_SCENARIO_DIR) / "pulse_shaper_bench.yaml";
  const fs::path base = fs::temp_directory_path() / "qfo-acceptance-determinism";
  fs::remove_all(base);
  const int many = std::max(4, resolve_threads(0));
  std::ostringstream log, err;
  RunOptions a{base / "t1", std::nullopt, 1, false};
  RunOptions b{base / "tn", std::nullopt, many, false};
  const int ca = run_scenario(file, a, log, err), cb = run_scenario(file, b, log, err);
  if (ca != exit_ok || cb != exit_ok) return {false, "scenario exit codes " + std::to_string(ca) + ", " + std::to_string(cb) + ": " + err.str()};
  int files = 0;
  bool same = true;
  for (const auto& e : fs::directory_iterator(a.out_dir)) {
    ++files;
    const fs::path other = b.out_dir / e.path().filename();
    same = same && fs::exists(other) && slurp(e.path()) == slurp(other);
  }
  same = same && files == std::distance(fs::directory_iterator(b.out_dir), fs::directory_iterator{});
  fs::remove_all(base);
  return {same && files > 0, std::to_string(files) + " files byte-identical at 1 and " + std::to_string(many) + " threads"};
}

} // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"unitarity of random pipelines", unitarity},
      {"Gaussian beam width", gaussian_beam},
      {"lens equals Fourier transform", lens_fourier},
      {"flat-pupil 4f equals parity", flat_four_f},
      {"grating equation and order powers", grating_equation},
      {"cyclic orthogonality", cyclic_orthogonality},
      {"inverse 4f", inverse_four_f},
      {"Omega map exactness", omega_exact},
      {"shaper validity gate", shaper_gate},
      {"pulse shaper two-path equality", shaper_two_path},
      {"photon statistics invariance", statistics_invariance},
      {"Fraunhofer consistency", fraunhofer_limit},
      {"determinism across thread counts", determinism},
  };
  int failed = 0, idx = 0;
  for (const auto& [name, run] : criteria) {
    ++idx;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", idx - failed, idx);
  return failed == 0 ? 0 : 1;
}
