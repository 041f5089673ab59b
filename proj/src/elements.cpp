#include "qfo/elements.hpp"

#include "qfo/errors.hpp"
#include "qfo/fourier.hpp"

#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qfo {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const cplx I{0.0, 1.0};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Fraction of spectral power sitting at |k| >= k0.
double evanescent_fraction(const AngularField2D& s, double k0) {
  double total = 0.0, outside = 0.0;
  for (int q = 0; q < s.kgrid.ny; ++q)
    for (int p = 0; p < s.kgrid.nx; ++p) {
      const double kx = s.kgrid.x(p), ky = s.kgrid.y(q);
      const double w = std::norm(s.at(p, q));
      total += w;
      if (kx * kx + ky * ky >= k0 * k0) outside += w;
    }
  return total > 0.0 ? outside / total : 0.0;
}

void check_band_limit(const AngularField2D& s, double k0) {
  const double frac = evanescent_fraction(s, k0);
  if (frac > 1e-12)
    throw GuardViolation("band-limit", "fraction " + fmt(frac) + " of spectral power at |k| >= k0",
                         "input spectrum confined to |k| < k0 = " + fmt(k0));
}

Grid2D far_grid(const Grid2D& in, double z, double k0) {
  const Grid2D k = in.conjugate();
  return Grid2D{in.nx, in.ny, z * k.dx / k0, z * k.dy / k0, z * k.x0 / k0, z * k.y0 / k0};
}

/// (-i k0/z) e^{i k0 z} e^{i k0 r^2/2z} G(k0 r/z) on the far grid.
SpatialField2D far_field(const AngularField2D& g, double z, double k0) {
  SpatialField2D out(far_grid(g.spatial, z, k0));
  const cplx pre = -I * (k0 / z) * std::polar(1.0, k0 * z);
  for (int j = 0; j < out.grid.ny; ++j) {
    const double y = out.grid.y(j);
    for (int i = 0; i < out.grid.nx; ++i) {
      const double x = out.grid.x(i);
      out.at(i, j) = pre * std::polar(1.0, k0 * (x * x + y * y) / (2.0 * z)) * g.at(i, j);
    }
  }
  return out;
}

} // namespace

FresnelKernel FresnelKernel::make(double z, double k0, const Grid2D& spatial) {
  if (!(k0 > 0.0)) throw InvalidArgument("k0 must be positive");
  spatial.validate();
  FresnelKernel kern{z, k0, spatial, {}};
  const Grid2D k = spatial.conjugate();
  kern.transfer.resize(k.size());
  for (int q = 0; q < k.ny; ++q)
    for (int p = 0; p < k.nx; ++p) {
      const double kx = k.x(p), ky = k.y(q);
      kern.transfer[k.index(p, q)] = std::polar(1.0, k0 * z - z * (kx * kx + ky * ky) / (2.0 * k0));
    }
  return kern;
}

double fresnel_max_z(const Grid2D& g, double k0) {
  return k0 * std::min(g.nx * g.dx * g.dx, g.ny * g.dy * g.dy) / two_pi;
}

SpatialField2D fresnel_propagate(const SpatialField2D& f, double z, double k0, bool enforce_guards) {
  if (!(k0 > 0.0)) throw InvalidArgument("k0 must be positive");
  AngularField2D s = forward_ft2(f);
  if (enforce_guards) {
    check_band_limit(s, k0);
    const double zmax = fresnel_max_z(f.grid, k0);
    if (std::abs(z) > zmax * (1.0 + 1e-12))
      throw GuardViolation("fresnel-aliasing", "|z| = " + fmt(std::abs(z)) + " exceeds the transfer-function limit",
                           "|z| <= " + fmt(zmax));
  }
  const FresnelKernel kern = FresnelKernel::make(z, k0, f.grid);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= kern.transfer[i];
  return inverse_ft2(s);
}

SpatialField2D fresnel_propagate(const SpatialField2D& f, const FresnelKernel& kern) {
  if (!kern.spatial.matches(f.grid)) throw GridMismatch("fresnel kernel built for a different grid");
  AngularField2D s = forward_ft2(f);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] *= kern.transfer[i];
  return inverse_ft2(s);
}

SpatialField2D fresnel_impulse_response(double z, double k0, const Grid2D& grid) {
  if (z == 0.0) throw InvalidArgument("impulse response undefined at z = 0");
  if (!(k0 > 0.0)) throw InvalidArgument("k0 must be positive");
  SpatialField2D h(grid);
  const cplx pre = -I * (k0 / z) * std::polar(1.0, k0 * z);
  for (int j = 0; j < grid.ny; ++j) {
    const double y = grid.y(j);
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.x(i);
      h.at(i, j) = pre * std::polar(1.0, k0 * (x * x + y * y) / (2.0 * z));
    }
  }
  return h;
}

SpatialField2D fresnel_propagate_ir(const SpatialField2D& f, double z, double k0) {
  if (z == 0.0) throw InvalidArgument("impulse response undefined at z = 0");
  if (!(k0 > 0.0)) throw InvalidArgument("k0 must be positive");
  if (!f.grid.lattice_aligned()) throw GridMismatch("impulse-response path needs a lattice-aligned grid");
  // Linear convolution on a doubled grid. The chirp's local frequency is
  // k0 |x| / |z|; it is tapered (raised cosine) from half the Nyquist
  // frequency to zero at Nyquist.
  const Grid2D& g = f.grid;
  const Grid2D pad{2 * g.nx, 2 * g.ny, g.dx, g.dy, g.x0 - 0.5 * g.nx * g.dx, g.y0 - 0.5 * g.ny * g.dy};
  const int ox = g.nx / 2, oy = g.ny / 2;
  SpatialField2D a(pad);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) a.at(i + ox, j + oy) = f.at(i, j);
  const double cx = std::numbers::pi * std::abs(z) / (k0 * g.dx);
  const double cy = std::numbers::pi * std::abs(z) / (k0 * g.dy);
  auto taper = [](double u) { // u = |x| / cut
    if (u <= 0.5) return 1.0;
    if (u >= 1.0) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (2.0 * u - 1.0)));
  };
  SpatialField2D h = fresnel_impulse_response(z, k0, pad);
  for (int j = 0; j < pad.ny; ++j)
    for (int i = 0; i < pad.nx; ++i) h.at(i, j) *= taper(std::abs(pad.x(i)) / cx) * taper(std::abs(pad.y(j)) / cy);
  const SpatialField2D c = convolve2(a, h);
  SpatialField2D out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.at(i, j) = c.at(i + ox, j + oy);
  return out;
}

SpatialField2D fresnel_transform(const SpatialField2D& f, double z, double k0, bool enforce_guards) {
  if (!(z > 0.0) || !(k0 > 0.0)) throw InvalidArgument("fresnel_transform needs z > 0 and k0 > 0");
  if (enforce_guards) {
    const double zmin = fresnel_max_z(f.grid, k0);
    if (z < zmin * (1.0 - 1e-12))
      throw GuardViolation("fresnel-chirp", "z = " + fmt(z) + " under-samples the input chirp", "z >= " + fmt(zmin));
  }
  SpatialField2D c = f;
  for (int j = 0; j < f.grid.ny; ++j) {
    const double y = f.grid.y(j);
    for (int i = 0; i < f.grid.nx; ++i) {
      const double x = f.grid.x(i);
      c.at(i, j) *= std::polar(1.0, k0 * (x * x + y * y) / (2.0 * z));
    }
  }
  return far_field(forward_ft2(c), z, k0);
}

double fraunhofer_threshold(const SpatialField2D& f, double k0) {
  const Moments2D m = moments(f);
  const double Dx = 2.0 * (std::abs(m.cx) + 2.0 * m.sigma_x);
  const double Dy = 2.0 * (std::abs(m.cy) + 2.0 * m.sigma_y);
  return k0 / 8.0 * (Dx * Dx + Dy * Dy);
}

SpatialField2D fraunhofer_propagate(const SpatialField2D& f, double z, double k0, bool enforce_guards) {
  if (!(z > 0.0) || !(k0 > 0.0)) throw InvalidArgument("fraunhofer_propagate needs z > 0 and k0 > 0");
  if (enforce_guards) {
    const double zmin = 20.0 * fraunhofer_threshold(f, k0);
    if (z < zmin)
      throw GuardViolation("far-field", "z = " + fmt(z) + " is inside the near field", "z >= " + fmt(zmin));
  }
  return far_field(forward_ft2(f), z, k0);
}

SpatialField2D angular_spectrum_propagate(const SpatialField2D& f, double z, double k0) {
  AngularField2D s = forward_ft2(f);
  for (int q = 0; q < s.kgrid.ny; ++q)
    for (int p = 0; p < s.kgrid.nx; ++p) {
      const double kx = s.kgrid.x(p), ky = s.kgrid.y(q);
      const double kz2 = k0 * k0 - kx * kx - ky * ky;
      s.at(p, q) *= kz2 > 0.0 ? std::polar(1.0, std::sqrt(kz2) * z) : cplx{};
    }
  return inverse_ft2(s);
}

PhaseMask PhaseMask::from_phase(const Grid2D& grid, std::vector<double> phi) {
  grid.validate();
  if (phi.size() != grid.size()) throw InvalidArgument("phase sample count does not match grid");
  PhaseMask m{grid, std::move(phi), {}};
  m.factor.resize(m.phi.size());
  for (std::size_t i = 0; i < m.phi.size(); ++i) m.factor[i] = std::polar(1.0, -m.phi[i]);
  return m;
}

PhaseMask PhaseMask::from_function(const Grid2D& grid, const std::function<double(double, double)>& phi) {
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) v[grid.index(i, j)] = phi(grid.x(i), grid.y(j));
  return from_phase(grid, std::move(v));
}

SpatialField2D apply_phase_mask(const SpatialField2D& f, const PhaseMask& m) {
  if (!f.grid.matches(m.grid)) throw GridMismatch("phase mask sampled on a different grid");
  SpatialField2D out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= m.factor[i];
  return out;
}

PhaseMask lens_phase(double f_len, double k0, const Grid2D& grid) {
  if (f_len == 0.0 || !std::isfinite(f_len)) throw InvalidArgument("focal length must be finite and non-zero");
  const double a = k0 / (2.0 * f_len);
  return PhaseMask::from_function(grid, [a](double x, double y) { return a * (x * x + y * y); });
}

double GratingSpec::kappa() const { return two_pi / period; }

double GratingSpec::power() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return s;
}

GratingSpec grating_coefficients(const std::vector<double>& phase_samples, double period, int R) {
  if (!(period > 0.0)) throw InvalidArgument("grating period must be positive");
  if (R < 0) throw InvalidArgument("retained order count must be non-negative");
  const auto n = static_cast<int>(phase_samples.size());
  if (n < 16 * std::max(R, 1))
    throw InvalidArgument("under-sampled period: " + std::to_string(n) + " samples for R = " + std::to_string(R) +
                          ", need " + std::to_string(16 * std::max(R, 1)));
  std::vector<cplx> buf(n);
  for (int j = 0; j < n; ++j) buf[j] = std::polar(1.0, -phase_samples[j]);
  detail::fft1_inplace(buf, -1);
  GratingSpec g;
  g.period = period;
  g.R = R;
  g.coeffs.resize(2 * R + 1);
  std::vector<bool> kept(n, false);
  for (int r = -R; r <= R; ++r) {
    const int m = ((r % n) + n) % n;
    g.coeffs[r + R] = buf[m] / static_cast<double>(n);
    kept[m] = true;
  }
  for (int m = 0; m < n; ++m)
    if (!kept[m]) g.tail += std::norm(buf[m] / static_cast<double>(n));
  return g;
}

GratingSpec grating_coefficients(const std::function<double(double)>& phi, double period, int R, int samples) {
  std::vector<double> v(samples > 0 ? samples : 0);
  for (int j = 0; j < samples; ++j) v[j] = phi(period * j / samples);
  return grating_coefficients(v, period, R);
}

SpatialField2D grating_diffract(const SpatialField2D& f, const GratingSpec& g, double k0) {
  const AngularField2D s = forward_ft2(f);
  const Grid2D& k = s.kgrid;
  std::vector<double> column(k.nx, 0.0);
  double total = 0.0;
  for (int q = 0; q < k.ny; ++q)
    for (int p = 0; p < k.nx; ++p) column[p] += std::norm(s.at(p, q));
  for (double c : column) total += c;
  int lo = k.nx, hi = -1;
  for (int p = 0; p < k.nx; ++p)
    if (column[p] > 1e-12 * total) {
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
  if (hi >= 0) {
    const double shift = g.R * g.kappa();
    const double kmin = k.x(lo) - shift, kmax = k.x(hi) + shift;
    const double nyq = -k.x0 - k.dx;
    if (kmin < k.x0 || kmax > nyq)
      throw GuardViolation("grating-nyquist", "order " + std::to_string(g.R) + " leaves the k-grid",
                           "|kx| + R kappa <= " + fmt(nyq));
    if (std::max(std::abs(kmin), std::abs(kmax)) >= k0)
      throw GuardViolation("band-limit", "diffracted orders reach |kx| >= k0", "|kx| + R kappa < " + fmt(k0));
  }
  SpatialField2D out = f;
  const double kappa = g.kappa();
  std::vector<cplx> row(f.grid.nx);
  for (int i = 0; i < f.grid.nx; ++i) {
    cplx m{};
    for (int r = -g.R; r <= g.R; ++r) m += g.g(r) * std::polar(1.0, r * kappa * f.grid.x(i));
    row[i] = m;
  }
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) out.at(i, j) *= row[i];
  return out;
}

} // namespace qfo
