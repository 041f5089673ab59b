#include "qfo/fourier.hpp"

#include "qfo/errors.hpp"

#include "fft.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qfo {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

/// exp(-i k_p x0) for the centred conjugate axis k_p = (p - n/2) dk.
/// When x0 is a whole number of samples the angle is reduced exactly in
/// integer arithmetic, which keeps large-origin grids free of phase drift.
std::vector<cplx> origin_ramp(int n, double d, double x0) {
  std::vector<cplx> out(n);
  const double m0 = x0 / d;
  const bool aligned = std::abs(m0 - std::round(m0)) <= 1e-9;
  const double dk = two_pi / (n * d);
  for (int p = 0; p < n; ++p) {
    if (aligned) {
      const auto m = static_cast<std::int64_t>(std::llround(m0));
      std::int64_t q = ((static_cast<std::int64_t>(p) - n / 2) * m) % n;
      if (q < 0) q += n;
      out[p] = std::polar(1.0, -two_pi * static_cast<double>(q) / n);
    } else {
      out[p] = std::polar(1.0, -((p - n / 2) * dk) * x0);
    }
  }
  return out;
}

/// (-1)^i: exp(-i k_start i d) with k_start = -n/2 dk.
double alternating(int i) { return (i & 1) ? -1.0 : 1.0; }

std::vector<cplx> forward_core(const std::vector<cplx>& in, const Grid2D& g) {
  std::vector<cplx> buf(in.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) buf[g.index(i, j)] = in[g.index(i, j)] * (alternating(i) * alternating(j));
  detail::fft2_inplace(buf, g.nx, g.ny, -1);
  const auto rx = origin_ramp(g.nx, g.dx, g.x0);
  const auto ry = origin_ramp(g.ny, g.dy, g.y0);
  const double scale = g.dx * g.dy / two_pi;
  for (int q = 0; q < g.ny; ++q)
    for (int p = 0; p < g.nx; ++p) buf[g.index(p, q)] *= rx[p] * ry[q] * scale;
  return buf;
}

std::vector<cplx> inverse_core(const std::vector<cplx>& in, const Grid2D& spatial) {
  const Grid2D& g = spatial;
  const auto rx = origin_ramp(g.nx, g.dx, g.x0);
  const auto ry = origin_ramp(g.ny, g.dy, g.y0);
  std::vector<cplx> buf(in.size());
  for (int q = 0; q < g.ny; ++q)
    for (int p = 0; p < g.nx; ++p) buf[g.index(p, q)] = in[g.index(p, q)] * std::conj(rx[p] * ry[q]);
  detail::fft2_inplace(buf, g.nx, g.ny, +1);
  const Grid2D k = g.conjugate();
  const double scale = k.dx * k.dy / two_pi;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) buf[g.index(i, j)] *= alternating(i) * alternating(j) * scale;
  return buf;
}

} // namespace

AngularField2D forward_ft2(const SpatialField2D& f) {
  f.grid.validate();
  return AngularField2D{f.grid.conjugate(), f.grid, forward_core(f.values, f.grid)};
}

SpatialField2D inverse_ft2(const AngularField2D& g) {
  if (!g.spatial.conjugate().matches(g.kgrid))
    throw GridMismatch("inverse_ft2: spectrum grid is not conjugate to its recorded spatial grid");
  return SpatialField2D(g.spatial, inverse_core(g.values, g.spatial));
}

SpatialField2D inverse_ft2(const AngularField2D& g, const Grid2D& target) {
  target.validate();
  if (!target.conjugate().matches(g.kgrid))
    throw GridMismatch("inverse_ft2: target grid is not conjugate to the spectrum grid");
  return SpatialField2D(target, inverse_core(g.values, target));
}

SpatialField2D convolve2(const SpatialField2D& a, const SpatialField2D& b) {
  if (!a.grid.matches(b.grid)) throw GridMismatch("convolve2: operands live on different grids");
  if (!a.grid.lattice_aligned())
    throw GridMismatch("convolve2: grid origin must be a whole number of samples");
  auto fa = forward_core(a.values, a.grid);
  const auto fb = forward_core(b.values, b.grid);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  return SpatialField2D(a.grid, inverse_core(fa, a.grid));
}

SpatialField2D rescale_field(const SpatialField2D& f, double alpha, double beta) {
  if (alpha == 0.0 || beta == 0.0 || !std::isfinite(alpha) || !std::isfinite(beta))
    throw InvalidArgument("rescale_field: scale factors must be finite and non-zero");
  const Grid2D& g = f.grid;
  Grid2D out = g;
  out.dx = g.dx / std::abs(alpha);
  out.dy = g.dy / std::abs(beta);
  out.x0 = alpha > 0.0 ? g.x0 / alpha : (g.x0 + (g.nx - 1) * g.dx) / alpha;
  out.y0 = beta > 0.0 ? g.y0 / beta : (g.y0 + (g.ny - 1) * g.dy) / beta;
  const double amp = std::sqrt(std::abs(alpha * beta));
  SpatialField2D r(out);
  for (int j = 0; j < g.ny; ++j) {
    const int sj = beta > 0.0 ? j : g.ny - 1 - j;
    for (int i = 0; i < g.nx; ++i) {
      const int si = alpha > 0.0 ? i : g.nx - 1 - i;
      r.at(i, j) = f.at(si, sj) * amp;
    }
  }
  return r;
}

SpatialField2D parity(const SpatialField2D& f) {
  const Grid2D& g = f.grid;
  const double sx = 2.0 * g.x0 / g.dx;
  const double sy = 2.0 * g.y0 / g.dy;
  if (std::abs(sx - std::round(sx)) > 1e-9 || std::abs(sy - std::round(sy)) > 1e-9)
    throw GridMismatch("parity: grid is not symmetric under x -> -x on whole samples");
  const auto mx = static_cast<int>(std::lround(sx));
  const auto my = static_cast<int>(std::lround(sy));
  auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
  SpatialField2D r(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) r.at(i, j) = f.at(wrap(-i - mx, g.nx), wrap(-j - my, g.ny));
  return r;
}

SpatialField2D translate(const SpatialField2D& f, double sx, double sy) {
  AngularField2D s = forward_ft2(f);
  for (int q = 0; q < s.kgrid.ny; ++q) {
    const double ky = s.kgrid.y(q);
    for (int p = 0; p < s.kgrid.nx; ++p) s.at(p, q) *= std::polar(1.0, -(s.kgrid.x(p) * sx + ky * sy));
  }
  return inverse_ft2(s);
}

TemporalField1D spectral_to_temporal(const SpectralField1D& s) {
  if (s.n < 2 || s.n % 2 != 0) throw InvalidArgument("spectral packet needs an even sample count");
  const int n = s.n;
  const double dt = two_pi / (n * s.pitch);
  std::vector<cplx> buf(n);
  for (int i = 0; i < n; ++i) buf[i] = s.values[i] * alternating(i);
  detail::fft1_inplace(buf, -1);
  const auto ramp = origin_ramp(n, s.pitch, s.start);
  const double scale = s.pitch / std::sqrt(two_pi);
  for (int p = 0; p < n; ++p) buf[p] *= ramp[p] * scale;
  TemporalField1D t;
  t.n = n;
  t.pitch = dt;
  t.start = -0.5 * n * dt;
  t.values = std::move(buf);
  t.spectral_start = s.start;
  t.spectral_pitch = s.pitch;
  return t;
}

SpectralField1D temporal_to_spectral(const TemporalField1D& t) {
  const int n = t.n;
  const auto ramp = origin_ramp(n, t.spectral_pitch, t.spectral_start);
  std::vector<cplx> buf(n);
  for (int p = 0; p < n; ++p) buf[p] = t.values[p] * std::conj(ramp[p]);
  detail::fft1_inplace(buf, +1);
  const double scale = t.pitch / std::sqrt(two_pi);
  for (int i = 0; i < n; ++i) buf[i] *= alternating(i) * scale;
  SpectralField1D s;
  s.n = n;
  s.pitch = t.spectral_pitch;
  s.start = t.spectral_start;
  s.values = std::move(buf);
  return s;
}

} // namespace qfo
