#include "qfo/systems.hpp"

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

/// Fraction of spectral power within n/16 bins of the k-grid boundary.
double edge_fraction(const AngularField2D& s) {
  const int bx = std::max(1, s.kgrid.nx / 16);
  const int by = std::max(1, s.kgrid.ny / 16);
  double total = 0.0, edge = 0.0;
  for (int q = 0; q < s.kgrid.ny; ++q)
    for (int p = 0; p < s.kgrid.nx; ++p) {
      const double w = std::norm(s.at(p, q));
      total += w;
      if (p < bx || p >= s.kgrid.nx - bx || q < by || q >= s.kgrid.ny - by) edge += w;
    }
  return total > 0.0 ? edge / total : 0.0;
}

bool is_centered(const Grid2D& g) {
  return std::abs(g.x0 + 0.5 * g.nx * g.dx) <= 1e-9 * g.nx * g.dx &&
         std::abs(g.y0 + 0.5 * g.ny * g.dy) <= 1e-9 * g.ny * g.dy;
}

} // namespace

void LensOperator::validate() const {
  if (!(f_len > 0.0) || !std::isfinite(f_len)) throw InvalidArgument("lens focal length must be positive");
  if (!(k0 > 0.0)) throw InvalidArgument("k0 must be positive");
}

Grid2D lens_output_grid(const Grid2D& input, const LensOperator& L) {
  const Grid2D k = input.conjugate();
  const double s = L.f_len / L.k0;
  return Grid2D{input.nx, input.ny, s * k.dx, s * k.dy, s * k.x0, s * k.y0};
}

double fourier_matched_focal_length(const Grid2D& g, double k0) {
  const double ax = g.nx * g.dx * g.dx, ay = g.ny * g.dy * g.dy;
  if (std::abs(ax - ay) > 1e-12 * ax) throw InvalidArgument("no single Fourier-matched focal length for this grid");
  return k0 * ax / two_pi;
}

SpatialField2D lens_apply(const SpatialField2D& f, const LensOperator& L, bool enforce_guards) {
  L.validate();
  const AngularField2D s = forward_ft2(f);
  if (enforce_guards) {
    if (!s.band_limited(L.k0))
      throw GuardViolation("band-limit", "lens input carries power at |k| >= k0", "|k| < " + fmt(L.k0));
    const double edge = edge_fraction(s);
    if (edge > 1e-10)
      throw GuardViolation("lens-support",
                           "fraction " + fmt(edge) + " of the spectrum reaches the k-grid edge, the focal-plane field would wrap",
                           "suggested grid " + std::to_string(2 * f.grid.nx) + "x" + std::to_string(2 * f.grid.ny) +
                               " with pitch " + fmt(0.5 * f.grid.dx) + "x" + fmt(0.5 * f.grid.dy));
  }
  SpatialField2D out(lens_output_grid(f.grid, L));
  const cplx pre = -I * (L.k0 / L.f_len) * std::polar(1.0, 2.0 * L.k0 * L.f_len);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = pre * s.values[i];
  return out;
}

SpatialField2D lens_apply_composed(const SpatialField2D& f, const LensOperator& L, bool enforce_guards) {
  L.validate();
  const SpatialField2D a = fresnel_propagate(f, L.f_len, L.k0, enforce_guards);
  const SpatialField2D b = apply_phase_mask(a, lens_phase(L.f_len, L.k0, f.grid));
  return fresnel_propagate(b, L.f_len, L.k0, enforce_guards);
}

QuantumLightState lens_apply_state(const QuantumLightState& s, const LensOperator& L, bool enforce_guards) {
  return apply_unitary(s, SpatialMap([&](const SpatialField2D& f) { return lens_apply(f, L, enforce_guards); }));
}

Grid2D confocal_grid(const Grid2D& input, const FourF& sys) {
  return lens_output_grid(input, LensOperator{sys.f_len, sys.k0});
}

SpatialField2D four_f_apply(const SpatialField2D& f, const FourF& sys, const PhaseMask& pupil, bool enforce_guards) {
  const LensOperator L{sys.f_len, sys.k0};
  const SpatialField2D a = lens_apply(f, L, enforce_guards);
  if (!pupil.grid.matches(a.grid))
    throw GridMismatch("pupil must be sampled on the confocal grid (see confocal_grid)");
  return lens_apply(apply_phase_mask(a, pupil), L, enforce_guards);
}

QuantumLightState four_f_apply_state(const QuantumLightState& s, const FourF& sys, const PhaseMask& pupil,
                                     bool enforce_guards) {
  return apply_unitary(
      s, SpatialMap([&](const SpatialField2D& f) { return four_f_apply(f, sys, pupil, enforce_guards); }));
}

SpatialField2D four_f_impulse_response(const Grid2D& input, const FourF& sys, const PhaseMask& pupil) {
  if (!is_centered(input)) throw GridMismatch("4f impulse response needs a centred input grid");
  if (!pupil.grid.matches(confocal_grid(input, sys)))
    throw GridMismatch("pupil must be sampled on the confocal grid (see confocal_grid)");
  const AngularField2D phi = forward_ft2(SpatialField2D(pupil.grid, pupil.factor));
  const double s = sys.k0 / sys.f_len;
  const cplx pre = -std::polar(s * s, 4.0 * sys.k0 * sys.f_len);
  SpatialField2D h(input);
  for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] = pre * phi.values[i];
  return h;
}

SpatialField2D four_f_apply_convolution(const SpatialField2D& f, const FourF& sys, const PhaseMask& pupil) {
  return convolve2(parity(f), four_f_impulse_response(f.grid, sys, pupil));
}

PhaseMask inverse_pupil(const PhaseMask& pupil) {
  const Grid2D& g = pupil.grid;
  const double sx = 2.0 * g.x0 / g.dx, sy = 2.0 * g.y0 / g.dy;
  if (std::abs(sx - std::round(sx)) > 1e-9 || std::abs(sy - std::round(sy)) > 1e-9)
    throw GridMismatch("inverse_pupil: pupil grid is not symmetric under x -> -x");
  const auto mx = static_cast<int>(std::lround(sx));
  const auto my = static_cast<int>(std::lround(sy));
  auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
  std::vector<double> phi(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      phi[g.index(i, j)] = -pupil.phi[g.index(wrap(-i - mx, g.nx), wrap(-j - my, g.ny))];
  return PhaseMask::from_phase(g, std::move(phi));
}

cplx LatticeResponse::weight(int r, int s) const {
  if (r < -R || r > R || s < -S || s > S) return {};
  return p[static_cast<std::size_t>(s + S) * static_cast<std::size_t>(2 * R + 1) + static_cast<std::size_t>(r + R)];
}

LatticeResponse periodic_pupil_analyze(const std::vector<double>& cell, int nx, int ny, double period_x,
                                       double period_y, int R, int S, const FourF& sys) {
  if (R < 0 || S < 0) throw InvalidArgument("retained orders must be non-negative");
  if (!(period_x > 0.0) || !(period_y > 0.0)) throw InvalidArgument("pupil periods must be positive");
  if (!(sys.f_len > 0.0) || !(sys.k0 > 0.0)) throw InvalidArgument("4f needs positive f and k0");
  if (cell.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny))
    throw InvalidArgument("cell sample count does not match nx*ny");
  if (nx < 16 * std::max(R, 1) || ny < 16 * std::max(S, 1))
    throw InvalidArgument("under-sampled pupil cell: need " + std::to_string(16 * std::max(R, 1)) + "x" +
                          std::to_string(16 * std::max(S, 1)) + " samples");

  std::vector<cplx> buf(cell.size());
  for (std::size_t i = 0; i < cell.size(); ++i) buf[i] = std::polar(1.0, -cell[i]);
  detail::fft2_inplace(buf, nx, ny, -1);
  const double inv = 1.0 / (static_cast<double>(nx) * ny);

  LatticeResponse lat;
  lat.period_x = period_x;
  lat.period_y = period_y;
  lat.x1 = sys.f_len * (two_pi / period_x) / sys.k0;
  lat.y1 = sys.f_len * (two_pi / period_y) / sys.k0;
  lat.R = R;
  lat.S = S;
  lat.p.resize(static_cast<std::size_t>(2 * R + 1) * static_cast<std::size_t>(2 * S + 1));
  std::vector<bool> kept(buf.size(), false);
  double kept_power = 0.0;
  for (int s = -S; s <= S; ++s)
    for (int r = -R; r <= R; ++r) {
      const int m = ((r % nx) + nx) % nx;
      const int q = ((s % ny) + ny) % ny;
      const std::size_t idx = static_cast<std::size_t>(q) * nx + m;
      const cplx v = buf[idx] * inv;
      lat.p[static_cast<std::size_t>(s + S) * (2 * R + 1) + (r + R)] = v;
      kept[idx] = true;
      kept_power += std::norm(v);
    }
  for (std::size_t i = 0; i < buf.size(); ++i)
    if (!kept[i]) lat.tail += std::norm(buf[i] * inv);
  lat.norm_defect = std::abs(kept_power - 1.0);

  for (int s2 = -2 * S; s2 <= 2 * S; ++s2)
    for (int r2 = -2 * R; r2 <= 2 * R; ++r2) {
      if (r2 == 0 && s2 == 0) continue;
      cplx acc{};
      for (int s = -S; s <= S; ++s)
        for (int r = -R; r <= R; ++r) acc += lat.weight(r, s) * std::conj(lat.weight(r - r2, s - s2));
      lat.max_offdiag = std::max(lat.max_offdiag, std::abs(acc));
    }
  if (lat.norm_defect > 1e-3)
    throw GuardViolation("pupil-normalisation", "retained coefficients carry power " + fmt(kept_power),
                         "raise R, S until the tail " + fmt(lat.tail) + " is below 1e-3");
  lat.certified = lat.norm_defect <= 1e-6 && lat.max_offdiag <= 1e-6;
  return lat;
}

LatticeResponse periodic_pupil_analyze(const std::function<double(double, double)>& phi, int nx, int ny,
                                       double period_x, double period_y, int R, int S, const FourF& sys) {
  if (nx < 1 || ny < 1) throw InvalidArgument("cell sample counts must be positive");
  std::vector<double> cell(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cell[static_cast<std::size_t>(j) * nx + i] = phi(period_x * i / nx, period_y * j / ny);
  return periodic_pupil_analyze(cell, nx, ny, period_x, period_y, R, S, sys);
}

PeriodicOutput four_f_periodic_apply(const SpatialField2D& f, const LatticeResponse& lat, const FourF& sys) {
  if (!is_centered(f.grid)) throw GridMismatch("periodic 4f needs a centred input grid");
  const SpatialField2D pb = parity(f);
  AngularField2D s = forward_ft2(pb);
  const Grid2D& k = s.kgrid;
  const cplx pre = -std::polar(1.0, 4.0 * sys.k0 * sys.f_len);
  std::vector<cplx> ex(static_cast<std::size_t>(k.nx) * (2 * lat.R + 1));
  std::vector<cplx> ey(static_cast<std::size_t>(k.ny) * (2 * lat.S + 1));
  for (int r = -lat.R; r <= lat.R; ++r)
    for (int p = 0; p < k.nx; ++p) ex[static_cast<std::size_t>(r + lat.R) * k.nx + p] = std::polar(1.0, -k.x(p) * r * lat.x1);
  for (int q2 = -lat.S; q2 <= lat.S; ++q2)
    for (int q = 0; q < k.ny; ++q) ey[static_cast<std::size_t>(q2 + lat.S) * k.ny + q] = std::polar(1.0, -k.y(q) * q2 * lat.y1);
  for (int q = 0; q < k.ny; ++q)
    for (int p = 0; p < k.nx; ++p) {
      cplx acc{};
      for (int s2 = -lat.S; s2 <= lat.S; ++s2) {
        cplx row{};
        for (int r = -lat.R; r <= lat.R; ++r) row += lat.weight(r, s2) * ex[static_cast<std::size_t>(r + lat.R) * k.nx + p];
        acc += row * ey[static_cast<std::size_t>(s2 + lat.S) * k.ny + q];
      }
      s.at(p, q) *= pre * acc;
    }

  PeriodicOutput out{inverse_ft2(s)};
  const Moments2D m = moments(f);
  out.width_margin_x = lat.x1 - 4.0 * m.sigma_x;
  out.width_margin_y = lat.y1 - 4.0 * m.sigma_y;
  bool widths_ok = true;
  if (lat.R > 0) {
    widths_ok = widths_ok && out.width_margin_x > 0.0;
    out.max_copy_overlap = std::max(out.max_copy_overlap, std::abs(inner(pb, translate(pb, lat.x1, 0.0))));
  }
  if (lat.S > 0) {
    widths_ok = widths_ok && out.width_margin_y > 0.0;
    out.max_copy_overlap = std::max(out.max_copy_overlap, std::abs(inner(pb, translate(pb, 0.0, lat.y1))));
  }
  if (lat.R > 0 && lat.S > 0)
    out.max_copy_overlap = std::max(out.max_copy_overlap, std::abs(inner(pb, translate(pb, lat.x1, lat.y1))));
  out.orthogonality_certified = widths_ok;
  return out;
}

} // namespace qfo
