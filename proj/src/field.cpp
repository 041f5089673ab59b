#include "qfo/field.hpp"

#include "qfo/errors.hpp"

#include <cmath>

namespace qfo {
namespace {

double sum_abs2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

cplx sum_conj_product(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void require_same(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!a.matches(b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

void require_same(const Samples1D& a, const Samples1D& b, const char* what) {
  if (a.n != b.n || std::abs(a.pitch - b.pitch) > 1e-12 * std::abs(a.pitch) ||
      std::abs(a.start - b.start) > 1e-12 * a.n * std::abs(a.pitch))
    throw GridMismatch(std::string(what) + ": 1D samples live on different grids");
}

} // namespace

SpatialField2D::SpatialField2D(const Grid2D& g) : grid(g), values(g.size()) { grid.validate(); }

SpatialField2D::SpatialField2D(const Grid2D& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  grid.validate();
  if (values.size() != grid.size()) throw InvalidArgument("value count does not match grid");
}

bool AngularField2D::band_limited(double k0) const {
  const double k0sq = k0 * k0;
  double total = 0.0;
  double outside = 0.0;
  for (int j = 0; j < kgrid.ny; ++j) {
    const double ky = kgrid.y(j);
    for (int i = 0; i < kgrid.nx; ++i) {
      const double kx = kgrid.x(i);
      const double p = std::norm(at(i, j));
      total += p;
      if (kx * kx + ky * ky >= k0sq) outside += p;
    }
  }
  return outside <= 1e-12 * total;
}

SpectralField1D::Support SpectralField1D::support() const {
  double total = 0.0;
  for (const auto& z : values) total += std::norm(z);
  int first = -1;
  int last = -1;
  for (int i = 0; i < n; ++i) {
    if (std::norm(values[i]) > 1e-12 * total) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return {};
  return {coord(first) - 0.5 * pitch, coord(last) + 0.5 * pitch};
}

double norm2(const SpatialField2D& f) { return sum_abs2(f.values) * f.grid.cell_area(); }
double norm2(const AngularField2D& f) { return sum_abs2(f.values) * f.kgrid.cell_area(); }
double norm2(const Samples1D& f) { return sum_abs2(f.values) * f.pitch; }

cplx inner(const SpatialField2D& a, const SpatialField2D& b) {
  require_same(a.grid, b.grid, "inner");
  return sum_conj_product(a.values, b.values) * a.grid.cell_area();
}

cplx inner(const Samples1D& a, const Samples1D& b) {
  require_same(a, b, "inner");
  return sum_conj_product(a.values, b.values) * a.pitch;
}

double l2_distance(const SpatialField2D& a, const SpatialField2D& b) {
  require_same(a.grid, b.grid, "l2_distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.grid.cell_area());
}

double relative_l2(const SpatialField2D& a, const SpatialField2D& b) {
  return l2_distance(a, b) / std::sqrt(norm2(b));
}

double relative_l2(const Samples1D& a, const Samples1D& b) {
  require_same(a, b, "relative_l2");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * a.pitch / norm2(b));
}

namespace {

template <class Field, class Norm, class Inner>
PhaseAlignment align(const Field& a, const Field& b, Norm norm, Inner prod) {
  const cplx overlap = prod(a, b);
  const cplx u = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  // |u a - b|^2 = |a|^2 + |b|^2 - 2 Re(conj(u) <a,b>) and conj(u) <a,b> = |<a,b>|.
  const double na = norm(a);
  const double nb = norm(b);
  const double err2 = std::max(0.0, na + nb - 2.0 * std::abs(overlap));
  return {u, std::sqrt(err2 / nb)};
}

} // namespace

PhaseAlignment phase_aligned(const SpatialField2D& a, const SpatialField2D& b) {
  require_same(a.grid, b.grid, "phase_aligned");
  // Direct differencing keeps full precision for nearly identical fields.
  PhaseAlignment r = align(
      a, b, [](const SpatialField2D& f) { return norm2(f); },
      [](const SpatialField2D& x, const SpatialField2D& y) { return inner(x, y); });
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(r.phase * a.values[i] - b.values[i]);
  r.relative_error = std::sqrt(s * a.grid.cell_area() / norm2(b));
  return r;
}

PhaseAlignment phase_aligned(const Samples1D& a, const Samples1D& b) {
  require_same(a, b, "phase_aligned");
  PhaseAlignment r = align(
      a, b, [](const Samples1D& f) { return norm2(f); },
      [](const Samples1D& x, const Samples1D& y) { return inner(x, y); });
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(r.phase * a.values[i] - b.values[i]);
  r.relative_error = std::sqrt(s * a.pitch / norm2(b));
  return r;
}

SpatialField2D normalized(SpatialField2D f) {
  const double n2 = norm2(f);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidArgument("cannot normalise a field of zero norm");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& z : f.values) z *= s;
  return f;
}

SpectralField1D normalized(SpectralField1D f) {
  const double n2 = norm2(f);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw InvalidArgument("cannot normalise a packet of zero norm");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& z : f.values) z *= s;
  return f;
}

Moments2D moments(const SpatialField2D& f) {
  const Grid2D& g = f.grid;
  double total = 0.0, mx = 0.0, my = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double p = std::norm(f.at(i, j));
      total += p;
      mx += p * g.x(i);
      my += p * g.y(j);
    }
  if (!(total > 0.0)) throw InvalidArgument("moments of a zero field");
  mx /= total;
  my /= total;
  double vx = 0.0, vy = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double p = std::norm(f.at(i, j));
      vx += p * (g.x(i) - mx) * (g.x(i) - mx);
      vy += p * (g.y(j) - my) * (g.y(j) - my);
    }
  return {mx, my, std::sqrt(vx / total), std::sqrt(vy / total)};
}

} // namespace qfo
