#include "qfo/quantum_state.hpp"

#include "qfo/errors.hpp"

#include <cmath>

namespace qfo {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double packet_norm(const Packet& p) {
  return std::visit(overloaded{[](const SpatialField2D& f) { return norm2(f); },
                               [](const SpectralField1D& f) { return norm2(f); },
                               [](const SeparablePacket& f) { return norm2(f.spectral) * norm2(f.spatial); }},
                    p);
}

void check_map(double before, double after) {
  if (!std::isfinite(after) || std::abs(after - before) > 1e-6)
    throw InvalidArgument("map is not norm-preserving: norm^2 " + std::to_string(before) + " -> " +
                          std::to_string(after));
}

} // namespace

void validate(const FockRepr& r) {
  if (const auto* f = std::get_if<Fock>(&r); f && f->n < 0) throw InvalidArgument("photon number must be >= 0");
  if (const auto* g = std::get_if<Generic>(&r)) {
    double s = 0.0;
    for (const auto& c : g->c) s += std::norm(c);
    if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("Fock coefficients are not normalised");
  }
}

cplx fock_coefficient(const FockRepr& r, int n) {
  if (n < 0) return {};
  return std::visit(overloaded{[n](const Coherent& c) {
                                 // e^{-|a|^2/2} a^n / sqrt(n!) via a running product.
                                 cplx v = std::exp(-0.5 * std::norm(c.alpha));
                                 for (int k = 1; k <= n; ++k) v *= c.alpha / std::sqrt(static_cast<double>(k));
                                 return v;
                               },
                               [n](const Fock& f) { return f.n == n ? cplx{1.0, 0.0} : cplx{}; },
                               [n](const Generic& g) {
                                 return static_cast<std::size_t>(n) < g.c.size() ? g.c[n] : cplx{};
                               }},
                    r);
}

double mean_photon_number(const FockRepr& r) {
  return std::visit(overloaded{[](const Coherent& c) { return std::norm(c.alpha); },
                               [](const Fock& f) { return static_cast<double>(f.n); },
                               [](const Generic& g) {
                                 double s = 0.0;
                                 for (std::size_t n = 0; n < g.c.size(); ++n) s += n * std::norm(g.c[n]);
                                 return s;
                               }},
                    r);
}

PhotonDistribution photon_number_distribution(const FockRepr& r, int n_max) {
  if (n_max < 0) throw InvalidArgument("n_max must be >= 0");
  validate(r);
  PhotonDistribution d;
  d.p.resize(static_cast<std::size_t>(n_max) + 1);
  if (const auto* c = std::get_if<Coherent>(&r)) {
    // Poisson recursion P(n) = P(n-1) |a|^2 / n.
    const double mu = std::norm(c->alpha);
    double p = std::exp(-mu);
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) p *= mu / n;
      d.p[n] = p;
    }
  } else {
    for (int n = 0; n <= n_max; ++n) d.p[n] = std::norm(fock_coefficient(r, n));
  }
  double s = 0.0;
  for (double v : d.p) s += v;
  d.tail = std::max(0.0, 1.0 - s);
  return d;
}

QuantumLightState::QuantumLightState(FockRepr r, Packet p) : repr(std::move(r)), packet(std::move(p)) {
  validate(repr);
  if (const auto* s = std::get_if<SeparablePacket>(&packet)) {
    if (std::abs(norm2(s->spectral) - 1.0) > 1e-9 || std::abs(norm2(s->spatial) - 1.0) > 1e-9)
      throw InvalidArgument("separable packet factors must each be normalised");
  } else if (std::abs(packet_norm(packet) - 1.0) > 1e-9) {
    throw InvalidArgument("wavepacket is not normalised");
  }
}

QuantumLightState apply_unitary(const QuantumLightState& s, const SpatialMap& U) {
  return std::visit(overloaded{[&](const SpatialField2D& f) {
                                 SpatialField2D g = U(f);
                                 check_map(norm2(f), norm2(g));
                                 return QuantumLightState(s.repr, std::move(g));
                               },
                               [&](const SeparablePacket& p) {
                                 SpatialField2D g = U(p.spatial);
                                 check_map(norm2(p.spatial), norm2(g));
                                 return QuantumLightState(s.repr, SeparablePacket{p.spectral, std::move(g)});
                               },
                               [&](const SpectralField1D&) -> QuantumLightState {
                                 throw InvalidArgument("spatial map applied to a purely spectral packet");
                               }},
                    s.packet);
}

QuantumLightState apply_unitary(const QuantumLightState& s, const SpectralMap& U) {
  return std::visit(overloaded{[&](const SpectralField1D& f) {
                                 SpectralField1D g = U(f);
                                 check_map(norm2(f), norm2(g));
                                 return QuantumLightState(s.repr, std::move(g));
                               },
                               [&](const SeparablePacket& p) {
                                 SpectralField1D g = U(p.spectral);
                                 check_map(norm2(p.spectral), norm2(g));
                                 return QuantumLightState(s.repr, SeparablePacket{std::move(g), p.spatial});
                               },
                               [&](const SpatialField2D&) -> QuantumLightState {
                                 throw InvalidArgument("spectral map applied to a purely spatial packet");
                               }},
                    s.packet);
}

DetectionDensity joint_detection_density(const QuantumLightState& s) {
  const SpatialField2D* f = std::get_if<SpatialField2D>(&s.packet);
  if (const auto* sep = std::get_if<SeparablePacket>(&s.packet)) f = &sep->spatial;
  if (!f) throw InvalidArgument("detection density needs a spatial wavefront");
  DetectionDensity d{probability_density(*f), mean_photon_number(s.repr)};
  for (auto& v : d.density.values) v *= d.mean_photons;
  return d;
}

} // namespace qfo
