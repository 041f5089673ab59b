#pragma once

#include "qfo/field.hpp"
#include "qfo/wavepacket.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace qfo {

struct Coherent {
  cplx alpha;
  bool operator==(const Coherent&) const = default;
};

struct Fock {
  int n = 0;
  bool operator==(const Fock&) const = default;
};

/// Explicit Fock coefficients c_0, c_1, ...; normalised to 1e-12.
struct Generic {
  std::vector<cplx> c;
  bool operator==(const Generic&) const = default;
};

using FockRepr = std::variant<Coherent, Fock, Generic>;

/// Validates a repr (non-negative n, generic normalisation); throws
/// InvalidArgument.
void validate(const FockRepr& r);

/// c_n for any representation.
cplx fock_coefficient(const FockRepr& r, int n);

double mean_photon_number(const FockRepr& r);

struct PhotonDistribution {
  std::vector<double> p; // P(0) .. P(n_max)
  double tail = 0.0;     // 1 - sum p
};

PhotonDistribution photon_number_distribution(const FockRepr& r, int n_max = 64);

using Packet = std::variant<SpatialField2D, SpectralField1D, SeparablePacket>;

/// f(a_xi^dagger)|0> with a normalised packet.
struct QuantumLightState {
  FockRepr repr;
  Packet packet;

  QuantumLightState(FockRepr r, Packet p);
};

using SpatialMap = std::function<SpatialField2D(const SpatialField2D&)>;
using SpectralMap = std::function<SpectralField1D(const SpectralField1D&)>;

/// Transforms the packet only (the spatial factor of a separable packet).
/// Throws InvalidArgument if the map changes the norm by more than 1e-6 or
/// if the packet has no matching domain.
QuantumLightState apply_unitary(const QuantumLightState& s, const SpatialMap& U);
QuantumLightState apply_unitary(const QuantumLightState& s, const SpectralMap& U);

struct DetectionDensity {
  DensityGrid density; // nbar |xi|^2
  double mean_photons = 0.0;
};

/// Needs a spatial or separable packet.
DetectionDensity joint_detection_density(const QuantumLightState& s);

} // namespace qfo
