#pragma once

#include "qfo/field.hpp"

#include <cstdint>
#include <random>

namespace qfo::test {

/// Portable uniform doubles in [0, 1): 53 high bits of mt19937_64.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  cplx complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

private:
  std::mt19937_64 gen_;
};

inline SpatialField2D random_field(const Grid2D& g, std::uint64_t seed) {
  Rng r(seed);
  SpatialField2D f(g);
  for (auto& v : f.values) v = r.complex();
  return normalized(std::move(f));
}

} // namespace qfo::test
