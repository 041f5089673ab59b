#include "qfo/pulse_shaper.hpp"

#include "qfo/errors.hpp"
#include "qfo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace qfo {
namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

double SpectralPhase::operator()(double omega) const {
  switch (kind) {
  case Kind::zero:
    return 0.0;
  case Kind::linear:
    return omega * tau;
  case Kind::chips: {
    if (chip_phases.empty()) return 0.0;
    const auto n = static_cast<int>(chip_phases.size());
    const int k = static_cast<int>(std::floor((omega - lo) / (hi - lo) * n));
    return chip_phases[std::clamp(k, 0, n - 1)];
  }
  }
  return 0.0;
}

SpectralPhase SpectralPhase::zero() { return {}; }

SpectralPhase SpectralPhase::linear(double tau) {
  SpectralPhase p;
  p.kind = Kind::linear;
  p.tau = tau;
  return p;
}

SpectralPhase SpectralPhase::chips(double lo, double hi, std::vector<double> phases) {
  if (!(hi > lo)) throw InvalidArgument("chip band must have hi > lo");
  if (phases.empty()) throw InvalidArgument("need at least one chip");
  SpectralPhase p;
  p.kind = Kind::chips;
  p.lo = lo;
  p.hi = hi;
  p.chip_phases = std::move(phases);
  return p;
}

SpectralPhase SpectralPhase::random_chips(double lo, double hi, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("need at least one chip");
  std::mt19937_64 gen(seed);
  std::vector<double> phases(count);
  for (auto& v : phases) v = static_cast<double>(gen() >> 11) * 0x1.0p-53 * two_pi;
  return chips(lo, hi, std::move(phases));
}

double lattice_constant(const PulseShaperSpec& s, double omega) {
  return s.f_len * s.pupil.kappa() * s.c / omega;
}

std::optional<double> omega_map(double x, double omega_max, int R, double x1_max) {
  const double ax = std::abs(x);
  const double q = ax / x1_max;
  if (q < 1.0) return std::nullopt;
  double r = std::floor(q);
  if (std::ceil(q) - q <= 4.0 * std::numeric_limits<double>::epsilon() * q) r = std::ceil(q);
  r = std::min(static_cast<double>(R), r);
  return r * x1_max * omega_max / ax;
}

std::string ShaperCertificate::report() const {
  std::ostringstream os;
  os.precision(6);
  os << "no-DC condition |p0| <= 1e-9: " << (no_dc ? "ok" : "FAIL") << " (|p0| = " << p0_abs
     << ", margin " << p0_margin << ")\n"
     << "separation condition domega < omega_max/R: " << (separation ? "ok" : "FAIL") << " (domega = " << delta_omega
     << ", limit " << delta_omega_limit << ", margin " << delta_omega_margin << ")\n"
     << "pupil tail beyond R: " << tail << "\n";
  return os.str();
}

ShaperCertificate validate_shaper(const PulseShaperSpec& s, const SpectralField1D::Support& band) {
  ShaperCertificate c;
  c.p0_abs = std::abs(s.pupil.g(0));
  c.p0_margin = 1e-9 - c.p0_abs;
  c.no_dc = c.p0_abs <= 1e-9;
  c.omega_max = band.omega_max;
  c.delta_omega = band.bandwidth();
  c.delta_omega_limit = band.omega_max / std::max(s.pupil.R, 1);
  c.delta_omega_margin = c.delta_omega_limit - c.delta_omega;
  c.separation = c.delta_omega < c.delta_omega_limit && band.omega_min > 0.0;
  c.tail = s.pupil.tail;
  c.passed = c.no_dc && c.separation;
  return c;
}

SpectralField1D pulse_shaper_closed_form(const SpectralField1D& in, const PulseShaperSpec& s) {
  SpectralField1D out = in;
  for (int i = 0; i < in.n; ++i) {
    const double w = in.coord(i);
    out.values[i] *= std::polar(1.0, w * 8.0 * s.f_len / s.c - s.theta(w));
  }
  return out;
}

ShaperSimulation pulse_shaper_simulate(const SpectralField1D& in, const PulseShaperSpec& s, int threads) {
  if (s.spot_samples < 3 || s.spot_samples % 2 == 0) throw InvalidArgument("spot_samples must be odd and >= 3");
  const SpectralField1D::Support band = in.support();
  const int R = s.pupil.R;
  const double x1_max = lattice_constant(s, band.omega_max);
  const double sigma = s.spot_fraction * x1_max;
  const int h = (s.spot_samples - 1) / 2;
  const int m = s.spot_samples;
  const double dz = 16.0 * sigma / (m - 1);

  // Input spatial mode at x = 0, symmetric about the centre sample.
  std::vector<cplx> xi0(m);
  double nrm = 0.0;
  for (int i = 0; i < m; ++i) {
    const double z = (i - h) * dz;
    xi0[i] = std::exp(-z * z / (4.0 * sigma * sigma));
    nrm += std::norm(xi0[i]) * dz;
  }
  for (auto& v : xi0) v /= std::sqrt(nrm);

  std::vector<cplx> amp(in.n);
  std::vector<double> total(in.n, 0.0);
  parallel_for(static_cast<std::size_t>(in.n), threads, [&](std::size_t idx) {
    const auto j = static_cast<int>(idx);
    const double w = in.coord(j);
    if (in.values[j] == cplx{} || !(w > 0.0)) return;
    const double x1 = lattice_constant(s, w);
    const cplx e = -std::polar(1.0, 4.0 * w * s.f_len / s.c);
    const cplx e2 = e * e;

    // Local copy profiles m_r(z) behind the spatial phase.
    std::vector<std::vector<cplx>> mr(2 * R + 1, std::vector<cplx>(m));
    for (int r = -R; r <= R; ++r)
      for (int i = 0; i < m; ++i) {
        const double z = (i - h) * dz;
        const auto om = omega_map(r * x1 + z, band.omega_max, R, x1_max);
        const double th = om ? s.theta(*om) : 0.0;
        mr[r + R][i] = xi0[m - 1 - i] * std::polar(1.0, -th);
      }

    // Reassembled copies D_{r''}(y) = e^2 sum_r p_r conj(p_{r+r''}) m_r(-y).
    cplx a{};
    double tot = 0.0;
    std::vector<cplx> d(m);
    for (int r2 = -2 * R; r2 <= 2 * R; ++r2) {
      std::fill(d.begin(), d.end(), cplx{});
      for (int r = -R; r <= R; ++r) {
        const cplx w2 = s.pupil.g(r) * std::conj(s.pupil.g(r + r2));
        if (w2 == cplx{}) continue;
        for (int i = 0; i < m; ++i) d[i] += w2 * mr[r + R][m - 1 - i];
      }
      double pw = 0.0;
      for (int i = 0; i < m; ++i) {
        d[i] *= e2;
        pw += std::norm(d[i]) * dz;
      }
      tot += pw;
      if (r2 == 0)
        for (int i = 0; i < m; ++i) a += std::conj(xi0[i]) * d[i] * dz;
    }
    amp[j] = a;
    total[j] = tot;
  });

  ShaperSimulation out;
  out.output = in;
  for (int j = 0; j < in.n; ++j) {
    out.output.values[j] = in.values[j] * amp[j];
    const double p = std::norm(in.values[j]) * in.pitch;
    out.transmitted += p * total[j];
    out.residual += p * (total[j] - std::norm(amp[j]));
  }
  return out;
}

ShaperResult pulse_shaper_apply(const SpectralField1D& in, const PulseShaperSpec& s, int threads, bool enforce_guards) {
  ShaperResult res;
  res.certificate = validate_shaper(s, in.support());
  if (enforce_guards && !res.certificate.passed) {
    if (!res.certificate.no_dc)
      throw GuardViolation("shaper-no-dc", "pupil has |p0| = " + fmt(res.certificate.p0_abs), "|p0| <= 1e-9");
    throw GuardViolation("shaper-separation",
                         "bandwidth " + fmt(res.certificate.delta_omega) + " violates domega < omega_max/R",
                         "domega < " + fmt(res.certificate.delta_omega_limit));
  }
  res.closed_form = pulse_shaper_closed_form(in, s);
  res.simulated = pulse_shaper_simulate(in, s, threads);
  res.relative_l2 = relative_l2(res.simulated.output, res.closed_form);
  return res;
}

QuantumLightState pulse_shaper_apply_state(const QuantumLightState& st, const PulseShaperSpec& s, bool enforce_guards) {
  return apply_unitary(st, SpectralMap([&](const SpectralField1D& f) {
                         const ShaperCertificate c = validate_shaper(s, f.support());
                         if (enforce_guards && !c.passed)
                           throw GuardViolation(c.no_dc ? "shaper-separation" : "shaper-no-dc", "shaper conditions fail",
                                                c.report());
                         return pulse_shaper_closed_form(f, s);
                       }));
}

} // namespace qfo
