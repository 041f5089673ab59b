#include "qfo/scenario.hpp"

#include "qfo/elements.hpp"
#include "qfo/fourier.hpp"
#include "qfo/grid_io.hpp"
#include "qfo/parallel.hpp"
#include "qfo/pulse_shaper.hpp"
#include "qfo/quantum_state.hpp"
#include "qfo/systems.hpp"
#include "qfo/wavepacket.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace qfo {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// YAML access

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? " (line " + std::to_string(m.line + 1) + ")" : "";
}

YAML::Node child(const YAML::Node& n, const std::string& key, const std::string& ctx) {
  if (!n.IsMap()) throw ScenarioParseError(ctx + " must be a mapping" + where(n));
  YAML::Node c = n[key];
  if (!c) throw ScenarioParseError("missing key '" + key + "' in " + ctx + where(n));
  return c;
}

template <class T>
T req(const YAML::Node& n, const std::string& key, const std::string& ctx) {
  const YAML::Node c = child(n, key, ctx);
  try {
    return c.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioParseError("bad value for '" + key + "' in " + ctx + where(c));
  }
}

template <class T>
T opt(const YAML::Node& n, const std::string& key, T fallback, const std::string& ctx) {
  if (!n.IsMap() || !n[key]) return fallback;
  return req<T>(n, key, ctx);
}

cplx complex_value(const YAML::Node& n, const std::string& ctx) {
  try {
    if (n.IsSequence() && n.size() == 2) return {n[0].as<double>(), n[1].as<double>()};
    return {n.as<double>(), 0.0};
  } catch (const YAML::Exception&) {
    throw ScenarioParseError("expected a number or [re, im] in " + ctx + where(n));
  }
}

std::pair<double, double> pair_value(const YAML::Node& n, const std::string& key, const std::string& ctx) {
  if (!n.IsMap() || !n[key]) return {0.0, 0.0};
  const YAML::Node c = n[key];
  if (!c.IsSequence() || c.size() != 2) throw ScenarioParseError("'" + key + "' in " + ctx + " must be [a, b]" + where(c));
  try {
    return {c[0].as<double>(), c[1].as<double>()};
  } catch (const YAML::Exception&) {
    throw ScenarioParseError("bad value for '" + key + "' in " + ctx + where(c));
  }
}

// ---------------------------------------------------------------------------
// Scenario pieces

FockRepr parse_repr(const YAML::Node& n) {
  const std::string ctx = "state.repr";
  const auto kind = req<std::string>(n, "kind", ctx);
  if (kind == "coherent") return Coherent{complex_value(child(n, "alpha", ctx), ctx + ".alpha")};
  if (kind == "fock") return Fock{req<int>(n, "n", ctx)};
  if (kind == "generic") {
    const YAML::Node c = child(n, "c", ctx);
    if (!c.IsSequence()) throw ScenarioParseError("state.repr.c must be a list" + where(c));
    Generic g;
    for (const auto& v : c) g.c.push_back(complex_value(v, ctx + ".c"));
    return g;
  }
  throw ScenarioParseError("unknown repr kind '" + kind + "'" + where(n));
}

json repr_json(const FockRepr& r) {
  if (const auto* c = std::get_if<Coherent>(&r)) return {{"kind", "coherent"}, {"alpha", {c->alpha.real(), c->alpha.imag()}}};
  if (const auto* f = std::get_if<Fock>(&r)) return {{"kind", "fock"}, {"n", f->n}};
  json c = json::array();
  for (const auto& v : std::get<Generic>(r).c) c.push_back({v.real(), v.imag()});
  return {{"kind", "generic"}, {"c", c}};
}

Grid2D parse_grid(const YAML::Node& n) {
  const std::string ctx = "grid";
  const int nn = opt<int>(n, "n", 0, ctx);
  const double pitch = opt<double>(n, "pitch", 0.0, ctx);
  const int nx = opt<int>(n, "nx", nn, ctx), ny = opt<int>(n, "ny", nn, ctx);
  const double dx = opt<double>(n, "dx", pitch, ctx), dy = opt<double>(n, "dy", pitch, ctx);
  return Grid2D::centered(nx, ny, dx, dy);
}

SpatialField2D parse_packet(const YAML::Node& n, const Grid2D& grid) {
  const std::string ctx = "state.packet";
  const auto kind = req<std::string>(n, "kind", ctx);
  const double w = opt<double>(n, "w", 0.0, ctx);
  GaussianSpec g{opt<double>(n, "wx", w, ctx), opt<double>(n, "wy", w, ctx)};
  std::tie(g.cx, g.cy) = pair_value(n, "center", ctx);
  std::tie(g.kx, g.ky) = pair_value(n, "tilt", ctx);
  if (kind == "gaussian") return make_gaussian_2d(grid, g);
  if (kind == "two_gaussian") {
    const double sep = req<double>(n, "separation", ctx);
    GaussianSpec a = g, b = g;
    a.cx -= 0.5 * sep;
    b.cx += 0.5 * sep;
    return superpose({1.0, 1.0}, {make_gaussian_2d(grid, a), make_gaussian_2d(grid, b)});
  }
  throw ScenarioParseError("unknown packet kind '" + kind + "'" + where(n));
}

double focal_length(const YAML::Node& n, const Grid2D& grid, double k0, const std::string& ctx) {
  const YAML::Node f = child(n, "f", ctx);
  if (f.IsScalar() && f.Scalar() == "matched") return fourier_matched_focal_length(grid, k0);
  try {
    return f.as<double>();
  } catch (const YAML::Exception&) {
    throw ScenarioParseError("'f' in " + ctx + " must be a number or 'matched'" + where(f));
  }
}

/// One period of a named 1D profile.
std::function<double(double)> profile(const std::string& kind, double period, double amplitude, const std::string& ctx) {
  const double kappa = 2.0 * pi / period;
  if (kind == "binary") return [period](double u) { return std::fmod(u, period) < 0.5 * period ? 0.0 : pi; };
  if (kind == "sawtooth") return [kappa](double u) { return kappa * u; };
  if (kind == "sinusoid") return [kappa, amplitude](double u) { return amplitude * std::sin(kappa * u); };
  throw ScenarioParseError("unknown profile '" + kind + "' in " + ctx);
}

/// Smooth random periodic phase: a low-order trigonometric polynomial.
std::function<double(double, double)> random_cell(double period, int harmonics, double amplitude, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  struct Term {
    int mx, my;
    double a, phase;
  };
  std::vector<Term> terms;
  for (int my = 0; my <= harmonics; ++my)
    for (int mx = -harmonics; mx <= harmonics; ++mx) {
      if (my == 0 && mx <= 0) continue;
      terms.push_back({mx, my, amplitude * uniform() / harmonics, 2.0 * pi * uniform()});
    }
  const double kappa = 2.0 * pi / period;
  return [terms, kappa](double u, double v) {
    double s = 0.0;
    for (const auto& t : terms) s += t.a * std::cos(kappa * (t.mx * u + t.my * v) + t.phase);
    return s;
  };
}

struct PupilBuild {
  PhaseMask mask;
  std::optional<LatticeResponse> lattice;
  std::string failure; // certificate or normalisation failure, if any
  json info;
};

PupilBuild build_pupil(const YAML::Node& n, const Grid2D& confocal, const FourF& sys, std::uint64_t seed) {
  const std::string ctx = "four_f.pupil";
  const auto kind = req<std::string>(n, "kind", ctx);
  PupilBuild b;
  b.info = {{"kind", kind}};
  std::function<double(double, double)> phi;
  double period = 0.0;
  bool two_d = false;
  if (kind == "flat") {
    phi = [](double, double) { return 0.0; };
  } else if (kind == "ramp") {
    const double a = req<double>(n, "a", ctx);
    b.info["a"] = a;
    phi = [a](double u, double) { return a * u; };
  } else if (kind == "binary" || kind == "sinusoid" || kind == "sawtooth") {
    period = req<double>(n, "period", ctx);
    const double amp = opt<double>(n, "amplitude", 1.0, ctx);
    b.info["period"] = period;
    if (kind == "sinusoid") b.info["amplitude"] = amp;
    auto p1 = profile(kind, period, amp, ctx);
    phi = [p1, period](double u, double) {
      double m = std::fmod(u, period);
      return p1(m < 0.0 ? m + period : m);
    };
  } else if (kind == "random") {
    period = req<double>(n, "period", ctx);
    const int harmonics = opt<int>(n, "harmonics", 2, ctx);
    const double amp = opt<double>(n, "amplitude", 1.0, ctx);
    const auto s = opt<std::uint64_t>(n, "seed", seed, ctx);
    b.info["period"] = period;
    b.info["harmonics"] = harmonics;
    b.info["seed"] = s;
    phi = random_cell(period, harmonics, amp, s);
    two_d = true;
  } else {
    throw ScenarioParseError("unknown pupil kind '" + kind + "'" + where(n));
  }
  b.mask = PhaseMask::from_function(confocal, phi);
  if (period > 0.0) {
    const int R = opt<int>(n, "orders", 12, ctx);
    const int S = two_d ? R : 0;
    const int samples = opt<int>(n, "samples", 16 * std::max(R, 1), ctx);
    try {
      b.lattice = periodic_pupil_analyze(phi, samples, two_d ? samples : 16, period, period, R, S, sys);
      const auto& l = *b.lattice;
      b.info["lattice"] = {{"x1", l.x1},
                           {"y1", two_d ? l.y1 : 0.0},
                           {"orders", R},
                           {"tail", l.tail},
                           {"norm_defect", l.norm_defect},
                           {"max_offdiag", l.max_offdiag},
                           {"certified", l.certified}};
      if (!l.certified) b.failure = "cyclic orthogonality certificate not met (raise 'orders')";
    } catch (const GuardViolation& g) {
      b.failure = g.what();
      b.info["lattice"] = {{"certified", false}, {"error", g.what()}};
    }
  }
  return b;
}

GratingSpec build_grating(const YAML::Node& n, const std::string& ctx) {
  const double period = req<double>(n, "period", ctx);
  const int R = req<int>(n, "orders", ctx);
  const auto kind = opt<std::string>(n, "profile", "binary", ctx);
  const double amp = opt<double>(n, "amplitude", 1.0, ctx);
  const int samples = opt<int>(n, "samples", std::max(128, 16 * std::max(R, 1)), ctx);
  return grating_coefficients(profile(kind, period, amp, ctx), period, R, samples);
}

json moments_json(const SpatialField2D& f) {
  const Moments2D m = moments(f);
  return {{"cx", m.cx}, {"cy", m.cy}, {"sigma_x", m.sigma_x}, {"sigma_y", m.sigma_y}};
}

json distribution_json(const FockRepr& r, int n_max) {
  const auto d = photon_number_distribution(r, n_max);
  return {{"mean", mean_photon_number(r)}, {"n_max", n_max}, {"tail", d.tail}};
}

void write_distribution(const fs::path& path, const FockRepr& r, int n_max) {
  const auto d = photon_number_distribution(r, n_max);
  std::vector<double> n(d.p.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = static_cast<double>(i);
  write_table_csv(path, {"n", "probability"}, {n, d.p});
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw IoError("write failed: " + path.string());
}

void check_version(const YAML::Node& root) {
  if (!root.IsMap()) throw ScenarioParseError("scenario must be a mapping");
  const int v = req<int>(root, "version", "scenario");
  if (v != 1) throw ScenarioParseError("unsupported scenario version " + std::to_string(v) + " (expected 1)");
}

std::uint64_t scenario_seed(const YAML::Node& root, const std::optional<std::uint64_t>& override_seed) {
  if (override_seed) return *override_seed;
  return opt<std::uint64_t>(root, "seed", 0, "scenario");
}

// ---------------------------------------------------------------------------
// Spatial benches

struct SpatialContext {
  const YAML::Node& root;
  const fs::path& out;
  std::uint64_t seed;
  int threads;
  bool enforce;
  bool write;
  std::ostream& log;
};

/// Runs (or, with write == false, only checks) the element list. Returns
/// the failures of certificates that do not abort the run.
std::vector<std::string> run_spatial(const SpatialContext& cx, json& summary) {
  const YAML::Node& root = cx.root;
  const double k0 = req<double>(root, "k0", "scenario");
  const Grid2D grid = parse_grid(child(root, "grid", "scenario"));
  const YAML::Node state = child(root, "state", "scenario");
  const FockRepr repr = parse_repr(child(state, "repr", "state"));
  SpatialField2D cur = parse_packet(child(state, "packet", "state"), grid);
  QuantumLightState qs(repr, cur);
  const YAML::Node outputs = root["outputs"];
  const int n_max = opt<int>(outputs, "n_max", 64, "outputs");
  std::vector<std::string> failures;

  summary["k0"] = k0;
  summary["grid"] = {{"nx", grid.nx}, {"ny", grid.ny}, {"dx", grid.dx}, {"dy", grid.dy}};
  summary["input"] = {{"norm", norm2(cur)}, {"moments", moments_json(cur)}};
  summary["repr"] = repr_json(repr);
  json files = json::array();
  json index = json::array();
  if (cx.write) {
    write_grid(cx.out / "input.qfo", cur);
    files.push_back("input.qfo");
  }

  const YAML::Node elements = child(root, "elements", "scenario");
  if (!elements.IsSequence()) throw ScenarioParseError("'elements' must be a list" + where(elements));
  json records = json::array();
  double z_total = 0.0;
  std::vector<std::string> slice_files;
  std::vector<double> slice_z, slice_elem;

  auto step = [&](const SpatialMap& map) {
    if (!cx.write) return;
    if (cx.enforce) {
      try {
        qs = apply_unitary(qs, map);
      } catch (const InvalidArgument& e) {
        throw GuardViolation("unitarity", e.what(), "norm-preserving element parameters");
      }
      cur = std::get<SpatialField2D>(qs.packet);
    } else {
      cur = map(cur);
    }
  };

  for (std::size_t k = 0; k < elements.size(); ++k) {
    const YAML::Node e = elements[k];
    const std::string ctx = "elements[" + std::to_string(k) + "]";
    const auto type = req<std::string>(e, "type", ctx);
    json rec = {{"type", type}};
    json margins = json::object();

    if (type == "fresnel") {
      const double z = req<double>(e, "z", ctx);
      const int slices = opt<int>(e, "slices", 0, ctx);
      const double zmax = fresnel_max_z(cur.grid, k0);
      margins["aliasing"] = zmax - std::abs(z);
      rec["z"] = z;
      if (cx.enforce && std::abs(z) > zmax * (1.0 + 1e-12))
        throw GuardViolation("fresnel-aliasing", ctx + ": |z| = " + std::to_string(std::abs(z)) + " too long",
                             "|z| <= " + std::to_string(zmax));
      if (cx.write && slices > 0) {
        const SpatialField2D start = cur;
        std::vector<SpatialField2D> out(static_cast<std::size_t>(slices) + 1);
        parallel_for(out.size(), cx.threads, [&](std::size_t i) {
          out[i] = fresnel_propagate(start, z * static_cast<double>(i) / slices, k0, cx.enforce);
        });
        fs::create_directories(cx.out / "slices");
        for (std::size_t i = 0; i < out.size(); ++i) {
          const std::string name = "slices/e" + std::to_string(k) + "_s" + std::to_string(i) + ".qfo";
          const DensityGrid d = probability_density(out[i]);
          write_grid(cx.out / name, d.grid, d.values);
          slice_files.push_back(name);
          slice_elem.push_back(static_cast<double>(k));
          slice_z.push_back(z_total + z * static_cast<double>(i) / slices);
        }
      }
      step([&](const SpatialField2D& f) { return fresnel_propagate(f, z, k0, cx.enforce); });
      z_total += z;
    } else if (type == "lens_mask") {
      const double f = focal_length(e, cur.grid, k0, ctx);
      rec["f"] = f;
      step([&](const SpatialField2D& fl) { return apply_phase_mask(fl, lens_phase(f, k0, fl.grid)); });
    } else if (type == "lens") {
      const LensOperator L{focal_length(e, cur.grid, k0, ctx), k0};
      rec["f"] = L.f_len;
      if (cx.write) {
        qs = cx.enforce ? lens_apply_state(qs, L) : QuantumLightState(qs.repr, normalized(lens_apply(cur, L, false)));
        cur = std::get<SpatialField2D>(qs.packet);
      }
      z_total += 2.0 * L.f_len;
    } else if (type == "four_f") {
      const FourF sys{focal_length(e, cur.grid, k0, ctx), k0};
      rec["f"] = sys.f_len;
      const PupilBuild pupil = build_pupil(child(e, "pupil", ctx), confocal_grid(cur.grid, sys), sys, cx.seed + k);
      rec["pupil"] = pupil.info;
      if (!pupil.failure.empty()) failures.push_back(ctx + ": " + pupil.failure);
      if (cx.write) {
        const std::string name = "pupil_e" + std::to_string(k) + ".qfo";
        write_grid(cx.out / name, pupil.mask.grid, pupil.mask.phi);
        files.push_back(name);
        qs = cx.enforce ? four_f_apply_state(qs, sys, pupil.mask)
                        : QuantumLightState(qs.repr, normalized(four_f_apply(cur, sys, pupil.mask, false)));
        cur = std::get<SpatialField2D>(qs.packet);
      }
      z_total += 4.0 * sys.f_len;
    } else if (type == "grating") {
      const GratingSpec g = build_grating(e, ctx);
      rec["period"] = g.period;
      rec["orders"] = g.R;
      rec["tail"] = g.tail;
      margins["truncation"] = 1e-6 - g.tail;
      if (cx.enforce && g.tail > 1e-6)
        throw GuardViolation("grating-truncation", ctx + ": truncated series carries power defect " + std::to_string(g.tail),
                             "raise 'orders' until the tail is <= 1e-6");
      step([&](const SpatialField2D& f) { return grating_diffract(f, g, k0); });
    } else if (type == "fraunhofer") {
      const double z = req<double>(e, "z", ctx);
      const double zmin = 20.0 * fraunhofer_threshold(cur, k0);
      margins["far_field"] = z - zmin;
      rec["z"] = z;
      if (cx.enforce && z < zmin)
        throw GuardViolation("far-field", ctx + ": z = " + std::to_string(z) + " is in the near field",
                             "z >= " + std::to_string(zmin));
      step([&](const SpatialField2D& f) { return fraunhofer_propagate(f, z, k0, cx.enforce); });
      z_total += z;
    } else {
      throw ScenarioParseError("unknown element type '" + type + "' in " + ctx + where(e));
    }
    if (cx.write) {
      rec["norm"] = norm2(cur);
      rec["moments"] = moments_json(cur);
    }
    rec["margins"] = margins;
    records.push_back(rec);
    cx.log << "  " << ctx << " " << type << " done\n";
  }
  summary["elements"] = records;

  if (cx.write) {
    const auto final_name = opt<std::string>(outputs, "final_field", "output.qfo", "outputs");
    std::set<std::string> names(files.begin(), files.end());
    if (!names.insert(final_name).second) throw ScenarioParseError("output path '" + final_name + "' is not unique");
    write_grid(cx.out / final_name, cur);
    files.push_back(final_name);
    if (opt<bool>(outputs, "density", true, "outputs")) {
      const DetectionDensity d = joint_detection_density(QuantumLightState(qs.repr, normalized(cur)));
      write_grid(cx.out / "density.qfo", d.density.grid, d.density.values);
      files.push_back("density.qfo");
      summary["detection"] = {{"mean_photons", d.mean_photons}, {"integral", d.density.integral()}};
    }
    if (!slice_files.empty()) {
      std::string idx = "element,z,file\n";
      for (std::size_t i = 0; i < slice_files.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%d,%.17g,", static_cast<int>(slice_elem[i]), slice_z[i]);
        idx += buf + slice_files[i] + "\n";
      }
      std::ofstream os(cx.out / "slices" / "index.csv", std::ios::trunc);
      if (!os) throw IoError("cannot write slice index");
      os << idx;
      files.push_back("slices/index.csv");
    }
    write_distribution(cx.out / "distribution.csv", qs.repr, n_max);
    files.push_back("distribution.csv");
    summary["output"] = {{"norm", norm2(cur)},
                         {"moments", moments_json(cur)},
                         {"grid", {{"nx", cur.grid.nx}, {"ny", cur.grid.ny}, {"dx", cur.grid.dx}, {"dy", cur.grid.dy}}}};
    summary["photon_statistics"] = distribution_json(qs.repr, n_max);
    summary["photon_statistics"]["unchanged"] =
        photon_number_distribution(qs.repr, n_max).p == photon_number_distribution(repr, n_max).p;
    summary["path_length"] = z_total;
    summary["files"] = files;
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Pulse shaper bench

struct ShaperSetup {
  SpectralField1D input;
  PulseShaperSpec spec;
  FockRepr repr;
  json info;
};

ShaperSetup parse_shaper(const YAML::Node& root, std::uint64_t seed) {
  ShaperSetup s;
  const YAML::Node sp = child(root, "spectrum", "scenario");
  const int n = req<int>(sp, "n", "spectrum");
  const double wmax = req<double>(sp, "omega_max", "spectrum");
  const double bw = req<double>(sp, "bandwidth", "spectrum");
  const int inband = req<int>(sp, "samples_in_band", "spectrum");
  const auto shape = opt<std::string>(sp, "shape", "rect", "spectrum");
  if (shape != "rect") throw ScenarioParseError("only rect spectra are supported by the shaper bench" + where(sp));
  s.input = make_rect_spectrum(n, wmax - bw, wmax, inband);

  const YAML::Node sh = child(root, "shaper", "scenario");
  const double period = req<double>(sh, "period", "shaper");
  const int R = req<int>(sh, "orders", "shaper");
  const YAML::Node pu = child(sh, "pupil", "shaper");
  const auto pkind = req<std::string>(pu, "kind", "shaper.pupil");
  const double amp = opt<double>(pu, "amplitude", 1.0, "shaper.pupil");
  const int samples = opt<int>(sh, "samples", 16 * std::max(R, 1), "shaper");
  s.spec.pupil = grating_coefficients(profile(pkind, period, amp, "shaper.pupil"), period, R, samples);
  s.spec.f_len = req<double>(sh, "f", "shaper");
  s.spec.c = opt<double>(sh, "c", 1.0, "shaper");
  s.spec.spot_fraction = opt<double>(sh, "spot_fraction", 1e-5, "shaper");
  s.spec.spot_samples = opt<int>(sh, "spot_samples", 129, "shaper");

  const YAML::Node th = child(root, "theta", "scenario");
  const auto tkind = req<std::string>(th, "kind", "theta");
  json tinfo = {{"kind", tkind}};
  if (tkind == "zero") {
    s.spec.theta = SpectralPhase::zero();
  } else if (tkind == "linear") {
    s.spec.theta = SpectralPhase::linear(req<double>(th, "tau", "theta"));
    tinfo["tau"] = s.spec.theta.tau;
  } else if (tkind == "chips") {
    const int chips = opt<int>(th, "chips", 31, "theta");
    if (th["phases"]) {
      s.spec.theta = SpectralPhase::chips(wmax - bw, wmax, req<std::vector<double>>(th, "phases", "theta"));
    } else {
      s.spec.theta = SpectralPhase::random_chips(wmax - bw, wmax, chips, seed);
      tinfo["seed"] = seed;
    }
    tinfo["phases"] = s.spec.theta.chip_phases;
  } else {
    throw ScenarioParseError("unknown theta kind '" + tkind + "'" + where(th));
  }
  s.repr = parse_repr(child(child(root, "state", "scenario"), "repr", "state"));
  s.info = {{"spectrum", {{"n", n}, {"omega_max", wmax}, {"bandwidth", bw}, {"samples_in_band", inband}}},
            {"shaper", {{"f", s.spec.f_len}, {"c", s.spec.c}, {"period", period}, {"orders", R}, {"pupil", pkind}}},
            {"theta", tinfo}};
  return s;
}

json certificate_json(const ShaperCertificate& c) {
  return {{"p0_abs", c.p0_abs},
          {"p0_margin", c.p0_margin},
          {"omega_max", c.omega_max},
          {"delta_omega", c.delta_omega},
          {"delta_omega_limit", c.delta_omega_limit},
          {"delta_omega_margin", c.delta_omega_margin},
          {"pupil_tail", c.tail},
          {"passed", c.passed}};
}

double peak_time(const TemporalField1D& t) {
  int best = 0;
  for (int i = 1; i < t.n; ++i)
    if (std::norm(t.values[i]) > std::norm(t.values[best])) best = i;
  return t.coord(best);
}

int run_shaper(const YAML::Node& root, const RunOptions& opt_, json& summary, std::ostream& log) {
  const std::uint64_t seed = scenario_seed(root, opt_.seed);
  ShaperSetup s = parse_shaper(root, seed);
  summary["seed"] = seed;
  for (auto& [k, v] : s.info.items()) summary[k] = v;
  const int n_max = opt<int>(root["outputs"], "n_max", 64, "outputs");

  const ShaperResult res = pulse_shaper_apply(s.input, s.spec, opt_.threads, !opt_.override_guards);
  const QuantumLightState before(s.repr, s.input);
  const QuantumLightState after = pulse_shaper_apply_state(before, s.spec, !opt_.override_guards);
  log << "  pulse shaper: relative L2 " << res.relative_l2 << ", residual " << res.simulated.residual << "\n";

  const fs::path& out = opt_.out_dir;
  const TemporalField1D tin = spectral_to_temporal(s.input);
  const TemporalField1D tout = spectral_to_temporal(res.closed_form);
  const TemporalField1D tsim = spectral_to_temporal(res.simulated.output);
  write_csv(out / "spectrum_in.csv", s.input, "omega");
  write_csv(out / "spectrum_out.csv", res.closed_form, "omega");
  write_csv(out / "spectrum_sim.csv", res.simulated.output, "omega");
  write_csv(out / "temporal_in.csv", tin, "t");
  write_csv(out / "temporal_out.csv", tout, "t");
  write_csv(out / "temporal_sim.csv", tsim, "t");
  write_distribution(out / "distribution.csv", after.repr, n_max);

  summary["certificate"] = certificate_json(res.certificate);
  summary["two_path"] = {{"relative_l2", res.relative_l2},
                         {"residual", res.simulated.residual},
                         {"transmitted", res.simulated.transmitted},
                         {"agreement_ok", res.relative_l2 <= 1e-3},
                         {"residual_ok", res.simulated.residual <= 1e-4}};
  summary["temporal"] = {{"peak_in", peak_time(tin)}, {"peak_out", peak_time(tout)}, {"transit", 8.0 * s.spec.f_len / s.spec.c}};
  summary["repr"] = repr_json(after.repr);
  summary["photon_statistics"] = distribution_json(after.repr, n_max);
  summary["photon_statistics"]["unchanged"] =
      photon_number_distribution(after.repr, n_max).p == photon_number_distribution(s.repr, n_max).p;
  summary["files"] = {"spectrum_in.csv", "spectrum_out.csv", "spectrum_sim.csv", "temporal_in.csv",
                      "temporal_out.csv", "temporal_sim.csv", "distribution.csv"};
  return (res.relative_l2 <= 1e-3 && res.simulated.residual <= 1e-4) ? exit_ok : exit_check_failed;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const GuardViolation& g) {
    err << "guard violated [" << g.guard() << "]: " << g.what() << "\n";
    return exit_guard;
  } catch (const ScenarioParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const YAML::Exception& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const InvalidArgument& e) {
    err << "invalid scenario parameter: " << e.what() << "\n";
    return exit_parse;
  } catch (const GridMismatch& e) {
    err << "invalid scenario parameter: " << e.what() << "\n";
    return exit_parse;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return exit_io;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return exit_io;
  }
}

YAML::Node load(const fs::path& file) {
  if (!fs::exists(file)) throw IoError("scenario file not found: " + file.string());
  return YAML::LoadFile(file.string());
}

} // namespace

int run_scenario(const fs::path& file, const RunOptions& opt_, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const YAML::Node root = load(file);
    check_version(root);
    const auto kind = opt<std::string>(root, "kind", "spatial", "scenario");
    json summary = {{"scenario", opt<std::string>(root, "name", file.stem().string(), "scenario")},
                    {"version", 1},
                    {"kind", kind},
                    {"guards_overridden", opt_.override_guards}};
    fs::create_directories(opt_.out_dir);
    int code = exit_ok;
    if (kind == "pulse_shaper") {
      code = run_shaper(root, opt_, summary, log);
    } else if (kind == "spatial") {
      const std::uint64_t seed = scenario_seed(root, opt_.seed);
      summary["seed"] = seed;
      const auto failures = run_spatial({root, opt_.out_dir, seed, opt_.threads, !opt_.override_guards, true, log}, summary);
      summary["certificate_failures"] = failures;
      if (!failures.empty()) code = exit_check_failed;
    } else {
      throw ScenarioParseError("unknown scenario kind '" + kind + "'");
    }
    write_json(opt_.out_dir / "summary.json", summary);
    return code;
  });
}

int verify_scenario(const fs::path& file, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const YAML::Node root = load(file);
    check_version(root);
    const auto kind = opt<std::string>(root, "kind", "spatial", "scenario");
    if (kind == "pulse_shaper") {
      const ShaperSetup s = parse_shaper(root, scenario_seed(root, std::nullopt));
      const ShaperCertificate c = validate_shaper(s.spec, s.input.support());
      out << c.report();
      if (!c.passed) {
        err << (c.no_dc ? "guard violated [shaper-separation]: domega < omega_max/R fails\n"
                        : "guard violated [shaper-no-dc]: |p0| <= 1e-9 fails\n");
        return static_cast<int>(exit_guard);
      }
      return static_cast<int>(exit_ok);
    }
    if (kind != "spatial") throw ScenarioParseError("unknown scenario kind '" + kind + "'");
    json summary;
    std::ostringstream quiet;
    const fs::path none;
    const auto failures = run_spatial({root, none, scenario_seed(root, std::nullopt), 1, true, false, quiet}, summary);
    out << "input norm^2: " << summary["input"]["norm"].get<double>() << "\n";
    for (const auto& e : summary["elements"]) {
      out << e["type"].get<std::string>();
      for (const auto& [k, v] : e["margins"].items()) out << "  " << k << " margin " << v.get<double>();
      if (e.contains("pupil") && e["pupil"].contains("lattice")) out << "  lattice " << e["pupil"]["lattice"].dump();
      out << "\n";
    }
    for (const auto& f : failures) err << "certificate failed: " << f << "\n";
    return static_cast<int>(failures.empty() ? exit_ok : exit_check_failed);
  });
}

std::string default_scenario_yaml() {
  return R"(# Lens bench: Gaussian -> free space f -> thin lens -> free space f.
# f: matched picks k0 n dx^2 / (2 pi), where the back focal plane has the
# input pitch and the transfer-function guard is met with equality.
version: 1
kind: spatial
name: lens-bench
seed: 1
k0: 31.41592653589793
grid: {n: 256, pitch: 0.05}
state:
  repr: {kind: coherent, alpha: 1.3}
  packet: {kind: gaussian, w: 0.4, center: [0, 0], tilt: [0, 0]}
elements:
  - {type: fresnel, z: 3.2, slices: 16}
  - {type: lens_mask, f: matched}
  - {type: fresnel, z: 3.2, slices: 16}
outputs: {final_field: output.qfo, density: true, n_max: 64}
)";
}

} // namespace qfo
