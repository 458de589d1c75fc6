#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sld/continuum.hpp"
#include "sld/discrete.hpp"
#include "sld/errors.hpp"
#include "sld/scattering.hpp"
#include "sld/schemes.hpp"
#include "sld/version.hpp"

namespace sld {

using OrderedJson = nlohmann::ordered_json;

/// One front-end run, merged from built-in defaults, an optional JSON
/// config file, and command-line flags, in that order of precedence.
/// The defaults are the common working point of all reference curves:
/// gamma_1d = 0.1, delta_c = -90, omega_0 = 1. The front end restricts
/// omega_0 to real amplitudes.
struct RunConfig {
  std::string command = "dispersion";  // dispersion | scatter | figure
  std::string scheme = "lambda";       // lambda | dualv (discrete model)
  std::string model = "continuum-infinite";
  SchemeParams params;
  int order = 25;        // harmonic cutoff for continuum-truncated
  double delta_d = 0.0;  // frequency split between the two drive components
  double delta_min = 1e-5;
  double delta_max = 1.0;
  int points = 200;
  std::string grid = "log";  // log | linear
  std::string placement = "regular:2:0";
  long long atoms = 40000;  // ensemble size for regular-placement scatter
  int realizations = 1;     // disorder draws for random-placement scatter
  std::string observable = "total";  // dual-V channel: total | convert
  std::string preset;                // figure bundle name
  std::string out;                   // output file, or directory for figures
};

/// Parsed form of the placement string: "regular:<atoms>:<phi/pi>" for a
/// lattice cell with a drive phase, "random:<atoms>:<halfwaves>:<seed>"
/// for uniformly drawn positions over a cell of n_u half-wavelengths.
struct PlacementSpec {
  bool regular = true;
  int unit_atoms = 2;
  double phi_over_pi = 0.0;
  long long count = 0;
  int n_u = 1;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline long long parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw ConfigError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

inline std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || s[0] == '-')
    throw ConfigError("bad seed: '" + s + "'");
  return v;
}

inline double parse_num(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw ConfigError(std::string("bad ") + what + ": '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace detail

inline PlacementSpec parse_placement(const std::string& s) {
  auto part = detail::split(s, ':');
  PlacementSpec ps;
  if (part[0] == "regular" && part.size() == 3) {
    ps.regular = true;
    ps.unit_atoms =
        static_cast<int>(detail::parse_int(part[1], "atom count"));
    ps.phi_over_pi = detail::parse_num(part[2], "drive phase");
    return ps;
  }
  if (part[0] == "random" && part.size() == 4) {
    ps.regular = false;
    ps.count = detail::parse_int(part[1], "atom count");
    ps.n_u = static_cast<int>(detail::parse_int(part[2], "cell span"));
    ps.seed = detail::parse_seed(part[3]);
    return ps;
  }
  throw ConfigError(
      "placement must be regular:<atoms>:<phi/pi> or "
      "random:<atoms>:<halfwaves>:<seed>, got '" +
      s + "'");
}

/// Full config echo in a fixed key order, so identical runs emit
/// byte-identical headers and any output file can be rerun via --config.
/// The output path is deliberately not echoed: file content must not
/// depend on where it is written.
inline OrderedJson config_json(const RunConfig& cfg) {
  OrderedJson j;
  j["command"] = cfg.command;
  j["scheme"] = cfg.scheme;
  j["model"] = cfg.model;
  j["gamma_1d"] = cfg.params.gamma_1d;
  j["gamma_prime"] = cfg.params.gamma_prime;
  j["delta_c"] = cfg.params.delta_c;
  j["omega_0"] = cfg.params.omega_0.real();
  j["order"] = cfg.order;
  j["delta_d"] = cfg.delta_d;
  j["delta_min"] = cfg.delta_min;
  j["delta_max"] = cfg.delta_max;
  j["points"] = cfg.points;
  j["grid"] = cfg.grid;
  j["placement"] = cfg.placement;
  j["atoms"] = cfg.atoms;
  j["realizations"] = cfg.realizations;
  j["observable"] = cfg.observable;
  j["preset"] = cfg.preset;
  return j;
}

inline void apply_json(RunConfig& cfg, const OrderedJson& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "command")
        cfg.command = value.get<std::string>();
      else if (key == "scheme")
        cfg.scheme = value.get<std::string>();
      else if (key == "model")
        cfg.model = value.get<std::string>();
      else if (key == "gamma_1d")
        cfg.params.gamma_1d = value.get<double>();
      else if (key == "gamma_prime")
        cfg.params.gamma_prime = value.get<double>();
      else if (key == "delta_c")
        cfg.params.delta_c = value.get<double>();
      else if (key == "omega_0")
        cfg.params.omega_0 = value.get<double>();
      else if (key == "order")
        cfg.order = value.get<int>();
      else if (key == "delta_d")
        cfg.delta_d = value.get<double>();
      else if (key == "delta_min")
        cfg.delta_min = value.get<double>();
      else if (key == "delta_max")
        cfg.delta_max = value.get<double>();
      else if (key == "points")
        cfg.points = value.get<int>();
      else if (key == "grid")
        cfg.grid = value.get<std::string>();
      else if (key == "placement")
        cfg.placement = value.get<std::string>();
      else if (key == "atoms")
        cfg.atoms = value.get<long long>();
      else if (key == "realizations")
        cfg.realizations = value.get<int>();
      else if (key == "observable")
        cfg.observable = value.get<std::string>();
      else if (key == "preset")
        cfg.preset = value.get<std::string>();
      else if (key == "out")
        cfg.out = value.get<std::string>();
      else
        throw ConfigError("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  OrderedJson j;
  try {
    j = OrderedJson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") +
                      e.what());
  }
  apply_json(cfg, j);
}

/// Detuning grid. A single-point grid sits at delta_min regardless of
/// spacing, which keeps one-shot evaluations (including delta = 0) legal
/// under the default log spacing.
inline std::vector<double> config_grid(const RunConfig& cfg) {
  if (cfg.points < 1) throw ConfigError("grid needs at least one point");
  if (cfg.points == 1) return {cfg.delta_min};
  if (!(cfg.delta_min < cfg.delta_max))
    throw ConfigError("delta_min must be below delta_max");
  const int n = cfg.points;
  std::vector<double> g(n);
  if (cfg.grid == "log") {
    if (!(cfg.delta_min > 0.0))
      throw ConfigError("log grids need a positive delta_min");
    double ratio = cfg.delta_max / cfg.delta_min;
    for (int i = 0; i < n; ++i)
      g[i] = cfg.delta_min *
             std::pow(ratio, static_cast<double>(i) / (n - 1));
  } else if (cfg.grid == "linear") {
    for (int i = 0; i < n; ++i)
      g[i] = cfg.delta_min + (cfg.delta_max - cfg.delta_min) *
                                 static_cast<double>(i) / (n - 1);
  } else {
    throw ConfigError("grid must be 'log' or 'linear', got '" + cfg.grid +
                      "'");
  }
  return g;
}

namespace detail {

/// Rethrows numerical failures with the detuning attached; poles pass
/// through untouched because sweeps record them as gaps instead.
template <typename Fn>
auto at_delta(double d, Fn&& fn) {
  try {
    return fn();
  } catch (const PoleError&) {
    throw;
  } catch (const NumericError& e) {
    throw NumericError("delta = " + csv_num(d) + ": " + e.what());
  }
}

}  // namespace detail

/// Band structure for the configured model over the configured grid.
/// Continuum models emit the two branches of their closed form; discrete
/// models emit one band per cell eigenvalue (two for lambda, four for
/// dual-V), connected across the grid by the sweep tracker.
inline DispersionCurve dispersion_curve(const RunConfig& cfg) {
  cfg.params.validate();
  const SchemeParams p = cfg.params;
  const std::vector<double> grid = config_grid(cfg);

  if (cfg.model == "discrete") {
    PlacementSpec ps = parse_placement(cfg.placement);
    Placement pl;
    double phi = 0.0;
    if (ps.regular) {
      pl = regular_positions(ps.unit_atoms);
      phi = ps.phi_over_pi;
    } else {
      if (ps.count > INT32_MAX)
        throw ConfigError("random placement atom count too large");
      pl = random_positions(static_cast<int>(ps.count), ps.n_u, ps.seed);
    }
    if (cfg.scheme == "lambda") {
      return sweep_dispersion(grid, 2, pl.size(), [&](double d) {
        return detail::at_delta(d, [&] { return lambda_bands(p, pl, d, phi); });
      });
    }
    if (cfg.scheme == "dualv") {
      return sweep_dispersion(grid, 4, pl.size(), [&](double d) {
        return detail::at_delta(d, [&] { return dualv_bands(p, pl, d); });
      });
    }
    throw ConfigError("scheme must be 'lambda' or 'dualv', got '" +
                      cfg.scheme + "'");
  }

  std::function<std::array<Complex, 2>(double)> branches;
  if (cfg.model == "continuum-eit") {
    branches = [p](double d) {
      Complex q = eit_q(p, d);
      return std::array<Complex, 2>{q, -q};
    };
  } else if (cfg.model == "continuum-quadratic") {
    branches = [p](double d) {
      Complex q = dualv_q_quadratic(p, d);
      return std::array<Complex, 2>{q, -q};
    };
  } else if (cfg.model == "continuum-linear") {
    branches = [p](double d) {
      Complex q = dualv_q_linear(p, d);
      return std::array<Complex, 2>{q, -q};
    };
  } else if (cfg.model == "continuum-infinite") {
    branches = [p](double d) {
      Complex q = lambda_infinite_q(p, d);
      return std::array<Complex, 2>{q, -q};
    };
  } else if (cfg.model == "continuum-truncated") {
    int order = cfg.order;
    double dd = cfg.delta_d;
    branches = [p, order, dd](double d) {
      return truncated_q(p, d, order, dd);
    };
  } else {
    throw ConfigError("unknown model '" + cfg.model + "'");
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  DispersionCurve out;
  out.delta = grid;
  out.bands.assign(2, std::vector<Complex>(grid.size(), Complex(nan, nan)));
  std::vector<char> is_pole(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      auto b = detail::at_delta(grid[i], [&] { return branches(grid[i]); });
      out.bands[0][i] = b[0];
      out.bands[1][i] = b[1];
    } catch (const PoleError&) {
      is_pole[i] = 1;
    }
  });
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (is_pole[i]) out.skipped.push_back(grid[i]);
  return out;
}

/// Transmission/reflection spectrum for the configured ensemble.
inline Spectrum scatter_spectrum(const RunConfig& cfg) {
  SpectrumSpec s;
  s.params = cfg.params;
  if (cfg.scheme == "lambda")
    s.scheme = Scheme::lambda;
  else if (cfg.scheme == "dualv")
    s.scheme = Scheme::dualv;
  else
    throw ConfigError("scheme must be 'lambda' or 'dualv', got '" +
                      cfg.scheme + "'");
  if (cfg.observable == "total")
    s.observable = DualVObservable::total;
  else if (cfg.observable == "convert")
    s.observable = DualVObservable::convert;
  else
    throw ConfigError("observable must be 'total' or 'convert', got '" +
                      cfg.observable + "'");
  if (s.observable == DualVObservable::convert && s.scheme != Scheme::dualv)
    throw ConfigError("observable 'convert' needs --scheme dualv");

  PlacementSpec ps = parse_placement(cfg.placement);
  if (ps.regular) {
    if (cfg.atoms < 0) throw ConfigError("negative atom count");
    s.regular = true;
    s.unit_atoms = ps.unit_atoms;
    s.phi_over_pi = ps.phi_over_pi;
    s.n_total = cfg.atoms;
  } else {
    s.regular = false;
    s.n_total = ps.count;
    s.n_u = ps.n_u;
    s.seed = ps.seed;
    s.realizations = cfg.realizations;
  }

  const std::vector<double> grid = config_grid(cfg);
  try {
    return spectrum(s, grid);
  } catch (const NumericError&) {
    // Replay point by point so the failure names its detuning; the
    // placement draws do not depend on the grid, so the replay fails at
    // the same spot.
    for (double d : grid) {
      try {
        spectrum(s, std::vector<double>{d});
      } catch (const NumericError& e) {
        throw NumericError("delta = " + detail::csv_num(d) + ": " + e.what());
      }
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// CSV output. Every file opens with the code version and the full config
// echo as '#' comments, then one plain header row; all numbers are printed
// with %.17g so they round-trip exactly.

namespace detail {

inline void csv_preamble(std::ostream& os, const RunConfig& cfg) {
  os << "# sld " << kVersion << "\n";
  os << "# config " << config_json(cfg).dump() << "\n";
}

inline std::ofstream open_out(const std::string& path) {
  if (path.empty()) throw ConfigError("an output path is required (--out)");
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path + "'");
  return os;
}

}  // namespace detail

/// One block of rows per band, blank-line separated; the branch column
/// repeats the block index. Skipped pole detunings appear both as a
/// '# skipped' comment and as nan rows at their grid positions.
inline void write_dispersion_csv(std::ostream& os, const RunConfig& cfg,
                                 const DispersionCurve& curve) {
  detail::csv_preamble(os, cfg);
  if (!curve.skipped.empty()) {
    os << "# skipped";
    for (double d : curve.skipped) os << ' ' << detail::csv_num(d);
    os << "\n";
  }
  os << "delta,re_q_over_n0,im_q_over_n0,branch\n";
  for (std::size_t b = 0; b < curve.bands.size(); ++b) {
    if (b > 0) os << "\n";
    for (std::size_t i = 0; i < curve.delta.size(); ++i) {
      Complex q = curve.bands[b][i];
      os << detail::csv_num(curve.delta[i]) << ','
         << detail::csv_num(q.real()) << ',' << detail::csv_num(q.imag())
         << ',' << b << "\n";
    }
  }
}

inline void write_spectrum_csv(std::ostream& os, const RunConfig& cfg,
                               const Spectrum& spec) {
  detail::csv_preamble(os, cfg);
  os << "delta,T_mean,R_mean,T_iqr,R_iqr,underflow_flag\n";
  for (std::size_t i = 0; i < spec.delta.size(); ++i) {
    const SpectrumPoint& pt = spec.points[i];
    os << detail::csv_num(spec.delta[i]) << ',' << detail::csv_num(pt.t_mean)
       << ',' << detail::csv_num(pt.r_mean) << ','
       << detail::csv_num(pt.t_iqr) << ',' << detail::csv_num(pt.r_iqr)
       << ',' << (pt.underflow ? 1 : 0) << "\n";
  }
}

inline void write_resonance_csv(std::ostream& os, const RunConfig& cfg,
                                const std::vector<Resonance>& res) {
  detail::csv_preamble(os, cfg);
  os << "m,delta\n";
  for (const Resonance& r : res)
    os << r.m << ',' << detail::csv_num(r.delta) << "\n";
}

inline void run_dispersion(const RunConfig& cfg) {
  DispersionCurve curve = dispersion_curve(cfg);
  std::ofstream os = detail::open_out(cfg.out);
  write_dispersion_csv(os, cfg, curve);
}

inline void run_scatter(const RunConfig& cfg) {
  Spectrum spec = scatter_spectrum(cfg);
  std::ofstream os = detail::open_out(cfg.out);
  write_spectrum_csv(os, cfg, spec);
}

namespace detail {

/// Band whose real part ends highest; the one that climbs through the
/// m pi / N resonance ladder.
inline int rising_band(const DispersionCurve& curve) {
  int best = 0;
  double best_re = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < curve.bands.size(); ++b) {
    for (std::size_t i = curve.bands[b].size(); i-- > 0;) {
      double re = curve.bands[b][i].real();
      if (std::isnan(re)) continue;
      if (re > best_re) {
        best_re = re;
        best = static_cast<int>(b);
      }
      break;
    }
  }
  return best;
}

inline void emit_series(OrderedJson& files, const std::filesystem::path& dir,
                        const std::string& name, RunConfig cfg) {
  cfg.out = (dir / name).string();
  if (cfg.command == "dispersion")
    run_dispersion(cfg);
  else
    run_scatter(cfg);
  files.push_back(name);
}

}  // namespace detail

/// Writes every dataset of one preset figure into the output directory,
/// plus a manifest listing the files. Each CSV carries its own config
/// echo, so any single curve can be reproduced standalone.
inline void run_figure(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.out.empty())
    throw ConfigError("figures need --out <directory>");
  if (cfg.preset.empty())
    throw ConfigError("figures need --preset <name>");

  RunConfig base;
  base.preset = cfg.preset;
  fs::path dir(cfg.out);
  fs::create_directories(dir);
  OrderedJson files = OrderedJson::array();

  if (cfg.preset == "fig2") {
    // Continuum band structures: secular forms, the truncation family,
    // the resummed standing wave, and a split-drive variant.
    RunConfig d = base;
    d.command = "dispersion";
    d.delta_min = 1e-5;
    d.delta_max = 1.0;
    d.points = 200;
    d.grid = "log";
    {
      RunConfig c = d;
      c.model = "continuum-eit";
      detail::emit_series(files, dir, "eit.csv", c);
    }
    {
      RunConfig c = d;
      c.model = "continuum-quadratic";
      detail::emit_series(files, dir, "dualv_quadratic.csv", c);
    }
    for (int order = 1; order <= 6; ++order) {
      RunConfig c = d;
      c.model = "continuum-truncated";
      c.order = order;
      detail::emit_series(files, dir,
                          "truncated_" + std::to_string(order) + ".csv", c);
    }
    {
      RunConfig c = d;
      c.model = "continuum-infinite";
      detail::emit_series(files, dir, "lambda_infinite.csv", c);
    }
    {
      RunConfig c = d;
      c.model = "continuum-truncated";
      c.order = 25;
      c.delta_d = 1.0;
      detail::emit_series(files, dir, "dual_color.csv", c);
    }
  } else if (cfg.preset == "fig3") {
    // Randomly placed ensembles against the continuum laws.
    RunConfig d = base;
    d.command = "dispersion";
    d.delta_min = 1e-4;
    d.delta_max = 1e-1;
    d.points = 120;
    d.grid = "log";
    {
      RunConfig c = d;
      c.model = "discrete";
      c.scheme = "lambda";
      c.placement = "random:10000:5000:42";
      detail::emit_series(files, dir, "lambda_random.csv", c);
    }
    {
      RunConfig c = d;
      c.model = "discrete";
      c.scheme = "dualv";
      c.placement = "random:10000:5000:42";
      detail::emit_series(files, dir, "dualv_random.csv", c);
    }
    const std::pair<const char*, const char*> refs[] = {
        {"continuum-infinite", "lambda_infinite.csv"},
        {"continuum-quadratic", "dualv_quadratic.csv"},
        {"continuum-linear", "dualv_linear.csv"}};
    for (const auto& [model, name] : refs) {
      RunConfig c = d;
      c.model = model;
      detail::emit_series(files, dir, name, c);
    }
  } else if (cfg.preset == "fig4") {
    // Lattice cells of increasing size, at drive phase zero and shifted
    // by half a node spacing, against the resummed continuum band.
    RunConfig d = base;
    d.command = "dispersion";
    d.model = "discrete";
    d.scheme = "lambda";
    d.delta_min = 1e-8;
    d.delta_max = 1e-1;
    d.points = 150;
    d.grid = "log";
    for (int nu : {2, 4, 8, 16, 32}) {
      RunConfig c = d;
      c.placement = "regular:" + std::to_string(nu) + ":0";
      detail::emit_series(files, dir,
                          "lattice_nu" + std::to_string(nu) + ".csv", c);
      c.placement = "regular:" + std::to_string(nu) + ":" +
                    detail::csv_num(0.5 / nu);
      detail::emit_series(
          files, dir, "lattice_nu" + std::to_string(nu) + "_shifted.csv", c);
    }
    {
      RunConfig c = d;
      c.model = "continuum-infinite";
      detail::emit_series(files, dir, "lambda_infinite.csv", c);
    }
  } else if (cfg.preset == "fig5") {
    // Finite-ensemble spectra around the band gap: Bragg lattice,
    // disordered ensembles, and the matched-mass dual-V converter.
    RunConfig s = base;
    s.command = "scatter";
    s.delta_min = -0.02;
    s.delta_max = 0.005;
    s.points = 251;
    s.grid = "linear";
    {
      RunConfig c = s;
      c.scheme = "lambda";
      c.placement = "regular:2:0";
      c.atoms = 40000;
      detail::emit_series(files, dir, "lattice_mirror.csv", c);
    }
    {
      RunConfig c = s;
      c.scheme = "lambda";
      c.placement = "random:40000:20000:1";
      c.realizations = 100;
      detail::emit_series(files, dir, "random_ensemble.csv", c);
    }
    {
      // The converter curve needs no disorder averaging: one draw already
      // sits on the mirror curve through the gap.
      RunConfig c = s;
      c.scheme = "dualv";
      c.params.omega_0 = std::sqrt(2.0);
      c.placement = "random:40000:20000:1";
      c.realizations = 1;
      c.observable = "convert";
      detail::emit_series(files, dir, "dualv_convert.csv", c);
    }
  } else if (cfg.preset == "fig6") {
    // Transmission resonances of the lattice against the band structure,
    // plus the disorder-averaged spectrum that washes them out.
    RunConfig s = base;
    s.command = "scatter";
    s.scheme = "lambda";
    s.delta_min = 1e-5;
    s.delta_max = 1.5e-3;
    s.points = 597;
    s.grid = "linear";
    {
      RunConfig c = s;
      c.placement = "regular:2:0";
      c.atoms = 40000;
      detail::emit_series(files, dir, "lattice_spectrum.csv", c);
    }
    RunConfig d = s;
    d.command = "dispersion";
    d.model = "discrete";
    d.placement = "regular:2:0";
    d.atoms = 40000;
    DispersionCurve curve = dispersion_curve(d);
    {
      d.out = (dir / "lattice_dispersion.csv").string();
      std::ofstream os = detail::open_out(d.out);
      write_dispersion_csv(os, d, curve);
      files.push_back("lattice_dispersion.csv");
    }
    {
      auto res = resonance_locations(
          curve.delta, curve.bands[detail::rising_band(curve)], d.atoms);
      d.out = (dir / "resonances.csv").string();
      std::ofstream os = detail::open_out(d.out);
      write_resonance_csv(os, d, res);
      files.push_back("resonances.csv");
    }
    {
      RunConfig c = s;
      c.placement = "random:40000:20000:1";
      c.realizations = 10;
      detail::emit_series(files, dir, "random_spectrum.csv", c);
    }
  } else {
    throw ConfigError("unknown figure preset '" + cfg.preset + "'");
  }

  OrderedJson manifest;
  manifest["preset"] = cfg.preset;
  manifest["version"] = kVersion;
  manifest["files"] = files;
  std::ofstream os = detail::open_out((dir / "manifest.json").string());
  os << manifest.dump(2) << "\n";
}

inline void run(const RunConfig& cfg) {
  if (cfg.command == "dispersion")
    run_dispersion(cfg);
  else if (cfg.command == "scatter")
    run_scatter(cfg);
  else if (cfg.command == "figure")
    run_figure(cfg);
  else
    throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace sld
