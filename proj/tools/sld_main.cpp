#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "sld/cli.hpp"

namespace {

// Raw flag storage. Defaults live in RunConfig alone; a flag overrides the
// config file only when the user actually passed it, so the values here
// are placeholders until counted.
struct Flags {
  std::string config;
  std::string scheme;
  std::string model;
  double gamma_1d = 0.0;
  double gamma_prime = 0.0;
  double delta_c = 0.0;
  double omega_0 = 0.0;
  int order = 0;
  double delta_d = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  int points = 0;
  std::string grid;
  std::string placement;
  long long atoms = 0;
  int realizations = 0;
  std::string observable;
  std::string preset;
  std::string out;
};

void add_shared(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config,
                  "JSON config file; explicit flags override its values");
  cmd->add_option("--gamma-1d", f.gamma_1d,
                  "guided-mode decay rate; gamma-1d + gamma-prime must be 1");
  cmd->add_option("--gamma-prime", f.gamma_prime, "free-space decay rate");
  cmd->add_option("--delta-c", f.delta_c, "control-field detuning");
  cmd->add_option("--omega-0", f.omega_0, "control Rabi amplitude");
  cmd->add_option("--delta-min", f.delta_min, "lowest two-photon detuning");
  cmd->add_option("--delta-max", f.delta_max, "highest two-photon detuning");
  cmd->add_option("--points", f.points, "detuning grid size");
  cmd->add_option("--grid", f.grid, "grid spacing: log or linear");
  cmd->add_option("--out", f.out, "output CSV path");
}

void add_scheme(CLI::App* cmd, Flags& f) {
  cmd->add_option("--scheme", f.scheme,
                  "level scheme for discrete models: lambda or dualv");
}

void add_placement(CLI::App* cmd, Flags& f) {
  cmd->add_option("--placement", f.placement,
                  "regular:<atoms>:<phi/pi> or random:<atoms>:<halfwaves>:<seed>");
}

// Merges config-file values over the defaults, then every flag the user
// passed over both.
sld::RunConfig merge(const CLI::App* cmd, const Flags& f) {
  sld::RunConfig cfg;
  auto given = [&](const std::string& name) {
    const CLI::Option* o = cmd->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--config")) sld::apply_config_file(cfg, f.config);
  if (given("--scheme")) cfg.scheme = f.scheme;
  if (given("--model")) cfg.model = f.model;
  if (given("--gamma-1d")) cfg.params.gamma_1d = f.gamma_1d;
  if (given("--gamma-prime")) cfg.params.gamma_prime = f.gamma_prime;
  if (given("--delta-c")) cfg.params.delta_c = f.delta_c;
  if (given("--omega-0")) cfg.params.omega_0 = f.omega_0;
  if (given("--order")) cfg.order = f.order;
  if (given("--delta-d")) cfg.delta_d = f.delta_d;
  if (given("--delta-min")) cfg.delta_min = f.delta_min;
  if (given("--delta-max")) cfg.delta_max = f.delta_max;
  if (given("--points")) cfg.points = f.points;
  if (given("--grid")) cfg.grid = f.grid;
  if (given("--placement")) cfg.placement = f.placement;
  if (given("--atoms")) cfg.atoms = f.atoms;
  if (given("--realizations")) cfg.realizations = f.realizations;
  if (given("--observable")) cfg.observable = f.observable;
  if (given("--preset")) cfg.preset = f.preset;
  if (given("--out")) cfg.out = f.out;
  cfg.command = cmd->get_name();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "stationary-light band structures and scattering spectra "
      "(rates in units of the total linewidth, positions in 1/k0)"};
  app.set_version_flag("--version", sld::kVersion);
  app.require_subcommand(1);
  Flags f;

  CLI::App* disp = app.add_subcommand(
      "dispersion", "sweep Bloch wavevectors over a detuning grid");
  add_shared(disp, f);
  add_scheme(disp, f);
  add_placement(disp, f);
  disp->add_option("--model", f.model,
                   "continuum-eit | continuum-quadratic | continuum-linear | "
                   "continuum-infinite | continuum-truncated | discrete");
  disp->add_option("--order", f.order,
                   "harmonic cutoff for continuum-truncated");
  disp->add_option("--delta-d", f.delta_d,
                   "frequency split between the two drive components");

  CLI::App* scat = app.add_subcommand(
      "scatter", "transmission and reflection of a finite ensemble");
  add_shared(scat, f);
  add_scheme(scat, f);
  add_placement(scat, f);
  scat->add_option("--atoms", f.atoms,
                   "total atom count for regular placements");
  scat->add_option("--realizations", f.realizations,
                   "disorder draws for random placements");
  scat->add_option("--observable", f.observable,
                   "dual-V channel: total or convert");

  CLI::App* fig = app.add_subcommand(
      "figure", "write every dataset of a preset figure into a directory");
  fig->add_option("--preset", f.preset, "fig2 | fig3 | fig4 | fig5 | fig6");
  fig->add_option("--out", f.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    sld::run(merge(app.get_subcommands().front(), f));
    return 0;
  } catch (const sld::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const sld::DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const sld::NumericError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
