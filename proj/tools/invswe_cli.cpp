// Command-line front end: run, invariance and converge subcommands.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "invswe/runner.hpp"

namespace {

using namespace invswe;

SimulationConfig resolve(const std::string& preset, const std::string& path,
                         const std::vector<std::string>& overrides) {
  SimulationConfig cfg = default_config();
  if (!preset.empty()) cfg = preset_config(preset);
  if (!path.empty()) cfg = load_config(path);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw SolverError(ErrorKind::InvalidConfig, "--set expects key=value, got '" + kv + "'");
    }
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  validate_config(cfg);
  return cfg;
}

void print_run(const SimulationConfig& cfg, const RunResult& r) {
  const auto& recs = r.diagnostics.records();
  const RelativeChange c = r.diagnostics.relative(recs.size() - 1);
  std::printf("scheme %s, %ld steps to t=%g in %.1f s\n", scheme_info(cfg.scheme).name,
              r.steps, r.t_final, r.seconds);
  if (r.diagnostics.two_d()) {
    std::printf("relative change: mass %.3e  px %.3e  py %.3e  energy %.3e\n", c.mass, c.px,
                c.py, c.energy);
  } else {
    std::printf("relative change: mass %.3e  momentum %.3e  energy %.3e\n", c.mass, c.px,
                c.energy);
    std::printf("min spacing: initial %.4e  final %.4e\n", r.min_spacing_initial,
                r.min_spacing_final);
  }
  std::printf("energy increases: %ld of %ld steps\n", r.energy_increases, r.steps);
  if (scheme_info(cfg.scheme).adaptive && !r.diagnostics.two_d()) {
    std::printf("max equidistribution residual: %.3e\n", r.max_mesh_residual);
  }
}

void print_convergence(const ConvergenceRow& row) {
  std::printf("%s (%s)\n", row.scheme.c_str(), row.kind.c_str());
  for (std::size_t k = 0; k < row.resolutions.size(); ++k) {
    std::printf("  %-12g", row.resolutions[k]);
    if (k < row.differences.size()) std::printf("  gap %.4e", row.differences[k]);
    if (k < row.orders.size()) std::printf("  order %.3f", row.orders[k]);
    std::printf("\n");
  }
  if (!row.monotone) std::printf("  warning: gaps are not monotonically decreasing\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant shallow-water schemes on moving meshes"};
  app.require_subcommand(1);
  app.footer(config_reference());

  std::string preset, config_path, out_dir;
  std::vector<std::string> overrides;
  bool caption_scheme = false;
  int levels = 3;

  auto* run = app.add_subcommand("run", "run a preset or config file");
  auto* preset_opt = run->add_option("--preset", preset, "fig2 | fig3 | fig4 | fig5 | fig5_smoke");
  run->add_option("--config", config_path, "key = value config file")->excludes(preset_opt);
  run->add_option("--out", out_dir, "output directory for the CSV files");
  run->add_option("--set", overrides, "override a key, e.g. --set tau=0.002");
  run->add_flag("--caption-scheme", caption_scheme,
                "fig2 only: use the nonconservative Lagrangian trapezoidal scheme");
  bool quiet = false;
  run->add_flag("-q,--quiet", quiet, "no progress output");

  auto* inv = app.add_subcommand("invariance", "equivariance matrix over schemes and generators");
  auto* inv_preset = inv->add_option("--preset", preset, "preset providing the data");
  inv->add_option("--config", config_path, "config file")->excludes(inv_preset);
  inv->add_option("--set", overrides, "override a key");

  auto* conv = app.add_subcommand("converge", "Richardson self-convergence orders");
  auto* conv_preset = conv->add_option("--preset", preset, "preset providing the data");
  conv->add_option("--config", config_path, "config file")->excludes(conv_preset);
  conv->add_option("--levels", levels, "refinement levels (at least 3)")
      ->check(CLI::Range(3, 12));
  conv->add_option("--set", overrides, "override a key");

  CLI11_PARSE(app, argc, argv);

  try {
    SimulationConfig cfg = resolve(preset, config_path, overrides);
    if (*run) {
      if (caption_scheme) {
        if (preset != "fig2") {
          throw SolverError(ErrorKind::InvalidConfig, "--caption-scheme applies to --preset fig2");
        }
        cfg.scheme = Scheme::LagrangianTrapezoidal;
      }
      RunOutput out;
      out.dir = out_dir;
      out.precision = output_precision();
      const long report = std::max(1L, std::lround(cfg.t_end / cfg.tau) / 20);
      if (!quiet) {
        out.progress = [report](long n, double t) {
          if (n % report == 0) std::fprintf(stderr, "step %ld  t=%g\n", n, t);
        };
      }
      print_run(cfg, run_simulation(cfg, out));
    } else if (*inv) {
      bool all = true;
      std::printf("%-44s %-12s %5s %12s %10s\n", "scheme", "generator", "steps", "discrepancy",
                  "tolerance");
      for (const auto& row : invariance_suite(cfg)) {
        std::printf("%-44s %-12s %5d %12.3e %10.1e %s\n", row.scheme.c_str(),
                    row.generator.c_str(), row.steps, row.discrepancy, row.tolerance,
                    row.pass ? "pass" : "FAIL");
        all = all && row.pass;
      }
      return all ? 0 : 1;
    } else if (*conv) {
      print_convergence(temporal_convergence(cfg, levels));
      const Scheme s = cfg.scheme;
      if (!scheme_info(s).two_d && scheme_info(s).adaptive) {
        print_convergence(spatial_convergence(cfg, levels));
      }
    }
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.location()) std::fprintf(stderr, "  at index %td\n", *e.location());
    return e.kind() == ErrorKind::InvalidConfig ? 2 : 1;
  }
  return 0;
}
