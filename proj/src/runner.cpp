#include "invswe/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <sstream>

#include "invswe/swe2d_eulerian.hpp"
#include "invswe/symmetry.hpp"

namespace invswe {
namespace {

SolverError config_error(const std::string& what) {
  return SolverError(ErrorKind::InvalidConfig, what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw config_error(key + ": not a number: '" + v + "'");
  return x;
}

long parse_long(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw config_error(key + ": not an integer: '" + v + "'");
  return x;
}

double period(double l) { return l > 0.0 ? l : 2.0 * std::numbers::pi; }

long step_count(double t_end, double tau) {
  const double n = t_end / tau;
  const long steps = std::lround(n);
  if (std::abs(n - static_cast<double>(steps)) > 1e-9 * std::max(1.0, n)) {
    throw config_error("t_end must be a whole number of steps of tau");
  }
  return steps;
}

bool is_computational(Scheme s) {
  switch (s) {
    case Scheme::ComputationalNonconservativeExplicit:
    case Scheme::ComputationalNonconservativeTrapezoidal:
    case Scheme::ComputationalConservativeExplicit:
    case Scheme::ComputationalConservativeTrapezoidal:
      return true;
    default:
      return false;
  }
}

Form1D form_of(Scheme s) {
  return s == Scheme::ComputationalNonconservativeExplicit ||
                 s == Scheme::ComputationalNonconservativeTrapezoidal
             ? Form1D::Nonconservative
             : Form1D::Conservative;
}

TimeMode mode_of(Scheme s) {
  return scheme_info(s).trapezoidal ? TimeMode::Trapezoidal : TimeMode::Explicit;
}

PicardOptions picard_of(const SimulationConfig& cfg) {
  return {cfg.picard_tol, cfg.picard_max_iter};
}

double mesh_tol_1d(const SimulationConfig& cfg) {
  return cfg.mesh_tol > 0.0 ? cfg.mesh_tol : 1e-12;
}

double mesh_tol_2d(const SimulationConfig& cfg) {
  return cfg.mesh_tol > 0.0 ? cfg.mesh_tol : 1e-10;
}

double min_spacing(const Grid1D& g) {
  double m = INFINITY;
  for (std::size_t i = 0; i < g.size(); ++i) {
    m = std::min(m, g.ghost(static_cast<std::ptrdiff_t>(i) + 1) - g[i]);
  }
  return m;
}

SolverError at_time(const SolverError& e, long step, double t) {
  // what() already starts with the kind, which the new error adds again.
  std::string msg = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
  std::ostringstream os;
  os << "t=" << t << " (step " << step << "): " << msg;
  return SolverError(e.kind(), os.str(), e.location(), e.residual());
}

bool due(long n, long steps, long stride) {
  return n == 0 || n == steps || (stride > 0 && n % stride == 0);
}

// Max-norm gap between two solutions on the same lattice.
double solution_gap(const Grid1D& ga, const State1D& sa, const Grid1D& gb,
                    const State1D& sb, std::size_t stride_b) {
  double d = 0.0;
  for (std::size_t i = 0; i < ga.size(); ++i) {
    const std::size_t ib = i * stride_b;
    d = std::max({d, std::abs(ga[i] - gb[ib]), std::abs(sa.u[i] - sb.u[ib]),
                  std::abs(sa.h[i] - sb.h[ib])});
  }
  return d;
}

double solution_gap(const Grid2D& ga, const State2D& sa, const Grid2D& gb,
                    const State2D& sb) {
  double d = 0.0;
  const auto gap = [&](const Field2D& a, const Field2D& b) {
    for (std::size_t n = 0; n < a.size(); ++n) {
      d = std::max(d, std::abs(a.flat()[n] - b.flat()[n]));
    }
  };
  gap(ga.x(), gb.x());
  gap(ga.y(), gb.y());
  gap(sa.u, sb.u);
  gap(sa.v, sb.v);
  gap(sa.h, sb.h);
  return d;
}

void fill_orders(ConvergenceRow& row) {
  for (std::size_t k = 0; k + 1 < row.differences.size(); ++k) {
    const double a = row.differences[k], b = row.differences[k + 1];
    row.orders.push_back(std::log2(a / b));
    if (!(b < a)) row.monotone = false;
  }
}

std::ofstream open_csv(const std::string& dir, const char* name, int precision) {
  std::ofstream os(std::filesystem::path(dir) / name);
  if (!os) throw config_error(std::string("cannot write ") + dir + "/" + name);
  os << std::setprecision(precision);
  return os;
}

}  // namespace

// ---------------------------------------------------------------------------
// Catalog and configuration
// ---------------------------------------------------------------------------

const std::vector<SchemeInfo>& scheme_catalog() {
  static const std::vector<SchemeInfo> catalog = {
      {Scheme::LagrangianExplicit, "lagrangian_explicit", false, false, false},
      {Scheme::LagrangianTrapezoidal, "lagrangian_trapezoidal", false, true, false},
      {Scheme::ConservativeExplicit, "conservative_explicit", false, false, false},
      {Scheme::ConservativeTrapezoidal, "conservative_trapezoidal", false, true, false},
      {Scheme::ComputationalNonconservativeExplicit,
       "computational_nonconservative_explicit", false, false, true},
      {Scheme::ComputationalNonconservativeTrapezoidal,
       "computational_nonconservative_trapezoidal", false, true, true},
      {Scheme::ComputationalConservativeExplicit,
       "computational_conservative_explicit", false, false, true},
      {Scheme::ComputationalConservativeTrapezoidal,
       "computational_conservative_trapezoidal", false, true, true},
      {Scheme::FvExplicit, "fv_explicit", true, false, false},
      {Scheme::FvTrapezoidal, "fv_trapezoidal", true, true, false},
      {Scheme::EulerianTrapezoidal, "eulerian_trapezoidal", true, true, true},
  };
  return catalog;
}

const SchemeInfo& scheme_info(Scheme s) {
  for (const auto& info : scheme_catalog()) {
    if (info.id == s) return info;
  }
  throw config_error("unknown scheme id");
}

MeshMotion parse_mesh_motion(const std::string& name) {
  if (name == "adaptive") return MeshMotion::Adaptive;
  if (name == "static") return MeshMotion::Static;
  if (name == "oscillating") return MeshMotion::Oscillating;
  throw config_error("unknown mesh_motion '" + name + "'");
}

const char* to_string(MeshMotion m) {
  switch (m) {
    case MeshMotion::Adaptive: return "adaptive";
    case MeshMotion::Static: return "static";
    case MeshMotion::Oscillating: return "oscillating";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (const auto& info : scheme_catalog()) {
    if (name == info.name) return info.id;
  }
  throw config_error("unknown scheme '" + name + "'");
}

SimulationConfig default_config() {
  SimulationConfig cfg;
  cfg.phase = std::numbers::pi / 6.0;
  return cfg;
}

SimulationConfig preset_config(const std::string& name) {
  SimulationConfig cfg = default_config();
  if (name == "fig2") {
    cfg.scheme = Scheme::ConservativeTrapezoidal;
  } else if (name == "fig3") {
    cfg.scheme = Scheme::ComputationalConservativeTrapezoidal;
    cfg.monitor = {MonitorKind::ArcLengthU, 0.8, 0.0};
  } else if (name == "fig4") {
    cfg.scheme = Scheme::FvTrapezoidal;
    cfg.nx = cfg.ny = 71;
    cfg.t_end = 2.0;
  } else if (name == "fig5" || name == "fig5_smoke") {
    cfg.scheme = Scheme::EulerianTrapezoidal;
    cfg.weight = {WeightKind::LaplacianH, 0.4};
    cfg.nx = cfg.ny = 71;
    cfg.t_end = 2.0;
    if (name == "fig5_smoke") {
      cfg.nx = cfg.ny = 31;
      cfg.t_end = 0.5;
    }
  } else {
    throw config_error("unknown preset '" + name + "'");
  }
  return cfg;
}

void apply_setting(SimulationConfig& cfg, const std::string& key,
                   const std::string& raw) {
  const std::string v = trim(raw);
  const auto size = [&] {
    const long n = parse_long(key, v);
    if (n < 3) throw config_error(key + " must be at least 3");
    return static_cast<std::size_t>(n);
  };
  if (key == "preset") cfg = preset_config(v);
  else if (key == "scheme") cfg.scheme = parse_scheme(v);
  else if (key == "nx") cfg.nx = size();
  else if (key == "ny") cfg.ny = size();
  else if (key == "lx") cfg.lx = parse_double(key, v);
  else if (key == "ly") cfg.ly = parse_double(key, v);
  else if (key == "tau") cfg.tau = parse_double(key, v);
  else if (key == "t_end") cfg.t_end = parse_double(key, v);
  else if (key == "A") cfg.amplitude = parse_double(key, v);
  else if (key == "phi0") cfg.phase = parse_double(key, v);
  else if (key == "h0") cfg.depth = parse_double(key, v);
  else if (key == "monitor") cfg.monitor.kind = parse_monitor_kind(v);
  else if (key == "monitor_alpha") cfg.monitor.alpha = parse_double(key, v);
  else if (key == "monitor_beta") cfg.monitor.beta = parse_double(key, v);
  else if (key == "weight") cfg.weight.kind = parse_weight_kind(v);
  else if (key == "weight_alpha") cfg.weight.alpha = parse_double(key, v);
  else if (key == "weight_smoothing") cfg.weight.smoothing = static_cast<int>(parse_long(key, v));
  else if (key == "interp") cfg.interp = parse_corner_interp(v);
  else if (key == "couple_iterations") cfg.couple_iterations = static_cast<int>(parse_long(key, v));
  else if (key == "mesh_motion") cfg.mesh_motion = parse_mesh_motion(v);
  else if (key == "motion_amplitude") cfg.motion_amplitude = parse_double(key, v);
  else if (key == "motion_frequency") cfg.motion_frequency = parse_double(key, v);
  else if (key == "picard_tol") cfg.picard_tol = parse_double(key, v);
  else if (key == "picard_max_iter") cfg.picard_max_iter = static_cast<int>(parse_long(key, v));
  else if (key == "mesh_tol") cfg.mesh_tol = parse_double(key, v);
  else if (key == "mesh_max_iter") cfg.mesh_max_iter = parse_long(key, v);
  else if (key == "snapshot_stride") cfg.snapshot_stride = parse_long(key, v);
  else if (key == "diagnostics_stride") cfg.diagnostics_stride = parse_long(key, v);
  else if (key == "trajectory_stride") cfg.trajectory_stride = parse_long(key, v);
  else if (key == "converge_tau") cfg.converge_tau = parse_double(key, v);
  else if (key == "converge_t_end") cfg.converge_t_end = parse_double(key, v);
  else throw config_error("unknown key '" + key + "'");
}

SimulationConfig parse_config(std::istream& in) {
  SimulationConfig cfg = default_config();
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("line " + std::to_string(number) + ": expected key = value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  validate_config(cfg);
  return cfg;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config '" + path + "'");
  return parse_config(in);
}

void validate_config(const SimulationConfig& cfg) {
  const auto positive = [](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw config_error(std::string(key) + " must be positive");
  };
  positive("tau", cfg.tau);
  positive("t_end", cfg.t_end);
  positive("h0", cfg.depth);
  positive("picard_tol", cfg.picard_tol);
  positive("converge_tau", cfg.converge_tau);
  positive("converge_t_end", cfg.converge_t_end);
  if (cfg.lx < 0.0 || cfg.ly < 0.0) throw config_error("lx, ly must be positive (0 selects 2 pi)");
  if (cfg.nx < 3 || cfg.ny < 3) throw config_error("nx, ny must be at least 3");
  if (cfg.picard_max_iter < 1) throw config_error("picard_max_iter must be at least 1");
  if (cfg.couple_iterations < 0) throw config_error("couple_iterations must be nonnegative");
  if (cfg.monitor.alpha < 0.0 || cfg.monitor.beta < 0.0) {
    throw config_error("monitor constants must be nonnegative");
  }
  if (cfg.weight.alpha < 0.0) throw config_error("weight_alpha must be nonnegative");
  if (cfg.weight.smoothing < 0) throw config_error("weight_smoothing must be nonnegative");
  if (cfg.mesh_motion != MeshMotion::Adaptive && !scheme_info(cfg.scheme).adaptive) {
    throw config_error("mesh_motion applies to the computational-coordinate schemes only");
  }
  if (!(std::abs(cfg.motion_amplitude) < 1.0)) {
    throw config_error("motion_amplitude must lie in (-1, 1) to keep the mesh untangled");
  }
  if (cfg.snapshot_stride < 0 || cfg.diagnostics_stride < 0 || cfg.trajectory_stride < 0) {
    throw config_error("strides must be nonnegative");
  }
  if (std::abs(cfg.amplitude) >= cfg.depth) {
    throw config_error("|A| must be below h0 to keep the initial depth positive");
  }
  step_count(cfg.t_end, cfg.tau);
}

std::string config_reference() {
  const SimulationConfig d = default_config();
  std::ostringstream os;
  os << "Config file: one `key = value` per line, `#` starts a comment.\n"
        "A `preset = NAME` line resets every key to the preset's values.\n\n";
  const auto row = [&](const char* key, const std::string& def, const char* text) {
    os << "  " << std::left << std::setw(20) << key << std::setw(26) << def << text << '\n';
  };
  os << "  " << std::left << std::setw(20) << "key" << std::setw(26) << "default"
     << "meaning\n";
  row("preset", "-", "fig2 | fig3 | fig4 | fig5 | fig5_smoke");
  std::string names;
  for (const auto& s : scheme_catalog()) names += std::string(names.empty() ? "" : " ") + s.name;
  row("scheme", scheme_info(d.scheme).name, "scheme id, see below");
  row("nx, ny", "51, 51", "nodes per direction (ny only in 2D)");
  row("lx, ly", "0", "period lengths, 0 selects 2 pi");
  row("tau", "0.001", "time step");
  row("t_end", "3", "final time, a whole number of steps");
  row("A, phi0, h0", "0.4, pi/6, 10", "initial amplitude, phase and mean depth");
  row("monitor", "constant", "arc_length_u|h|uh, curvature_u|h|uh, constant");
  row("monitor_alpha", "0", "monitor constant alpha");
  row("monitor_beta", "0", "monitor constant beta (uh kinds)");
  row("weight", "constant", "gradient (w1), laplacian_h (w2), constant");
  row("weight_alpha", "0", "weight constant");
  row("weight_smoothing", "0", "[1 2 1] filter passes applied to the weight");
  row("interp", "sibson", "corner interpolation: sibson | mean");
  row("couple_iterations", "0", "extra mesh/physics coupling passes per step");
  row("mesh_motion", "adaptive", "adaptive | static | oscillating (prescribed)");
  row("motion_amplitude", "0.3", "oscillating mesh amplitude, |a| < 1");
  row("motion_frequency", "1", "oscillating mesh cycles per unit time");
  row("picard_tol", "1e-12", "fixed-point tolerance (max norm)");
  row("picard_max_iter", "200", "fixed-point iteration cap");
  row("mesh_tol", "1e-12 / 1e-10", "mesh residual tolerance (1D / 2D)");
  row("mesh_max_iter", "10 N^2 / 50 NxNy", "mesh sweep cap (1D / 2D)");
  row("snapshot_stride", "0", "steps between snapshots, 0: first and last");
  row("diagnostics_stride", "1", "steps between diagnostics records");
  row("trajectory_stride", "10", "steps between mesh trajectory records");
  row("converge_tau", "0.01", "coarsest step of the convergence study");
  row("converge_t_end", "0.5", "interval of the convergence study");
  os << "\nSchemes: " << names << '\n';
  os << "Output precision: INVSWE_PRECISION (digits, default 17).\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Initial data and steppers
// ---------------------------------------------------------------------------

Grid1D initial_grid_1d(const SimulationConfig& cfg) {
  return Grid1D::uniform(cfg.nx, period(cfg.lx));
}

State1D initial_state_1d(const SimulationConfig& cfg, const Grid1D& grid) {
  State1D s;
  s.u.resize(grid.size());
  s.h.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    s.u[i] = cfg.amplitude * std::sin(grid[i]);
    s.h[i] = cfg.depth + cfg.amplitude * std::sin(grid[i] + cfg.phase);
  }
  return s;
}

Grid2D initial_grid_2d(const SimulationConfig& cfg) {
  return Grid2D::uniform(cfg.nx, cfg.ny, period(cfg.lx), period(cfg.ly));
}

State2D initial_state_2d(const SimulationConfig& cfg, const Grid2D& grid) {
  const std::size_t nx = grid.nx(), ny = grid.ny();
  State2D s{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
  const double a = cfg.amplitude;
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const double x = grid.x()(j, k), y = grid.y()(j, k);
      s.u(j, k) = a * std::sin(x + cfg.phase) * std::sin(y);
      s.v(j, k) = a * std::sin(x) * std::sin(y);
      s.h(j, k) = cfg.depth + a * std::cos(x + cfg.phase) * std::cos(y);
    }
  }
  return s;
}

Grid1D prescribed_grid_1d(const SimulationConfig& cfg, double t) {
  const double length = period(cfg.lx);
  const double k = 2.0 * std::numbers::pi / length;
  const double s = cfg.motion_amplitude * std::sin(2.0 * std::numbers::pi * cfg.motion_frequency * t);
  const Grid1D base = initial_grid_1d(cfg);
  std::vector<double> x(base.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = base[i] + s * std::sin(k * base[i]) / k;
  return Grid1D(std::move(x), length);
}

Grid2D prescribed_grid_2d(const SimulationConfig& cfg, double t) {
  const Grid2D base = initial_grid_2d(cfg);
  const double kx = 2.0 * std::numbers::pi / base.lx(), ky = 2.0 * std::numbers::pi / base.ly();
  const double s = cfg.motion_amplitude * std::sin(2.0 * std::numbers::pi * cfg.motion_frequency * t);
  Field2D x = base.x(), y = base.y();
  for (std::size_t q = 0; q < x.size(); ++q) {
    const double bx = base.x().flat()[q], by = base.y().flat()[q];
    x.flat()[q] = bx + s * std::sin(ky * by) / kx;
    y.flat()[q] = by + s * std::sin(kx * bx) / ky;
  }
  return Grid2D(std::move(x), std::move(y), base.lx(), base.ly(), base.dxi(), base.deta());
}

Stepper1D make_stepper_1d(const SimulationConfig& cfg) {
  const Scheme s = cfg.scheme;
  if (scheme_info(s).two_d) throw config_error("scheme is two-dimensional");
  const PicardOptions picard = picard_of(cfg);
  switch (s) {
    case Scheme::LagrangianExplicit:
      return [](const Grid1D& g, const State1D& st, double tau, double) {
        return StepOutcome1D{step_lagrangian_explicit(g, st, tau)};
      };
    case Scheme::LagrangianTrapezoidal:
      return [picard](const Grid1D& g, const State1D& st, double tau, double) {
        return StepOutcome1D{step_lagrangian_trapezoidal(g, st, tau, picard)};
      };
    case Scheme::ConservativeExplicit:
      return [](const Grid1D& g, const State1D& st, double tau, double) {
        return StepOutcome1D{step_conservative_explicit(g, st, tau)};
      };
    case Scheme::ConservativeTrapezoidal:
      return [picard](const Grid1D& g, const State1D& st, double tau, double) {
        return StepOutcome1D{step_conservative_trapezoidal(g, st, tau, picard)};
      };
    default:
      break;
  }
  if (cfg.mesh_motion != MeshMotion::Adaptive) {
    const TimeMode mode = mode_of(s);
    const Form1D form = form_of(s);
    return [cfg, mode, form, picard](const Grid1D& g, const State1D& st, double tau, double t) {
      const Grid1D next =
          cfg.mesh_motion == MeshMotion::Static ? g : prescribed_grid_1d(cfg, t + tau);
      return StepOutcome1D{form == Form1D::Conservative
                               ? step_computational_conservative(g, next, st, tau, mode, picard)
                               : step_computational_nonconservative(g, next, st, tau, mode,
                                                                    picard)};
    };
  }
  AdaptiveOptions opt;
  opt.monitor = cfg.monitor;
  opt.form = form_of(s);
  opt.mode = mode_of(s);
  opt.couple_iterations = cfg.couple_iterations;
  opt.mesh = {mesh_tol_1d(cfg), cfg.mesh_max_iter};
  opt.picard = picard;
  return [opt](const Grid1D& g, const State1D& st, double tau, double) {
    AdaptiveStepResult r = step_adaptive(g, st, tau, opt);
    StepOutcome1D out{std::move(r.step)};
    out.mesh_sweeps = r.mesh_sweeps;
    if (opt.couple_iterations == 0) {
      // The new grid equidistributes the monitor of the current level.
      out.mesh_residual =
          equidistribution_residual(out.step.grid, monitor_values(g, st, opt.monitor));
    }
    return out;
  };
}

Stepper2D make_stepper_2d(const SimulationConfig& cfg) {
  const Scheme s = cfg.scheme;
  if (!scheme_info(s).two_d) throw config_error("scheme is one-dimensional");
  const PicardOptions picard = picard_of(cfg);
  const CornerInterp interp = cfg.interp;
  switch (s) {
    case Scheme::FvExplicit:
      return [interp](const Grid2D& g, const State2D& st, double tau, double) {
        return StepOutcome2D{step_fv_explicit(g, st, tau, interp)};
      };
    case Scheme::FvTrapezoidal:
      return [interp, picard](const Grid2D& g, const State2D& st, double tau, double) {
        return StepOutcome2D{step_fv_trapezoidal(g, st, tau, interp, picard)};
      };
    default:
      break;
  }
  if (cfg.mesh_motion != MeshMotion::Adaptive) {
    return [cfg, picard](const Grid2D& g, const State2D& st, double tau, double t) {
      const Grid2D next =
          cfg.mesh_motion == MeshMotion::Static ? g : prescribed_grid_2d(cfg, t + tau);
      return StepOutcome2D{step_eulerian_trapezoidal(g, next, st, tau, picard)};
    };
  }
  Adaptive2DOptions opt;
  opt.weight = cfg.weight;
  opt.couple_iterations = cfg.couple_iterations;
  opt.mesh.tol = mesh_tol_2d(cfg);
  opt.mesh.max_iter = cfg.mesh_max_iter;
  opt.picard = picard;
  return [opt](const Grid2D& g, const State2D& st, double tau, double) {
    Adaptive2DResult r = step_adaptive_2d(g, st, tau, opt);
    StepOutcome2D out{std::move(r.step)};
    out.mesh_sweeps = r.mesh_sweeps;
    return out;
  };
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

int output_precision() {
  if (const char* env = std::getenv("INVSWE_PRECISION")) {
    const int p = std::atoi(env);
    if (p >= 1 && p <= 17) return p;
  }
  return 17;
}

void write_snapshot_header_1d(std::ostream& os) { os << "t,i,x,u,h\n"; }

void write_snapshot_1d(std::ostream& os, double t, const Grid1D& grid,
                       const State1D& state) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << t << ',' << i << ',' << grid[i] << ',' << state.u[i] << ',' << state.h[i] << '\n';
  }
}

void write_snapshot_header_2d(std::ostream& os) { os << "t,j,k,x,y,u,v,h\n"; }

void write_snapshot_2d(std::ostream& os, double t, const Grid2D& grid,
                       const State2D& state) {
  for (std::size_t k = 0; k < grid.ny(); ++k) {
    for (std::size_t j = 0; j < grid.nx(); ++j) {
      os << t << ',' << j << ',' << k << ',' << grid.x()(j, k) << ',' << grid.y()(j, k)
         << ',' << state.u(j, k) << ',' << state.v(j, k) << ',' << state.h(j, k) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// Time loop
// ---------------------------------------------------------------------------

namespace {

void write_mesh(std::ostream& os, double t, const Grid1D& g) {
  for (std::size_t i = 0; i < g.size(); ++i) os << t << ',' << i << ',' << g[i] << '\n';
}

void write_mesh(std::ostream& os, double t, const Grid2D& g) {
  for (std::size_t k = 0; k < g.ny(); ++k) {
    for (std::size_t j = 0; j < g.nx(); ++j) {
      os << t << ',' << j << ',' << k << ',' << g.x()(j, k) << ',' << g.y()(j, k) << '\n';
    }
  }
}

void write_snapshot(std::ostream& os, double t, const Grid1D& g, const State1D& s) {
  write_snapshot_1d(os, t, g, s);
}
void write_snapshot(std::ostream& os, double t, const Grid2D& g, const State2D& s) {
  write_snapshot_2d(os, t, g, s);
}
DiagnosticsRecord conserved(const Grid1D& g, const State1D& s, double t) {
  return conserved_1d(g, s, t);
}
DiagnosticsRecord conserved(const Grid2D& g, const State2D& s, double t) {
  return conserved_2d(g, s, t);
}
double mesh_residual_of(const StepOutcome1D& o) { return o.mesh_residual; }
double mesh_residual_of(const StepOutcome2D&) { return 0.0; }

template <class Grid, class State, class Stepper>
RunResult run_loop(const SimulationConfig& cfg, const RunOutput& out, Grid grid,
                   State state, DiagnosticsSeries series, Stepper stepper) {
  constexpr bool one_d = std::is_same_v<Grid, Grid1D>;
  const auto start = std::chrono::steady_clock::now();
  const long steps = step_count(cfg.t_end, cfg.tau);
  const int precision = out.precision;

  std::ofstream snap, diag, mesh;
  const bool files = !out.dir.empty();
  if (files) {
    std::filesystem::create_directories(out.dir);
    snap = open_csv(out.dir, "snapshots.csv", precision);
    mesh = open_csv(out.dir, "mesh.csv", precision);
    if constexpr (one_d) {
      write_snapshot_header_1d(snap);
      mesh << "t,i,x\n";
    } else {
      write_snapshot_header_2d(snap);
      mesh << "t,i,j,x,y\n";
    }
  }

  RunResult result;
  result.steps = steps;
  if constexpr (one_d) result.min_spacing_initial = min_spacing(grid);

  DiagnosticsRecord last = conserved(grid, state, 0.0);
  series.add(last);
  if (files) {
    write_snapshot(snap, 0.0, grid, state);
    write_mesh(mesh, 0.0, grid);
  }
  for (long n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * cfg.tau;
    try {
      auto outcome = stepper(grid, state, cfg.tau, static_cast<double>(n - 1) * cfg.tau);
      result.max_mesh_residual = std::max(result.max_mesh_residual, mesh_residual_of(outcome));
      grid = std::move(outcome.step.grid);
      state = std::move(outcome.step.state);
    } catch (const SolverError& e) {
      if (files) {
        // Keep the record up to the failed step for inspection.
        auto d = open_csv(out.dir, "diagnostics.csv", precision);
        series.write_csv(d, precision);
      }
      throw at_time(e, n, t);
    }
    const DiagnosticsRecord rec = conserved(grid, state, t);
    if (rec.energy > last.energy) ++result.energy_increases;
    last = rec;
    if (due(n, steps, cfg.diagnostics_stride)) series.add(rec);
    if (files && due(n, steps, cfg.snapshot_stride)) write_snapshot(snap, t, grid, state);
    if (files && due(n, steps, cfg.trajectory_stride)) write_mesh(mesh, t, grid);
    if (out.progress) out.progress(n, t);
  }
  result.t_final = static_cast<double>(steps) * cfg.tau;
  if constexpr (one_d) result.min_spacing_final = min_spacing(grid);
  if (files) {
    auto d = open_csv(out.dir, "diagnostics.csv", precision);
    series.write_csv(d, precision);
  }
  result.diagnostics = std::move(series);
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

RunResult run_simulation(const SimulationConfig& cfg, const RunOutput& out) {
  validate_config(cfg);
  if (!scheme_info(cfg.scheme).two_d) {
    Grid1D grid = cfg.mesh_motion == MeshMotion::Oscillating ? prescribed_grid_1d(cfg, 0.0)
                                                             : initial_grid_1d(cfg);
    State1D state = initial_state_1d(cfg, grid);
    DiagnosticsSeries series(false, momentum_scale_1d(grid, state), 0.0);
    return run_loop(cfg, out, std::move(grid), std::move(state), std::move(series),
                    make_stepper_1d(cfg));
  }
  Grid2D grid = cfg.mesh_motion == MeshMotion::Oscillating ? prescribed_grid_2d(cfg, 0.0)
                                                           : initial_grid_2d(cfg);
  State2D state = initial_state_2d(cfg, grid);
  DiagnosticsSeries series(true, momentum_scale_2d(grid, state.h.flat(), state.u.flat()),
                           momentum_scale_2d(grid, state.h.flat(), state.v.flat()));
  return run_loop(cfg, out, std::move(grid), std::move(state), std::move(series),
                  make_stepper_2d(cfg));
}

// ---------------------------------------------------------------------------
// Equivariance matrix
// ---------------------------------------------------------------------------

double invariance_tolerance(const SimulationConfig& cfg, Scheme s) {
  const SchemeInfo& info = scheme_info(s);
  if (info.adaptive) {
    const double mesh = info.two_d ? mesh_tol_2d(cfg) : mesh_tol_1d(cfg);
    return 10.0 * std::max(mesh, info.trapezoidal ? cfg.picard_tol : 0.0);
  }
  // Explicit steps carry no solver tolerance; 1e-13 stands for rounding.
  return 10.0 * (info.trapezoidal ? cfg.picard_tol : 1e-13);
}

std::vector<InvarianceRow> invariance_suite(const SimulationConfig& cfg,
                                            const std::vector<int>& step_counts) {
  validate_config(cfg);
  std::vector<InvarianceRow> rows;
  const bool two_d = scheme_info(cfg.scheme).two_d;
  for (const auto& info : scheme_catalog()) {
    if (info.two_d != two_d) continue;
    SimulationConfig sc = cfg;
    sc.scheme = info.id;
    sc.mesh_motion = MeshMotion::Adaptive;
    const double tol = invariance_tolerance(sc, info.id);
    if (!two_d) {
      const Grid1D grid = initial_grid_1d(sc);
      const State1D state = initial_state_1d(sc, grid);
      const Stepper1D step = make_stepper_1d(sc);
      const std::vector<std::pair<const char*, GroupElement1D>> gens = {
          {"identity", {}},
          {"time_shift", {.dt = 0.37}},
          {"space_shift", {.dx = 0.9}},
          {"boost", {.boost = 0.3}},
          {"scale_time", {.scale_time = 0.2}},
          {"scale_field", {.scale_field = 0.15}},
      };
      for (const auto& [name, g] : gens) {
        SimulationConfig tc = sc;
        tc.monitor = sc.monitor.transformed(g);
        const Stepper1D transformed = make_stepper_1d(tc);
        const auto direct = [&](const Grid1D& gr, const State1D& st, double tau) {
          return step(gr, st, tau, 0.0).step;
        };
        const auto mapped = [&](const Grid1D& gr, const State1D& st, double tau) {
          return transformed(gr, st, tau, 0.0).step;
        };
        for (int n : step_counts) {
          const double d = check_equivariance(direct, mapped, g, 0.0, grid, state, sc.tau, n);
          rows.push_back({info.name, name, n, d, tol, d <= tol});
        }
      }
    } else {
      const Grid2D grid = initial_grid_2d(sc);
      const State2D state = initial_state_2d(sc, grid);
      const Stepper2D step = make_stepper_2d(sc);
      const auto direct = [&](const Grid2D& gr, const State2D& st, double tau) {
        return step(gr, st, tau, 0.0).step;
      };
      const std::vector<std::pair<const char*, GroupElement2D>> gens = {
          {"identity", {}},
          {"time_shift", {.dt = 0.37}},
          {"x_shift", {.dx = 1.7}},
          {"y_shift", {.dy = -0.8}},
          {"x_boost", {.boost_x = 0.3}},
          {"y_boost", {.boost_y = -0.25}},
      };
      for (const auto& [name, g] : gens) {
        for (int n : step_counts) {
          const double d = check_equivariance(direct, g, 0.0, grid, state, sc.tau, n);
          rows.push_back({info.name, name, n, d, tol, d <= tol});
        }
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Self-convergence
// ---------------------------------------------------------------------------

ConvergenceRow temporal_convergence(const SimulationConfig& cfg, int levels) {
  validate_config(cfg);
  if (levels < 3) throw config_error("a convergence study needs at least 3 levels");
  ConvergenceRow row;
  row.scheme = scheme_info(cfg.scheme).name;
  row.kind = "time";
  const bool two_d = scheme_info(cfg.scheme).two_d;
  std::vector<Grid1D> g1;
  std::vector<State1D> s1;
  std::vector<Grid2D> g2;
  std::vector<State2D> s2;
  for (int k = 0; k < levels; ++k) {
    const double tau = cfg.converge_tau / std::ldexp(1.0, k);
    const long steps = step_count(cfg.converge_t_end, tau);
    row.resolutions.push_back(tau);
    if (!two_d) {
      const Stepper1D step = make_stepper_1d(cfg);
      Grid1D g = cfg.mesh_motion == MeshMotion::Oscillating ? prescribed_grid_1d(cfg, 0.0)
                                                            : initial_grid_1d(cfg);
      State1D s = initial_state_1d(cfg, g);
      for (long n = 0; n < steps; ++n) {
        auto r = step(g, s, tau, static_cast<double>(n) * tau);
        g = std::move(r.step.grid);
        s = std::move(r.step.state);
      }
      g1.push_back(std::move(g));
      s1.push_back(std::move(s));
    } else {
      const Stepper2D step = make_stepper_2d(cfg);
      Grid2D g = cfg.mesh_motion == MeshMotion::Oscillating ? prescribed_grid_2d(cfg, 0.0)
                                                            : initial_grid_2d(cfg);
      State2D s = initial_state_2d(cfg, g);
      for (long n = 0; n < steps; ++n) {
        auto r = step(g, s, tau, static_cast<double>(n) * tau);
        g = std::move(r.step.grid);
        s = std::move(r.step.state);
      }
      g2.push_back(std::move(g));
      s2.push_back(std::move(s));
    }
  }
  for (int k = 0; k + 1 < levels; ++k) {
    row.differences.push_back(two_d ? solution_gap(g2[k], s2[k], g2[k + 1], s2[k + 1])
                                    : solution_gap(g1[k], s1[k], g1[k + 1], s1[k + 1], 1));
  }
  fill_orders(row);
  return row;
}

ConvergenceRow spatial_convergence(const SimulationConfig& cfg, int levels) {
  validate_config(cfg);
  if (levels < 3) throw config_error("a convergence study needs at least 3 levels");
  if (!is_computational(cfg.scheme)) {
    throw config_error("spatial convergence needs a computational-coordinate scheme");
  }
  ConvergenceRow row;
  row.scheme = scheme_info(cfg.scheme).name;
  row.kind = "space";
  // One step size for every level, the finest of the temporal study.
  const double tau = cfg.converge_tau / std::ldexp(1.0, levels - 1);
  const long steps = step_count(cfg.converge_t_end, tau);
  const TimeMode mode = mode_of(cfg.scheme);
  const Form1D form = form_of(cfg.scheme);
  const PicardOptions picard = picard_of(cfg);
  std::vector<Grid1D> grids;
  std::vector<State1D> states;
  for (int k = 0; k < levels; ++k) {
    SimulationConfig c = cfg;
    c.nx = cfg.nx << k;
    row.resolutions.push_back(static_cast<double>(c.nx));
    const Grid1D g = initial_grid_1d(c);
    State1D s = initial_state_1d(c, g);
    for (long n = 0; n < steps; ++n) {
      s = form == Form1D::Conservative
              ? step_computational_conservative(g, g, s, tau, mode, picard).state
              : step_computational_nonconservative(g, g, s, tau, mode, picard).state;
    }
    grids.push_back(g);
    states.push_back(std::move(s));
  }
  for (int k = 0; k + 1 < levels; ++k) {
    row.differences.push_back(
        solution_gap(grids[k], states[k], grids[k + 1], states[k + 1], 2));
  }
  fill_orders(row);
  return row;
}

}  // namespace invswe
