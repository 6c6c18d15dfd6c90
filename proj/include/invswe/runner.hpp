// Configuration-driven experiment runner: presets, the time loop with file
// output, the equivariance matrix and Richardson self-convergence studies.
#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "invswe/core.hpp"
#include "invswe/diagnostics.hpp"
#include "invswe/mesh1d.hpp"
#include "invswe/mesh2d.hpp"
#include "invswe/swe1d.hpp"
#include "invswe/swe2d_lagrangian.hpp"

namespace invswe {

enum class Scheme {
  LagrangianExplicit,
  LagrangianTrapezoidal,
  ConservativeExplicit,
  ConservativeTrapezoidal,
  ComputationalNonconservativeExplicit,
  ComputationalNonconservativeTrapezoidal,
  ComputationalConservativeExplicit,
  ComputationalConservativeTrapezoidal,
  FvExplicit,
  FvTrapezoidal,
  EulerianTrapezoidal,
};

struct SchemeInfo {
  Scheme id;
  const char* name;
  bool two_d;
  bool trapezoidal;
  bool adaptive;  // mesh from equidistribution / the grid generator
};

const std::vector<SchemeInfo>& scheme_catalog();
const SchemeInfo& scheme_info(Scheme s);
Scheme parse_scheme(const std::string& name);

/// How the computational-coordinate schemes obtain the next grid.
enum class MeshMotion {
  Adaptive,     // equidistribution (1D) / elliptic generator (2D)
  Static,       // the initial uniform grid throughout
  Oscillating,  // prescribed smooth motion, see prescribed_grid_1d/2d
};
MeshMotion parse_mesh_motion(const std::string& name);
const char* to_string(MeshMotion m);

struct SimulationConfig {
  Scheme scheme = Scheme::ConservativeTrapezoidal;
  std::size_t nx = 51;
  std::size_t ny = 51;
  double lx = 0.0;  // 0: 2*pi
  double ly = 0.0;
  double tau = 0.001;
  double t_end = 3.0;
  double amplitude = 0.4;
  double phase = 0.0;  // set to pi/6 by default_config()
  double depth = 10.0;
  MonitorSpec monitor{MonitorKind::Constant, 0.0, 0.0};
  WeightSpec weight{WeightKind::Constant, 0.0};
  CornerInterp interp = CornerInterp::Sibson;
  int couple_iterations = 0;
  MeshMotion mesh_motion = MeshMotion::Adaptive;
  double motion_amplitude = 0.3;  // oscillating: peak displacement / (L / 2 pi)
  double motion_frequency = 1.0;  // oscillating: cycles per unit time
  double picard_tol = 1e-12;
  int picard_max_iter = 200;
  double mesh_tol = -1.0;  // <0: 1e-12 (1D) / 1e-10 (2D)
  long mesh_max_iter = -1;
  long snapshot_stride = 0;  // 0: first and last level only
  long diagnostics_stride = 1;
  long trajectory_stride = 10;
  double converge_tau = 0.01;
  double converge_t_end = 0.5;
};

SimulationConfig default_config();
/// fig2, fig3, fig4, fig5 and fig5_smoke (31x31 on [0, 0.5]).
SimulationConfig preset_config(const std::string& name);

/// Sets one key; throws InvalidConfig for unknown keys or bad values.
void apply_setting(SimulationConfig& cfg, const std::string& key,
                   const std::string& value);
/// `key = value` lines, `#` comments. A `preset` line replaces everything
/// set before it.
SimulationConfig parse_config(std::istream& in);
SimulationConfig load_config(const std::string& path);
void validate_config(const SimulationConfig& cfg);
/// Key reference with defaults, for --help.
std::string config_reference();

/// Uniform grid with the paper's initial data.
Grid1D initial_grid_1d(const SimulationConfig& cfg);
State1D initial_state_1d(const SimulationConfig& cfg, const Grid1D& grid);
Grid2D initial_grid_2d(const SimulationConfig& cfg);
State2D initial_state_2d(const SimulationConfig& cfg, const Grid2D& grid);

/// Oscillating mesh at time t: x = X + a (L/2pi) sin(2pi X/L) sin(2pi f t)
/// on the uniform lattice X.
Grid1D prescribed_grid_1d(const SimulationConfig& cfg, double t);
/// x = X + a (Lx/2pi) sin(2pi Y/Ly) s, y = Y + a (Ly/2pi) sin(2pi X/Lx) s with
/// s = sin(2pi f t); the Jacobian stays above 1 - a^2.
Grid2D prescribed_grid_2d(const SimulationConfig& cfg, double t);

struct StepOutcome1D {
  Step1DResult step;
  double mesh_residual = 0.0;  // equidistribution residual of the new grid
  long mesh_sweeps = 0;
};
struct StepOutcome2D {
  Step2DResult step;
  long mesh_sweeps = 0;
};
/// (grid, state, tau, t) advances from time t to t + tau.
using Stepper1D =
    std::function<StepOutcome1D(const Grid1D&, const State1D&, double, double)>;
using Stepper2D =
    std::function<StepOutcome2D(const Grid2D&, const State2D&, double, double)>;

Stepper1D make_stepper_1d(const SimulationConfig& cfg);
Stepper2D make_stepper_2d(const SimulationConfig& cfg);

struct RunOutput {
  std::string dir;     // empty: no files
  int precision = 17;  // significant digits in the CSV files
  std::function<void(long step, double t)> progress;
};

struct RunResult {
  long steps = 0;
  double t_final = 0.0;
  DiagnosticsSeries diagnostics;
  long energy_increases = 0;   // steps with H(t_{n+1}) > H(t_n)
  double max_mesh_residual = 0.0;
  double min_spacing_initial = 0.0;  // 1D only
  double min_spacing_final = 0.0;
  double seconds = 0.0;
};

/// Runs the configured experiment. Solver failures are rethrown with the
/// simulation time prepended to the message.
RunResult run_simulation(const SimulationConfig& cfg, const RunOutput& out = {});

struct InvarianceRow {
  std::string scheme;
  std::string generator;
  int steps = 0;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Two-path discrepancies for every scheme of the configured dimension and
/// every generator of its symmetry group, on the configured initial data.
/// Meshes are always adaptive here.
std::vector<InvarianceRow> invariance_suite(const SimulationConfig& cfg,
                                            const std::vector<int>& step_counts = {1, 10});
/// Tolerance used for a scheme: 10x the tightest solver tolerance involved.
double invariance_tolerance(const SimulationConfig& cfg, Scheme s);

struct ConvergenceRow {
  std::string scheme;
  std::string kind;                  // "time" or "space"
  std::vector<double> resolutions;   // tau or N per level
  std::vector<double> differences;   // max-norm gap between consecutive levels
  std::vector<double> orders;        // log2 of consecutive gap ratios
  bool monotone = true;              // gaps strictly decreasing
};

/// Temporal self-convergence of cfg.scheme on [0, converge_t_end] with
/// tau = converge_tau / 2^k, k < levels.
ConvergenceRow temporal_convergence(const SimulationConfig& cfg, int levels);
/// Spatial self-convergence of the 1D computational scheme of cfg (static
/// uniform mesh) with N = nx * 2^k and a fixed step.
ConvergenceRow spatial_convergence(const SimulationConfig& cfg, int levels);

/// Output precision from INVSWE_PRECISION (digits), default 17.
int output_precision();

void write_snapshot_header_1d(std::ostream& os);
void write_snapshot_1d(std::ostream& os, double t, const Grid1D& grid, const State1D& state);
void write_snapshot_header_2d(std::ostream& os);
void write_snapshot_2d(std::ostream& os, double t, const Grid2D& grid, const State2D& state);

}  // namespace invswe
