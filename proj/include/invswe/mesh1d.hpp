// Invariant equidistribution mesh generation on a periodic 1D domain.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "invswe/core.hpp"
#include "invswe/picard.hpp"
#include "invswe/swe1d.hpp"
#include "invswe/symmetry.hpp"

namespace invswe {

enum class MonitorKind {
  ArcLengthU,
  ArcLengthH,
  ArcLengthUH,
  CurvatureU,
  CurvatureH,
  CurvatureUH,
  Constant,
};

MonitorKind parse_monitor_kind(const std::string& name);
std::string to_string(MonitorKind kind);

struct MonitorSpec {
  MonitorKind kind = MonitorKind::ArcLengthU;
  double alpha = 0.0;
  double beta = 0.0;

  /// Constants of the equivalent monitor on the problem mapped by g. Shifts
  /// and boosts leave them unchanged; the scalings rescale them.
  MonitorSpec transformed(const GroupElement1D& g) const;
};

/// rho_i = sqrt(1 + alpha q_i^2 [+ beta r_i^2]) with q, r the central first
/// differences (arc-length kinds) or second-difference quotients (curvature
/// kinds) of u and/or h.
std::vector<double> monitor_values(const Grid1D& grid, const State1D& state,
                                   const MonitorSpec& spec);

struct EquidistributionOptions {
  double tol = 1e-12;
  long max_iter = -1;  // -1: 10 N^2
};

struct EquidistributionResult {
  Grid1D grid;
  long sweeps = 0;
  double residual = 0.0;
};

/// Max over i of |(rho_{i+1}+rho_i)(x_{i+1}-x_i) - (rho_i+rho_{i-1})(x_i-x_{i-1})|
/// with the periodic wrap x_{i+N} = x_i + L.
double equidistribution_residual(const Grid1D& grid, std::span<const double> rho);

/// Gauss-Seidel solve of the discrete equidistribution relation starting from
/// `grid`, followed by a uniform shift so that mean(x_hat - x) equals
/// tau * mean_velocity_anchor.
EquidistributionResult solve_equidistribution(
    const Grid1D& grid, std::span<const double> rho,
    double mean_velocity_anchor, double tau,
    const EquidistributionOptions& opt = {});

std::vector<double> mesh_velocity(const Grid1D& grid, const Grid1D& hat_grid,
                                  double tau);

enum class Form1D { Conservative, Nonconservative };

struct AdaptiveOptions {
  MonitorSpec monitor;
  Form1D form = Form1D::Conservative;
  TimeMode mode = TimeMode::Trapezoidal;
  int couple_iterations = 0;
  EquidistributionOptions mesh;
  PicardOptions picard;
};

struct AdaptiveStepResult {
  Step1DResult step;
  std::vector<double> mesh_velocity;
  long mesh_sweeps = 0;
};

/// Monitor from the current level, mesh solve, then one computational step.
/// Each coupling iteration recomputes the monitor from the predicted new
/// level, re-solves the mesh from the current grid and repeats the step.
AdaptiveStepResult step_adaptive(const Grid1D& grid, const State1D& state,
                                 double tau, const AdaptiveOptions& opt);

}  // namespace invswe
