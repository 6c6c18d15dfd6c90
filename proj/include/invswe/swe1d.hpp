// One-dimensional invariant schemes: the Lagrangian difference-invariant
// schemes, their momentum-form (conservative) counterparts, and the
// computational-coordinate schemes driven by an external mesh velocity.
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "invswe/core.hpp"
#include "invswe/picard.hpp"

namespace invswe {

struct Step1DResult {
  Grid1D grid;
  State1D state;
  int iterations = 0;
  double residual = 0.0;
};

enum class TimeMode { Explicit, Trapezoidal };

/// Advisory Courant number tau * max(|u| + sqrt(h)) / min spacing.
double cfl_number(const Grid1D& grid, const State1D& state, double tau);

/// Receives advisory warnings (CFL above 1). Defaults to stderr.
void set_warning_handler(std::function<void(const std::string&)> handler);
void emit_warning(const std::string& message);

Step1DResult step_lagrangian_explicit(const Grid1D& grid, const State1D& state,
                                      double tau);
Step1DResult step_lagrangian_trapezoidal(const Grid1D& grid,
                                         const State1D& state, double tau,
                                         const PicardOptions& opt = {});
Step1DResult step_conservative_explicit(const Grid1D& grid,
                                        const State1D& state, double tau);
Step1DResult step_conservative_trapezoidal(const Grid1D& grid,
                                           const State1D& state, double tau,
                                           const PicardOptions& opt = {});

/// A(z) = [(u_{i+1} - v_{i+1}) z_{i+1} - (u_{i-1} - v_{i-1}) z_{i-1}]
///        / (x_{i+1} - x_{i-1})
/// with v the mesh velocity. Pass hatted u, z and grid for the hatted form.
double flux_A(std::span<const double> z, std::span<const double> u,
              std::span<const double> mesh_velocity, const Grid1D& grid,
              std::ptrdiff_t i);
/// D(z) = (z_{i+1} - z_{i-1}) / (x_{i+1} - x_{i-1})
double flux_D(std::span<const double> z, const Grid1D& grid, std::ptrdiff_t i);

/// Computational-coordinate form with x_hat = x + tau * mesh_velocity.
Step1DResult step_computational_nonconservative(
    const Grid1D& grid, const State1D& state, double tau,
    std::span<const double> mesh_velocity, TimeMode mode,
    const PicardOptions& opt = {});
Step1DResult step_computational_conservative(
    const Grid1D& grid, const State1D& state, double tau,
    std::span<const double> mesh_velocity, TimeMode mode,
    const PicardOptions& opt = {});

/// Same schemes with the next grid given directly (mesh velocity
/// (x_hat - x) / tau), as produced by the equidistribution solve.
Step1DResult step_computational_nonconservative(
    const Grid1D& grid, const Grid1D& hat_grid, const State1D& state,
    double tau, TimeMode mode, const PicardOptions& opt = {});
Step1DResult step_computational_conservative(
    const Grid1D& grid, const Grid1D& hat_grid, const State1D& state,
    double tau, TimeMode mode, const PicardOptions& opt = {});

/// Pointwise residuals of the momentum-form schemes on arbitrary two-level
/// data (not necessarily a solution). `mesh` is the Lagrangian mesh row
/// (x_hat - x)/tau - u_bar and is zero for the computational schemes, whose
/// mesh velocity is taken from the two grids.
struct Residual1D {
  std::vector<double> mesh;
  std::vector<double> mass;
  std::vector<double> momentum;
};

Residual1D conservative_residual(const Grid1D& grid, const Grid1D& hat_grid,
                                 const State1D& state, const State1D& hat_state,
                                 double tau, TimeMode mode);
Residual1D computational_conservative_residual(const Grid1D& grid,
                                               const Grid1D& hat_grid,
                                               const State1D& state,
                                               const State1D& hat_state,
                                               double tau, TimeMode mode);

}  // namespace invswe
