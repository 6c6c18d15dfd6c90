// Elliptic grid generator for the doubly periodic 2D mesh and the adaptive
// step that couples it to the Eulerian scheme.
#pragma once

#include <string>

#include "invswe/core.hpp"
#include "invswe/kernels/kernels.hpp"
#include "invswe/picard.hpp"

namespace invswe {

enum class WeightKind {
  Gradient,    // sqrt(1 + alpha (u_x^2 + u_y^2 + v_x^2 + v_y^2))
  LaplacianH,  // sqrt(1 + alpha (h_xx + h_yy)^2)
  Constant,
};

WeightKind parse_weight_kind(const std::string& name);
const char* to_string(WeightKind kind);

struct WeightSpec {
  WeightKind kind = WeightKind::Constant;
  double alpha = 0.0;
  /// Passes of the index-space [1 2 1]^2 / 16 filter applied to w. Averaging
  /// invariant nodal values keeps w invariant. 0 gives the unfiltered weight.
  int smoothing = 0;
};

/// One pass of the [1 2 1]^2 / 16 filter over node indices.
Field2D smooth_121(const Field2D& f);

/// h_xx + h_yy in divergence form through the face metric terms.
Field2D laplacian(const Grid2D& grid, const Field2D& h);

Field2D weight_values(const Grid2D& grid, const State2D& state,
                      const WeightSpec& spec);

struct EllipticOptions {
  double tol = 1e-10;
  long max_iter = -1;  // -1: 50 * nx * ny sweeps
  const kernels::KernelTable* kernels = nullptr;  // nullptr: active table
};

struct EllipticResult {
  Grid2D grid;
  long sweeps = 0;
  double residual = 0.0;
};

/// Max-norm residual of the weighted five-point equations for both
/// coordinates of `grid`, weights floored at 1e-8.
double elliptic_residual(const Grid2D& grid, const Field2D& w);

/// Red-black Gauss-Seidel from `grid` until the residual is below tol, then
/// shifted so that mean(x^ - x) = tau * anchor_x and likewise in y.
EllipticResult solve_elliptic_grid(const Grid2D& grid, const Field2D& w,
                                   double anchor_x, double anchor_y, double tau,
                                   const EllipticOptions& opt = {});

struct Adaptive2DOptions {
  WeightSpec weight;
  int couple_iterations = 0;
  EllipticOptions mesh;
  PicardOptions picard;
};

struct Adaptive2DResult {
  Step2DResult step;
  long mesh_sweeps = 0;
};

/// Weight from the state at the current level, new grid from the elliptic
/// solve, then the Eulerian step onto it. Each coupling iteration rebuilds
/// the weight from the predicted level and solves again.
Adaptive2DResult step_adaptive_2d(const Grid2D& grid, const State2D& state,
                                  double tau, const Adaptive2DOptions& opt);

}  // namespace invswe
