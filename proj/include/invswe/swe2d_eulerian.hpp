// Conservative scheme in computational coordinates on a moving mesh
// supplied by the grid generator.
#pragma once

#include <array>

#include "invswe/core.hpp"
#include "invswe/kernels/kernels.hpp"
#include "invswe/picard.hpp"

namespace invswe {

/// Metric factors of one time level. Face arrays: index (j, k) of the
/// xi-face arrays is the face (j+1/2, k); of the eta-face arrays the face
/// (j, k+1/2).
struct MetricTerms {
  Field2D J;
  Field2D xi_x, xi_y, xi_t;
  Field2D eta_x, eta_y, eta_t;
  double dxi = 1.0;
  double deta = 1.0;
};

/// Metric terms of `geometry` with nodal mesh velocities (xdot, ydot).
/// Throws TangledMesh on a nonpositive nodal Jacobian.
MetricTerms metric_terms_at(const Grid2D& geometry, const Field2D& xdot,
                            const Field2D& ydot);

struct MetricPair {
  MetricTerms now;
  MetricTerms next;
  Field2D xdot;
  Field2D ydot;
};

/// Both levels with the mesh velocity (hat - current) / tau shared by them.
MetricPair metric_terms(const Grid2D& grid, const Grid2D& hat_grid, double tau);

/// Components (h, hu, hv) of F^t, F^x, F^y at the nodes.
struct FluxVectors {
  std::array<Field2D, 3> t;
  std::array<Field2D, 3> x;
  std::array<Field2D, 3> y;
};

FluxVectors flux_vectors(const State2D& state);

struct FluxDivergence {
  std::array<Field2D, 3> U;
  std::array<Field2D, 3> V;
};

/// The averaged-flux differences U_jk and V_jk of every component.
/// `kt` selects the row kernels; nullptr means kernels::active_kernels().
FluxDivergence assemble_UV(const MetricTerms& metric, const FluxVectors& flux,
                           const kernels::KernelTable* kt = nullptr);

/// Residual (J^ F^t^ - J F^t)/tau + (U + U^)/2 + (V + V^)/2 per component.
std::array<Field2D, 3> eulerian_residual(const Grid2D& grid,
                                         const Grid2D& hat_grid,
                                         const State2D& state,
                                         const State2D& hat_state, double tau);

/// Advances the state from `grid` to `hat_grid` (equal grids mean a static
/// mesh). The returned grid is `hat_grid`.
Step2DResult step_eulerian_trapezoidal(const Grid2D& grid,
                                       const Grid2D& hat_grid,
                                       const State2D& state, double tau,
                                       const PicardOptions& opt = {});

}  // namespace invswe
