// Finite actions of the periodic-domain symmetry groups on grids and states,
// the 1D difference invariants, and the two-path equivariance check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "invswe/core.hpp"

namespace invswe {

/// Element of the 1D group generated by d/dt, d/dx, the Galilean boost and
/// the two scalings. Scalings enter as exponents so that all-zero is the
/// identity. The action applies, in order: field scaling (scale_field),
/// time scaling (scale_time), boost, space shift, time shift.
struct GroupElement1D {
  double dt = 0.0;
  double dx = 0.0;
  double boost = 0.0;
  double scale_time = 0.0;   // t d/dt + x d/dx
  double scale_field = 0.0;  // x d/dx + u d/du + 2h d/dh

  bool is_identity() const {
    return dt == 0.0 && dx == 0.0 && boost == 0.0 && scale_time == 0.0 &&
           scale_field == 0.0;
  }
};

/// g2 after g1.
GroupElement1D compose(const GroupElement1D& g2, const GroupElement1D& g1);

struct Snapshot1D {
  double t;
  Grid1D grid;
  State1D state;
};

Snapshot1D act_1d(const GroupElement1D& g, double t, const Grid1D& grid,
                  const State1D& state);

double act_time(const GroupElement1D& g, double t);
double act_time_step(const GroupElement1D& g, double tau);
/// Transforms a nodal velocity field (u or a mesh velocity): e^b v + eps.
std::vector<double> act_velocity(const GroupElement1D& g,
                                 std::span<const double> v);

struct InvariantSet1D {
  std::array<double, 12> values{};
  double operator[](std::size_t k) const { return values[k]; }
};

/// I0..I11 on the three-point stencil around node i at both time levels.
InvariantSet1D difference_invariants_1d(const Grid1D& grid,
                                        const Grid1D& hat_grid,
                                        const State1D& state,
                                        const State1D& hat_state, double tau,
                                        std::ptrdiff_t i);

/// Element of the 2D group generated by d/dt, d/dx, d/dy and both boosts.
struct GroupElement2D {
  double dt = 0.0;
  double dx = 0.0;
  double dy = 0.0;
  double boost_x = 0.0;
  double boost_y = 0.0;

  bool is_identity() const {
    return dt == 0.0 && dx == 0.0 && dy == 0.0 && boost_x == 0.0 &&
           boost_y == 0.0;
  }
};

GroupElement2D compose(const GroupElement2D& g2, const GroupElement2D& g1);

struct Snapshot2D {
  double t;
  Grid2D grid;
  State2D state;
};

Snapshot2D act_2d(const GroupElement2D& g, double t, const Grid2D& grid,
                  const State2D& state);

// ---------------------------------------------------------------------------
// Two-path equivariance
// ---------------------------------------------------------------------------

inline double relative_discrepancy(std::span<const double> d,
                                   std::span<const double> dref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    worst = std::max(worst, std::abs(d[i] - dref[i]) / (1.0 + std::abs(dref[i])));
  }
  return worst;
}

double snapshot_discrepancy(const Grid1D& ga, const State1D& sa,
                            const Grid1D& gb, const State1D& sb);
double snapshot_discrepancy(const Grid2D& ga, const State2D& sa,
                            const Grid2D& gb, const State2D& sb);

/// Runs `steps` steps along both paths: step(act(g, input)) against
/// act(g advanced to t + steps*tau, step(input)), and returns the maximum of
/// |d - d'| / (1 + |d'|) over positions and fields.
///
/// `step` is `R(const Grid1D&, const State1D&, double tau)` with R exposing
/// `.grid` and `.state`. `transformed_step` runs on the transformed problem;
/// it differs from `step` only when a parameter (e.g. a monitor constant) is
/// itself mapped by the group as an equivalence transformation.
template <class Step, class TransformedStep>
double check_equivariance(Step&& step, TransformedStep&& transformed_step,
                          const GroupElement1D& g, double t,
                          const Grid1D& grid, const State1D& state, double tau,
                          int steps = 1) {
  Grid1D g_direct = grid;
  State1D s_direct = state;
  for (int n = 0; n < steps; ++n) {
    auto r = step(g_direct, s_direct, tau);
    g_direct = std::move(r.grid);
    s_direct = std::move(r.state);
  }
  const Snapshot1D mapped_out =
      act_1d(g, t + steps * tau, g_direct, s_direct);

  Snapshot1D mapped_in = act_1d(g, t, grid, state);
  const double mapped_tau = act_time_step(g, tau);
  Grid1D g_t = mapped_in.grid;
  State1D s_t = mapped_in.state;
  for (int n = 0; n < steps; ++n) {
    auto r = transformed_step(g_t, s_t, mapped_tau);
    g_t = std::move(r.grid);
    s_t = std::move(r.state);
  }
  return snapshot_discrepancy(g_t, s_t, mapped_out.grid, mapped_out.state);
}

template <class Step>
double check_equivariance(Step&& step, const GroupElement1D& g, double t,
                          const Grid1D& grid, const State1D& state, double tau,
                          int steps = 1) {
  return check_equivariance(step, step, g, t, grid, state, tau, steps);
}

/// 2D analogue; `step` is `R(const Grid2D&, const State2D&, double tau)`.
template <class Step>
double check_equivariance(Step&& step, const GroupElement2D& g, double t,
                          const Grid2D& grid, const State2D& state, double tau,
                          int steps = 1) {
  Grid2D g_direct = grid;
  State2D s_direct = state;
  for (int n = 0; n < steps; ++n) {
    auto r = step(g_direct, s_direct, tau);
    g_direct = std::move(r.grid);
    s_direct = std::move(r.state);
  }
  const Snapshot2D mapped_out = act_2d(g, t + steps * tau, g_direct, s_direct);

  Snapshot2D mapped_in = act_2d(g, t, grid, state);
  Grid2D g_t = mapped_in.grid;
  State2D s_t = mapped_in.state;
  for (int n = 0; n < steps; ++n) {
    auto r = step(g_t, s_t, tau);
    g_t = std::move(r.grid);
    s_t = std::move(r.state);
  }
  return snapshot_discrepancy(g_t, s_t, mapped_out.grid, mapped_out.state);
}

}  // namespace invswe
