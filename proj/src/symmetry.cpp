#include "invswe/symmetry.hpp"

#include <cmath>
#include <sstream>

namespace invswe {

GroupElement1D compose(const GroupElement1D& g2, const GroupElement1D& g1) {
  const double ea2 = std::exp(g2.scale_time);
  const double eb2 = std::exp(g2.scale_field);
  GroupElement1D g;
  g.scale_time = g1.scale_time + g2.scale_time;
  g.scale_field = g1.scale_field + g2.scale_field;
  g.boost = eb2 * g1.boost + g2.boost;
  g.dx = ea2 * eb2 * g1.dx + g2.boost * ea2 * g1.dt + g2.dx;
  g.dt = ea2 * g1.dt + g2.dt;
  return g;
}

double act_time(const GroupElement1D& g, double t) {
  return std::exp(g.scale_time) * t + g.dt;
}

double act_time_step(const GroupElement1D& g, double tau) {
  return std::exp(g.scale_time) * tau;
}

std::vector<double> act_velocity(const GroupElement1D& g,
                                 std::span<const double> v) {
  const double eb = std::exp(g.scale_field);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = eb * v[i] + g.boost;
  return out;
}

Snapshot1D act_1d(const GroupElement1D& g, double t, const Grid1D& grid,
                  const State1D& state) {
  const double ea = std::exp(g.scale_time);
  const double eb = std::exp(g.scale_field);
  const double space = ea * eb;
  const double t_scaled = ea * t;

  std::vector<double> x(grid.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = space * grid[i];
    x[i] = x[i] + g.boost * t_scaled;
    x[i] = x[i] + g.dx;
  }
  State1D s;
  s.u.resize(state.size());
  s.h.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) {
    s.u[i] = eb * state.u[i] + g.boost;
    s.h[i] = eb * eb * state.h[i];
  }
  return {t_scaled + g.dt, Grid1D(std::move(x), space * grid.length()),
          std::move(s)};
}

InvariantSet1D difference_invariants_1d(const Grid1D& grid,
                                        const Grid1D& hat_grid,
                                        const State1D& state,
                                        const State1D& hat_state, double tau,
                                        std::ptrdiff_t i) {
  const double xm = grid.ghost(i - 1), x0 = grid.ghost(i), xp = grid.ghost(i + 1);
  const double hxm = hat_grid.ghost(i - 1), hx0 = hat_grid.ghost(i),
               hxp = hat_grid.ghost(i + 1);
  const double wide = xp - xm;
  const double left = x0 - xm;
  const double right = xp - x0;
  const double hat_wide = hxp - hxm;
  if (wide == 0.0 || left == 0.0 || right == 0.0 || hat_wide == 0.0) {
    std::ostringstream os;
    os << "degenerate spacing in difference-invariant stencil at i = " << i;
    throw SolverError(ErrorKind::TangledMesh, os.str(), i);
  }

  const double um = state.u_at(i - 1), u0 = state.u_at(i), up = state.u_at(i + 1);
  const double hm = state.h_at(i - 1), h0 = state.h_at(i), hp = state.h_at(i + 1);
  const double hu0 = hat_state.u_at(i), hum = hat_state.u_at(i - 1),
               hup = hat_state.u_at(i + 1);
  const double hh0 = hat_state.h_at(i), hhm = hat_state.h_at(i - 1),
               hhp = hat_state.h_at(i + 1);
  const double mesh_velocity = (hx0 - x0) / tau;
  const double tau2_wide2 = tau * tau / (wide * wide);

  InvariantSet1D out;
  auto& I = out.values;
  I[0] = right / left;
  I[1] = (mesh_velocity - u0) * tau / wide;
  I[2] = (hu0 - u0) * tau / wide;
  I[3] = (up - um) * tau / wide;
  I[4] = (up - u0) * tau / right;
  I[5] = hm * tau2_wide2;
  I[6] = h0 * tau2_wide2;
  I[7] = hp * tau2_wide2;
  I[8] = hh0 * tau2_wide2;
  I[9] = (mesh_velocity - hu0) * tau / wide;
  I[10] = (hup - hum) * tau / hat_wide;
  I[11] = (hhp - hhm) * tau * tau / (wide * hat_wide);
  return out;
}

GroupElement2D compose(const GroupElement2D& g2, const GroupElement2D& g1) {
  GroupElement2D g;
  g.dt = g1.dt + g2.dt;
  g.boost_x = g1.boost_x + g2.boost_x;
  g.boost_y = g1.boost_y + g2.boost_y;
  g.dx = g1.dx + g2.dx + g2.boost_x * g1.dt;
  g.dy = g1.dy + g2.dy + g2.boost_y * g1.dt;
  return g;
}

Snapshot2D act_2d(const GroupElement2D& g, double t, const Grid2D& grid,
                  const State2D& state) {
  Field2D x = grid.x();
  Field2D y = grid.y();
  State2D s = state;
  auto xs = x.flat();
  auto ys = y.flat();
  auto us = s.u.flat();
  auto vs = s.v.flat();
  for (std::size_t n = 0; n < xs.size(); ++n) {
    xs[n] = xs[n] + g.boost_x * t;
    xs[n] = xs[n] + g.dx;
    ys[n] = ys[n] + g.boost_y * t;
    ys[n] = ys[n] + g.dy;
    us[n] = us[n] + g.boost_x;
    vs[n] = vs[n] + g.boost_y;
  }
  return {t + g.dt,
          Grid2D(std::move(x), std::move(y), grid.lx(), grid.ly(), grid.dxi(),
                 grid.deta()),
          std::move(s)};
}

double snapshot_discrepancy(const Grid1D& ga, const State1D& sa,
                            const Grid1D& gb, const State1D& sb) {
  double d = relative_discrepancy(ga.x(), gb.x());
  d = std::max(d, relative_discrepancy(sa.u, sb.u));
  d = std::max(d, relative_discrepancy(sa.h, sb.h));
  return d;
}

double snapshot_discrepancy(const Grid2D& ga, const State2D& sa,
                            const Grid2D& gb, const State2D& sb) {
  double d = relative_discrepancy(ga.x().flat(), gb.x().flat());
  d = std::max(d, relative_discrepancy(ga.y().flat(), gb.y().flat()));
  d = std::max(d, relative_discrepancy(sa.u.flat(), sb.u.flat()));
  d = std::max(d, relative_discrepancy(sa.v.flat(), sb.v.flat()));
  d = std::max(d, relative_discrepancy(sa.h.flat(), sb.h.flat()));
  return d;
}

}  // namespace invswe
