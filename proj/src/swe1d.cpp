#include "invswe/swe1d.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace invswe {

namespace {

std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> handler =
      [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
  return handler;
}

using Index = std::ptrdiff_t;

std::size_t wrap(Index i, std::size_t n) {
  return static_cast<std::size_t>(periodic_index(i, static_cast<Index>(n)).index);
}

/// x_{i+1} - x_{i-1} for every node.
std::vector<double> wide_spacings(const Grid1D& g) {
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ii = static_cast<Index>(i);
    w[i] = g.ghost(ii + 1) - g.ghost(ii - 1);
  }
  return w;
}

double central(std::span<const double> z, std::span<const double> wide,
               std::size_t i) {
  const std::size_t n = z.size();
  return (z[wrap(static_cast<Index>(i) + 1, n)] -
          z[wrap(static_cast<Index>(i) - 1, n)]) /
         wide[i];
}

std::vector<double> squares(std::span<const double> z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i] * z[i];
  return out;
}

void check_inputs(const Grid1D& grid, const State1D& state, double tau) {
  require_consistent(grid, state);
  if (!(tau > 0.0)) {
    throw SolverError(ErrorKind::InvalidConfig, "time step must be positive");
  }
  require_valid(grid);
}

void check_explicit_cfl(const Grid1D& grid, const State1D& state, double tau) {
  const double c = cfl_number(grid, state, tau);
  if (c > 1.0) {
    std::ostringstream os;
    os << "explicit step with CFL number " << c << " > 1";
    emit_warning(os.str());
  }
}

Step1DResult finish(std::vector<double> x, double length, State1D state,
                    int iterations = 0, double residual = 0.0) {
  Grid1D grid(std::move(x), length);
  require_valid(grid);
  require_positive_depth(state.h);
  return {std::move(grid), std::move(state), iterations, residual};
}

// Unknown layout for the coupled Picard solves: [x_hat | u_hat | h_hat] or
// [u_hat | h_hat] when the grid is prescribed.
struct Blocks {
  std::size_t n;
  std::span<const double> part(const std::vector<double>& z, int b) const {
    return std::span<const double>(z).subspan(b * n, n);
  }
  std::span<double> part(std::vector<double>& z, int b) const {
    return std::span<double>(z).subspan(b * n, n);
  }
};

}  // namespace

void set_warning_handler(std::function<void(const std::string&)> handler) {
  warning_handler() = std::move(handler);
}

void emit_warning(const std::string& message) {
  if (warning_handler()) warning_handler()(message);
}

double cfl_number(const Grid1D& grid, const State1D& state, double tau) {
  double speed = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    speed = std::max(speed, std::abs(state.u[i]) + std::sqrt(std::max(state.h[i], 0.0)));
  }
  double min_dx = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto ii = static_cast<Index>(i);
    min_dx = std::min(min_dx, grid.ghost(ii + 1) - grid.ghost(ii));
  }
  return tau * speed / min_dx;
}

double flux_A(std::span<const double> z, std::span<const double> u,
              std::span<const double> mesh_velocity, const Grid1D& grid,
              std::ptrdiff_t i) {
  const std::size_t n = z.size();
  const std::size_t p = wrap(i + 1, n), m = wrap(i - 1, n);
  const double wide = grid.ghost(i + 1) - grid.ghost(i - 1);
  if (wide == 0.0) {
    throw SolverError(ErrorKind::TangledMesh, "zero spacing in flux A", i);
  }
  return ((u[p] - mesh_velocity[p]) * z[p] - (u[m] - mesh_velocity[m]) * z[m]) /
         wide;
}

double flux_D(std::span<const double> z, const Grid1D& grid, std::ptrdiff_t i) {
  const std::size_t n = z.size();
  const double wide = grid.ghost(i + 1) - grid.ghost(i - 1);
  if (wide == 0.0) {
    throw SolverError(ErrorKind::TangledMesh, "zero spacing in flux D", i);
  }
  return (z[wrap(i + 1, n)] - z[wrap(i - 1, n)]) / wide;
}

// ---------------------------------------------------------------------------
// Lagrangian difference-invariant schemes
// ---------------------------------------------------------------------------

Step1DResult step_lagrangian_explicit(const Grid1D& grid, const State1D& state,
                                      double tau) {
  check_inputs(grid, state, tau);
  check_explicit_cfl(grid, state, tau);
  const std::size_t n = grid.size();
  const auto wide = wide_spacings(grid);
  std::vector<double> x(n);
  State1D out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double du = central(state.u, wide, i);
    const double dh = central(state.h, wide, i);
    x[i] = grid[i] + tau * state.u[i];
    out.u[i] = state.u[i] - tau * dh;
    out.h[i] = state.h[i] - tau * (state.h[i] * du);
  }
  return finish(std::move(x), grid.length(), std::move(out));
}

Step1DResult step_lagrangian_trapezoidal(const Grid1D& grid,
                                         const State1D& state, double tau,
                                         const PicardOptions& opt) {
  check_inputs(grid, state, tau);
  const std::size_t n = grid.size();
  const double length = grid.length();
  const auto wide = wide_spacings(grid);
  std::vector<double> du(n), dh(n);
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = central(state.u, wide, i);
    dh[i] = central(state.h, wide, i);
  }

  const Blocks b{n};
  std::vector<double> z(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = grid[i] + tau * state.u[i];
    z[n + i] = state.u[i];
    z[2 * n + i] = state.h[i];
  }
  std::vector<double> hat_wide(n);
  auto map = [&](const std::vector<double>& zk, std::vector<double>& out) {
    const auto xh = b.part(zk, 0), uh = b.part(zk, 1), hh = b.part(zk, 2);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Index>(i);
      const double xp = xh[wrap(ii + 1, n)] + (i + 1 == n ? length : 0.0);
      const double xm = xh[wrap(ii - 1, n)] - (i == 0 ? length : 0.0);
      hat_wide[i] = xp - xm;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double duh = central(uh, hat_wide, i);
      const double dhh = central(hh, hat_wide, i);
      out[i] = grid[i] + tau * (0.5 * (state.u[i] + uh[i]));
      out[n + i] = state.u[i] - tau * (0.5 * (dh[i] + dhh));
      out[2 * n + i] =
          state.h[i] - tau * (0.5 * (state.h[i] * du[i] + hh[i] * duh));
    }
  };
  const auto outcome = picard_solve(z, map, opt, "lagrangian trapezoidal step");
  std::vector<double> x(z.begin(), z.begin() + n);
  State1D s{std::vector<double>(z.begin() + n, z.begin() + 2 * n),
            std::vector<double>(z.begin() + 2 * n, z.end())};
  return finish(std::move(x), length, std::move(s), outcome.iterations,
                outcome.residual);
}

// ---------------------------------------------------------------------------
// Momentum-form Lagrangian schemes
// ---------------------------------------------------------------------------

Step1DResult step_conservative_explicit(const Grid1D& grid,
                                        const State1D& state, double tau) {
  check_inputs(grid, state, tau);
  check_explicit_cfl(grid, state, tau);
  const std::size_t n = grid.size();
  const auto wide = wide_spacings(grid);
  const auto h2 = squares(state.h);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = grid[i] + tau * state.u[i];
  const Grid1D hat(x, grid.length());
  require_valid(hat);
  const auto hat_wide = wide_spacings(hat);

  State1D out{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.h[i] = state.h[i] * wide[i] / hat_wide[i];
    const double momentum =
        state.u[i] * state.h[i] - 0.5 * tau * central(h2, wide, i);
    out.u[i] = momentum / state.h[i];
  }
  return finish(std::move(x), grid.length(), std::move(out));
}

Step1DResult step_conservative_trapezoidal(const Grid1D& grid,
                                           const State1D& state, double tau,
                                           const PicardOptions& opt) {
  check_inputs(grid, state, tau);
  const std::size_t n = grid.size();
  const double length = grid.length();
  const auto wide = wide_spacings(grid);
  const auto h2 = squares(state.h);
  std::vector<double> dh2(n);
  for (std::size_t i = 0; i < n; ++i) dh2[i] = central(h2, wide, i);

  const Blocks b{n};
  std::vector<double> z(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = grid[i] + tau * state.u[i];
    z[n + i] = state.u[i];
    z[2 * n + i] = state.h[i];
  }
  std::vector<double> hat_wide(n), hh2(n);
  auto map = [&](const std::vector<double>& zk, std::vector<double>& out) {
    const auto uh = b.part(zk, 1);
    auto xo = b.part(out, 0), uo = b.part(out, 1), ho = b.part(out, 2);
    // x_hat first, then the mass row on the new positions so that
    // h_hat * (x_hat_{i+1} - x_hat_{i-1}) = h * (x_{i+1} - x_{i-1}) holds for
    // the returned iterate.
    for (std::size_t i = 0; i < n; ++i) {
      xo[i] = grid[i] + tau * (0.5 * (state.u[i] + uh[i]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Index>(i);
      const double xp = xo[wrap(ii + 1, n)] + (i + 1 == n ? length : 0.0);
      const double xm = xo[wrap(ii - 1, n)] - (i == 0 ? length : 0.0);
      hat_wide[i] = xp - xm;
    }
    for (std::size_t i = 0; i < n; ++i) {
      ho[i] = state.h[i] * wide[i] / hat_wide[i];
      hh2[i] = ho[i] * ho[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double momentum = state.u[i] * state.h[i] -
                              0.25 * tau * (dh2[i] + central(hh2, hat_wide, i));
      uo[i] = momentum / state.h[i];
    }
  };
  auto outcome = picard_solve(z, map, opt, "conservative trapezoidal step");
  // Damped iterates may break the mass row; one more map application
  // restores it exactly (and is itself within tolerance of the fixed point).
  if (outcome.iterations > 0) {
    std::vector<double> exact(z.size());
    map(z, exact);
    z.swap(exact);
  }
  std::vector<double> x(z.begin(), z.begin() + n);
  State1D s{std::vector<double>(z.begin() + n, z.begin() + 2 * n),
            std::vector<double>(z.begin() + 2 * n, z.end())};
  return finish(std::move(x), length, std::move(s), outcome.iterations,
                outcome.residual);
}

// ---------------------------------------------------------------------------
// Computational-coordinate schemes
// ---------------------------------------------------------------------------

namespace {

std::vector<double> mesh_velocity_of(const Grid1D& grid, const Grid1D& hat,
                                     double tau) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (hat[i] - grid[i]) / tau;
  return v;
}

Grid1D advance_grid(const Grid1D& grid, std::span<const double> mv,
                    double tau) {
  if (mv.size() != grid.size()) {
    throw SolverError(ErrorKind::ShapeMismatch,
                      "mesh velocity length does not match grid");
  }
  std::vector<double> x(grid.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = grid[i] + tau * mv[i];
  return Grid1D(std::move(x), grid.length());
}

Step1DResult nonconservative_core(const Grid1D& grid, const Grid1D& hat,
                                  std::span<const double> mv,
                                  const State1D& state, double tau,
                                  TimeMode mode, const PicardOptions& opt) {
  check_inputs(grid, state, tau);
  require_valid(hat);
  const std::size_t n = grid.size();
  const auto wide = wide_spacings(grid);
  const auto hat_wide = wide_spacings(hat);
  std::vector<double> du(n), dh(n);
  for (std::size_t i = 0; i < n; ++i) {
    du[i] = central(state.u, wide, i);
    dh[i] = central(state.h, wide, i);
  }
  std::vector<double> x(hat.x().begin(), hat.x().end());

  if (mode == TimeMode::Explicit) {
    check_explicit_cfl(grid, state, tau);
    State1D out{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      const double rel = state.u[i] - mv[i];
      out.u[i] = state.u[i] - tau * (rel * du[i] + dh[i]);
      out.h[i] = state.h[i] - tau * (rel * dh[i] + state.h[i] * du[i]);
    }
    return finish(std::move(x), grid.length(), std::move(out));
  }

  const Blocks b{n};
  std::vector<double> z(2 * n);
  std::copy(state.u.begin(), state.u.end(), z.begin());
  std::copy(state.h.begin(), state.h.end(), z.begin() + n);
  auto map = [&](const std::vector<double>& zk, std::vector<double>& out) {
    const auto uh = b.part(zk, 0), hh = b.part(zk, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const double duh = central(uh, hat_wide, i);
      const double dhh = central(hh, hat_wide, i);
      const double rel = 0.5 * (state.u[i] + uh[i]) - mv[i];
      out[i] = state.u[i] -
               tau * (0.5 * rel * (du[i] + duh) + 0.5 * (dh[i] + dhh));
      out[n + i] = state.h[i] - tau * (0.5 * rel * (dh[i] + dhh) +
                                       0.5 * (state.h[i] * du[i] + hh[i] * duh));
    }
  };
  const auto outcome =
      picard_solve(z, map, opt, "computational nonconservative step");
  State1D s{std::vector<double>(z.begin(), z.begin() + n),
            std::vector<double>(z.begin() + n, z.end())};
  return finish(std::move(x), grid.length(), std::move(s), outcome.iterations,
                outcome.residual);
}

Step1DResult conservative_core(const Grid1D& grid, const Grid1D& hat,
                               std::span<const double> mv,
                               const State1D& state, double tau, TimeMode mode,
                               const PicardOptions& opt) {
  check_inputs(grid, state, tau);
  require_valid(hat);
  const std::size_t n = grid.size();
  const auto wide = wide_spacings(grid);
  const auto hat_wide = wide_spacings(hat);
  const auto h2 = squares(state.h);
  std::vector<double> uh0(n);
  for (std::size_t i = 0; i < n; ++i) uh0[i] = state.u[i] * state.h[i];
  std::vector<double> a_h(n), a_uh(n), d_h2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Index>(i);
    a_h[i] = flux_A(state.h, state.u, mv, grid, ii);
    a_uh[i] = flux_A(uh0, state.u, mv, grid, ii);
    d_h2[i] = central(h2, wide, i);
  }
  std::vector<double> x(hat.x().begin(), hat.x().end());

  if (mode == TimeMode::Explicit) {
    check_explicit_cfl(grid, state, tau);
    State1D out{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      const double mass = state.h[i] - tau * a_h[i];
      out.h[i] = mass * wide[i] / hat_wide[i];
      const double momentum = uh0[i] - tau * a_uh[i] - 0.5 * tau * d_h2[i];
      out.u[i] = momentum / mass;
    }
    return finish(std::move(x), grid.length(), std::move(out));
  }

  const Blocks b{n};
  std::vector<double> z(2 * n);
  std::copy(state.u.begin(), state.u.end(), z.begin());
  std::copy(state.h.begin(), state.h.end(), z.begin() + n);
  std::vector<double> huh(n), hh2(n);
  auto map = [&](const std::vector<double>& zk, std::vector<double>& out) {
    const auto uh = b.part(zk, 0), hh = b.part(zk, 1);
    for (std::size_t i = 0; i < n; ++i) {
      huh[i] = uh[i] * hh[i];
      hh2[i] = hh[i] * hh[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Index>(i);
      const double mass =
          state.h[i] - 0.5 * tau * (a_h[i] + flux_A(hh, uh, mv, hat, ii));
      out[n + i] = mass * wide[i] / hat_wide[i];
      const double momentum =
          uh0[i] - 0.5 * tau * (a_uh[i] + flux_A(huh, uh, mv, hat, ii)) -
          0.25 * tau * (d_h2[i] + central(hh2, hat_wide, i));
      out[i] = momentum / mass;
    }
  };
  const auto outcome =
      picard_solve(z, map, opt, "computational conservative step");
  State1D s{std::vector<double>(z.begin(), z.begin() + n),
            std::vector<double>(z.begin() + n, z.end())};
  return finish(std::move(x), grid.length(), std::move(s), outcome.iterations,
                outcome.residual);
}

}  // namespace

Step1DResult step_computational_nonconservative(
    const Grid1D& grid, const State1D& state, double tau,
    std::span<const double> mesh_velocity, TimeMode mode,
    const PicardOptions& opt) {
  const Grid1D hat = advance_grid(grid, mesh_velocity, tau);
  return nonconservative_core(grid, hat, mesh_velocity, state, tau, mode, opt);
}

Step1DResult step_computational_conservative(
    const Grid1D& grid, const State1D& state, double tau,
    std::span<const double> mesh_velocity, TimeMode mode,
    const PicardOptions& opt) {
  const Grid1D hat = advance_grid(grid, mesh_velocity, tau);
  return conservative_core(grid, hat, mesh_velocity, state, tau, mode, opt);
}

Step1DResult step_computational_nonconservative(
    const Grid1D& grid, const Grid1D& hat_grid, const State1D& state,
    double tau, TimeMode mode, const PicardOptions& opt) {
  const auto mv = mesh_velocity_of(grid, hat_grid, tau);
  return nonconservative_core(grid, hat_grid, mv, state, tau, mode, opt);
}

Step1DResult step_computational_conservative(
    const Grid1D& grid, const Grid1D& hat_grid, const State1D& state,
    double tau, TimeMode mode, const PicardOptions& opt) {
  const auto mv = mesh_velocity_of(grid, hat_grid, tau);
  return conservative_core(grid, hat_grid, mv, state, tau, mode, opt);
}

Residual1D conservative_residual(const Grid1D& grid, const Grid1D& hat_grid,
                                 const State1D& state, const State1D& hat_state,
                                 double tau, TimeMode mode) {
  require_consistent(grid, state);
  require_consistent(hat_grid, hat_state);
  const std::size_t n = grid.size();
  const auto wide = wide_spacings(grid);
  const auto hat_wide = wide_spacings(hat_grid);
  const auto h2 = squares(state.h);
  const auto hh2 = squares(hat_state.h);
  const bool trap = mode == TimeMode::Trapezoidal;
  Residual1D r{std::vector<double>(n), std::vector<double>(n),
               std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double ubar = trap ? 0.5 * (state.u[i] + hat_state.u[i]) : state.u[i];
    const double ratio = hat_wide[i] / wide[i];
    r.mesh[i] = (hat_grid[i] - grid[i]) / tau - ubar;
    r.mass[i] = hat_state.h[i] * ratio - state.h[i];
    const double pressure =
        trap ? 0.25 * tau * (central(h2, wide, i) + central(hh2, hat_wide, i))
             : 0.5 * tau * central(h2, wide, i);
    r.momentum[i] = hat_state.u[i] * hat_state.h[i] * ratio -
                    state.u[i] * state.h[i] + pressure;
  }
  return r;
}

Residual1D computational_conservative_residual(const Grid1D& grid,
                                               const Grid1D& hat_grid,
                                               const State1D& state,
                                               const State1D& hat_state,
                                               double tau, TimeMode mode) {
  require_consistent(grid, state);
  require_consistent(hat_grid, hat_state);
  const std::size_t n = grid.size();
  const auto mv = mesh_velocity_of(grid, hat_grid, tau);
  const auto wide = wide_spacings(grid);
  const auto hat_wide = wide_spacings(hat_grid);
  const auto h2 = squares(state.h);
  const auto hh2 = squares(hat_state.h);
  std::vector<double> uh(n), huh(n);
  for (std::size_t i = 0; i < n; ++i) {
    uh[i] = state.u[i] * state.h[i];
    huh[i] = hat_state.u[i] * hat_state.h[i];
  }
  const bool trap = mode == TimeMode::Trapezoidal;
  Residual1D r{std::vector<double>(n, 0.0), std::vector<double>(n),
               std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Index>(i);
    const double ratio = hat_wide[i] / wide[i];
    double a_h = flux_A(state.h, state.u, mv, grid, ii);
    double a_uh = flux_A(uh, state.u, mv, grid, ii);
    double pressure = 0.5 * tau * central(h2, wide, i);
    if (trap) {
      a_h = 0.5 * (a_h + flux_A(hat_state.h, hat_state.u, mv, hat_grid, ii));
      a_uh = 0.5 * (a_uh + flux_A(huh, hat_state.u, mv, hat_grid, ii));
      pressure = 0.25 * tau * (central(h2, wide, i) + central(hh2, hat_wide, i));
    }
    r.mass[i] = hat_state.h[i] * ratio - state.h[i] + tau * a_h;
    r.momentum[i] = huh[i] * ratio - uh[i] + tau * a_uh + pressure;
  }
  return r;
}

}  // namespace invswe
