#include "invswe/mesh1d.hpp"

#include <cmath>
#include <sstream>

namespace invswe {

namespace {

using Index = std::ptrdiff_t;

struct KindName {
  MonitorKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {MonitorKind::ArcLengthU, "arc_length_u"},
    {MonitorKind::ArcLengthH, "arc_length_h"},
    {MonitorKind::ArcLengthUH, "arc_length_uh"},
    {MonitorKind::CurvatureU, "curvature_u"},
    {MonitorKind::CurvatureH, "curvature_h"},
    {MonitorKind::CurvatureUH, "curvature_uh"},
    {MonitorKind::Constant, "constant"},
};

double first_quotient(std::span<const double> z, const Grid1D& g, Index i) {
  const double wide = g.ghost(i + 1) - g.ghost(i - 1);
  if (!(wide != 0.0)) {
    throw SolverError(ErrorKind::TangledMesh, "degenerate spacing in monitor", i);
  }
  const auto n = static_cast<Index>(z.size());
  return (z[periodic_index(i + 1, n).index] - z[periodic_index(i - 1, n).index]) /
         wide;
}

double second_quotient(std::span<const double> z, const Grid1D& g, Index i) {
  const double xm = g.ghost(i - 1), x0 = g.ghost(i), xp = g.ghost(i + 1);
  const double left = x0 - xm, right = xp - x0, wide = xp - xm;
  if (left == 0.0 || right == 0.0 || wide == 0.0) {
    throw SolverError(ErrorKind::TangledMesh, "degenerate spacing in monitor", i);
  }
  const auto n = static_cast<Index>(z.size());
  const double zm = z[periodic_index(i - 1, n).index];
  const double z0 = z[periodic_index(i, n).index];
  const double zp = z[periodic_index(i + 1, n).index];
  return 2.0 * ((zp - z0) / right - (z0 - zm) / left) / wide;
}

}  // namespace

MonitorKind parse_monitor_kind(const std::string& name) {
  for (const auto& k : kKindNames) {
    if (name == k.name) return k.kind;
  }
  throw SolverError(ErrorKind::InvalidConfig, "unknown monitor kind '" + name + "'");
}

std::string to_string(MonitorKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

MonitorSpec MonitorSpec::transformed(const GroupElement1D& g) const {
  const double a = g.scale_time, b = g.scale_field;
  MonitorSpec out = *this;
  switch (kind) {
    case MonitorKind::ArcLengthU:
      out.alpha = std::exp(2.0 * a) * alpha;
      break;
    case MonitorKind::ArcLengthH:
      out.alpha = std::exp(2.0 * (a - b)) * alpha;
      break;
    case MonitorKind::ArcLengthUH:
      out.alpha = std::exp(2.0 * a) * alpha;
      out.beta = std::exp(2.0 * (a - b)) * beta;
      break;
    case MonitorKind::CurvatureU:
      out.alpha = std::exp(2.0 * (2.0 * a + b)) * alpha;
      break;
    case MonitorKind::CurvatureH:
      out.alpha = std::exp(4.0 * a) * alpha;
      break;
    case MonitorKind::CurvatureUH:
      out.alpha = std::exp(2.0 * (2.0 * a + b)) * alpha;
      out.beta = std::exp(4.0 * a) * beta;
      break;
    case MonitorKind::Constant:
      break;
  }
  return out;
}

std::vector<double> monitor_values(const Grid1D& grid, const State1D& state,
                                   const MonitorSpec& spec) {
  require_consistent(grid, state);
  if (!(spec.alpha >= 0.0) || !(spec.beta >= 0.0)) {
    throw SolverError(ErrorKind::InvalidConfig, "monitor constants must be >= 0");
  }
  const std::size_t n = grid.size();
  std::vector<double> rho(n, 1.0);
  if (spec.kind == MonitorKind::Constant) return rho;

  const bool curvature = spec.kind == MonitorKind::CurvatureU ||
                         spec.kind == MonitorKind::CurvatureH ||
                         spec.kind == MonitorKind::CurvatureUH;
  auto q = [&](std::span<const double> z, Index i) {
    return curvature ? second_quotient(z, grid, i) : first_quotient(z, grid, i);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Index>(i);
    double s = 0.0;
    switch (spec.kind) {
      case MonitorKind::ArcLengthU:
      case MonitorKind::CurvatureU: {
        const double d = q(state.u, ii);
        s = spec.alpha * d * d;
        break;
      }
      case MonitorKind::ArcLengthH:
      case MonitorKind::CurvatureH: {
        const double d = q(state.h, ii);
        s = spec.alpha * d * d;
        break;
      }
      case MonitorKind::ArcLengthUH:
      case MonitorKind::CurvatureUH: {
        const double du = q(state.u, ii);
        const double dh = q(state.h, ii);
        s = spec.alpha * du * du + spec.beta * dh * dh;
        break;
      }
      case MonitorKind::Constant:
        break;
    }
    rho[i] = std::sqrt(1.0 + s);
  }
  return rho;
}

double equidistribution_residual(const Grid1D& grid, std::span<const double> rho) {
  const auto n = static_cast<Index>(grid.size());
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double rp = rho[periodic_index(i + 1, n).index];
    const double rm = rho[periodic_index(i - 1, n).index];
    const double r = (rp + rho[i]) * (grid.ghost(i + 1) - grid.ghost(i)) -
                     (rho[i] + rm) * (grid.ghost(i) - grid.ghost(i - 1));
    if (!(std::abs(r) <= worst)) worst = std::abs(r);
  }
  return worst;
}

EquidistributionResult solve_equidistribution(
    const Grid1D& grid, std::span<const double> rho,
    double mean_velocity_anchor, double tau,
    const EquidistributionOptions& opt) {
  require_valid(grid);
  const std::size_t n = grid.size();
  if (rho.size() != n) {
    throw SolverError(ErrorKind::ShapeMismatch, "monitor length does not match grid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) {
      throw SolverError(ErrorKind::InvalidConfig, "monitor must be positive",
                        static_cast<Index>(i));
    }
  }
  const double length = grid.length();
  const long max_iter =
      opt.max_iter > 0 ? opt.max_iter : 10L * static_cast<long>(n * n);

  std::vector<double> wp(n), wm(n);
  for (std::size_t i = 0; i < n; ++i) {
    wp[i] = rho[(i + 1) % n] + rho[i];
    wm[i] = rho[i] + rho[(i + n - 1) % n];
  }

  std::vector<double> x(grid.x().begin(), grid.x().end());
  auto residual = [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double xp = i + 1 == n ? x[0] + length : x[i + 1];
      const double xm = i == 0 ? x[n - 1] - length : x[i - 1];
      const double r = std::abs(wp[i] * (xp - x[i]) - wm[i] * (x[i] - xm));
      if (!(r <= worst)) worst = r;
    }
    return worst;
  };

  long sweeps = 0;
  double r = residual();
  while (!(r <= opt.tol)) {
    if (std::isnan(r) || sweeps >= max_iter) {
      std::ostringstream os;
      os << "equidistribution solve did not converge after " << sweeps
         << " sweeps (residual " << r << ")";
      throw SolverError(ErrorKind::NonConvergence, os.str(), std::nullopt, r);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double xp = i + 1 == n ? x[0] + length : x[i + 1];
      const double xm = i == 0 ? x[n - 1] - length : x[i - 1];
      x[i] = (wp[i] * xp + wm[i] * xm) / (wp[i] + wm[i]);
    }
    ++sweeps;
    r = residual();
  }

  std::vector<double> drift(n);
  for (std::size_t i = 0; i < n; ++i) drift[i] = x[i] - grid[i];
  const double shift =
      tau * mean_velocity_anchor - pairwise_sum(drift) / static_cast<double>(n);
  for (auto& xi : x) xi += shift;

  Grid1D out(std::move(x), length);
  require_valid(out);
  const double final_residual = equidistribution_residual(out, rho);
  return {std::move(out), sweeps, final_residual};
}

std::vector<double> mesh_velocity(const Grid1D& grid, const Grid1D& hat_grid,
                                  double tau) {
  if (grid.size() != hat_grid.size()) {
    throw SolverError(ErrorKind::ShapeMismatch, "grids differ in size");
  }
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (hat_grid[i] - grid[i]) / tau;
  return v;
}

AdaptiveStepResult step_adaptive(const Grid1D& grid, const State1D& state,
                                 double tau, const AdaptiveOptions& opt) {
  require_consistent(grid, state);
  const double anchor = pairwise_sum(state.u) / static_cast<double>(state.size());

  auto physics = [&](const Grid1D& hat) {
    return opt.form == Form1D::Conservative
               ? step_computational_conservative(grid, hat, state, tau, opt.mode,
                                                 opt.picard)
               : step_computational_nonconservative(grid, hat, state, tau,
                                                    opt.mode, opt.picard);
  };

  auto rho = monitor_values(grid, state, opt.monitor);
  auto mesh = solve_equidistribution(grid, rho, anchor, tau, opt.mesh);
  long total_sweeps = mesh.sweeps;
  Step1DResult step = physics(mesh.grid);
  for (int k = 0; k < opt.couple_iterations; ++k) {
    rho = monitor_values(step.grid, step.state, opt.monitor);
    mesh = solve_equidistribution(grid, rho, anchor, tau, opt.mesh);
    total_sweeps += mesh.sweeps;
    step = physics(mesh.grid);
  }
  auto v = mesh_velocity(grid, step.grid, tau);
  return {std::move(step), std::move(v), total_sweeps};
}

}  // namespace invswe
