#include "invswe/mesh2d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "invswe/swe2d_eulerian.hpp"

namespace invswe {

namespace {

using Idx = std::ptrdiff_t;

constexpr double kWeightFloor = 1e-8;
constexpr long kCheckEvery = 4;

struct Coefficients {
  Field2D ae, aw, an, as, den;
};

Coefficients coefficients(const Grid2D& grid, const Field2D& w) {
  const std::size_t nx = grid.nx(), ny = grid.ny();
  if (w.nx() != nx || w.ny() != ny) {
    throw SolverError(ErrorKind::ShapeMismatch, "weight shape does not match grid");
  }
  auto wf = [&](Idx j, Idx k) { return std::max(w.wrapped(j, k), kWeightFloor); };
  const double sx = 1.0 / (grid.dxi() * grid.dxi());
  const double sy = 1.0 / (grid.deta() * grid.deta());
  Coefficients c{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny),
                 Field2D(nx, ny), Field2D(nx, ny)};
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const Idx a = static_cast<Idx>(j), b = static_cast<Idx>(k);
      const double w0 = wf(a, b);
      c.ae(j, k) = 0.5 * (wf(a + 1, b) + w0) * sx;
      c.aw(j, k) = 0.5 * (w0 + wf(a - 1, b)) * sx;
      c.an(j, k) = 0.5 * (wf(a, b + 1) + w0) * sy;
      c.as(j, k) = 0.5 * (w0 + wf(a, b - 1)) * sy;
      c.den(j, k) = c.ae(j, k) + c.aw(j, k) + c.an(j, k) + c.as(j, k);
    }
  }
  return c;
}

// One colour of one coordinate. `seam_j` is added when stepping across the
// j seam (Lx for x, 0 for y) and `seam_k` across the k seam.
void sweep_colour(const kernels::KernelTable& kt, const Coefficients& c,
                  Field2D& z, int colour, double seam_j, double seam_k) {
  const std::size_t nx = z.nx(), ny = z.ny();
  auto node = [&](double* zr, std::size_t j, double e, double w, double n,
                  double s, std::size_t k) {
    double num = c.ae(j, k) * e;
    num = num + c.aw(j, k) * w;
    num = num + c.an(j, k) * n;
    num = num + c.as(j, k) * s;
    zr[j] = num / c.den(j, k);
  };
  for (std::size_t k = 0; k < ny; ++k) {
    const std::size_t kn = (k + 1) % ny;
    const std::size_t ks = (k + ny - 1) % ny;
    const double off_n = k + 1 == ny ? seam_k : 0.0;
    const double off_s = k == 0 ? -seam_k : 0.0;
    double* zr = z.row(k);
    const double* zn = z.row(kn);
    const double* zs = z.row(ks);
    const std::size_t j0 = static_cast<std::size_t>((colour + static_cast<int>(k % 2)) % 2);
    if (j0 == 0) {
      node(zr, 0, zr[1], zr[nx - 1] - seam_j, zn[0] + off_n, zs[0] + off_s, k);
    }
    const std::size_t begin = j0 == 0 ? 2 : 1;
    kt.sweep_row(begin, nx - 1, c.ae.row(k), c.aw.row(k), c.an.row(k),
                 c.as.row(k), c.den.row(k), zn, off_n, zs, off_s, zr);
    if ((nx - 1) % 2 == j0) {
      node(zr, nx - 1, zr[0] + seam_j, zr[nx - 2], zn[nx - 1] + off_n,
           zs[nx - 1] + off_s, k);
    }
  }
}

double coordinate_residual(const Coefficients& c, const Field2D& z,
                           double seam_j, double seam_k) {
  const std::size_t nx = z.nx(), ny = z.ny();
  double worst = 0.0;
  for (std::size_t k = 0; k < ny; ++k) {
    const std::size_t kn = (k + 1) % ny;
    const std::size_t ks = (k + ny - 1) % ny;
    const double off_n = k + 1 == ny ? seam_k : 0.0;
    const double off_s = k == 0 ? -seam_k : 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
      const double z0 = z(j, k);
      const double e = j + 1 == nx ? z(0, k) + seam_j : z(j + 1, k);
      const double w = j == 0 ? z(nx - 1, k) - seam_j : z(j - 1, k);
      const double n = z(j, kn) + off_n;
      const double s = z(j, ks) + off_s;
      const double r = c.ae(j, k) * (e - z0) - c.aw(j, k) * (z0 - w) +
                       c.an(j, k) * (n - z0) - c.as(j, k) * (z0 - s);
      const double a = std::abs(r);
      if (!(a <= worst)) worst = a;
    }
  }
  return worst;
}

double grid_residual(const Coefficients& c, const Field2D& x, const Field2D& y,
                     double lx, double ly) {
  return std::max(coordinate_residual(c, x, lx, 0.0),
                  coordinate_residual(c, y, 0.0, ly));
}

double mean_difference(const Field2D& a, const Field2D& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.flat()[i] - b.flat()[i];
  return pairwise_sum(d) / static_cast<double>(d.size());
}

double mean(const Field2D& f) {
  return pairwise_sum(f.flat()) / static_cast<double>(f.size());
}

struct NodalMetric {
  double x_xi, x_eta, y_xi, y_eta, J;
};

NodalMetric nodal_metric(const Grid2D& g, Idx j, Idx k) {
  NodalMetric m;
  m.x_xi = (g.gx(j + 1, k) - g.gx(j - 1, k)) / (2.0 * g.dxi());
  m.y_xi = (g.gy(j + 1, k) - g.gy(j - 1, k)) / (2.0 * g.dxi());
  m.x_eta = (g.gx(j, k + 1) - g.gx(j, k - 1)) / (2.0 * g.deta());
  m.y_eta = (g.gy(j, k + 1) - g.gy(j, k - 1)) / (2.0 * g.deta());
  m.J = m.x_xi * m.y_eta - m.x_eta * m.y_xi;
  if (!(m.J > 0.0)) {
    std::ostringstream os;
    os << "nonpositive Jacobian at (j, k) = (" << j << ", " << k << ")";
    throw SolverError(ErrorKind::TangledMesh, os.str(),
                      k * static_cast<Idx>(g.nx()) + j);
  }
  return m;
}

}  // namespace

WeightKind parse_weight_kind(const std::string& name) {
  if (name == "gradient" || name == "w1") return WeightKind::Gradient;
  if (name == "laplacian_h" || name == "w2") return WeightKind::LaplacianH;
  if (name == "constant") return WeightKind::Constant;
  throw SolverError(ErrorKind::InvalidConfig, "unknown weight kind: " + name);
}

const char* to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Gradient: return "gradient";
    case WeightKind::LaplacianH: return "laplacian_h";
    case WeightKind::Constant: return "constant";
  }
  return "?";
}

Field2D laplacian(const Grid2D& g, const Field2D& h) {
  const std::size_t nx = g.nx(), ny = g.ny();
  if (h.nx() != nx || h.ny() != ny) {
    throw SolverError(ErrorKind::ShapeMismatch, "field shape does not match grid");
  }
  const Field2D zero(nx, ny);
  const MetricTerms faces = metric_terms_at(g, zero, zero);
  std::vector<NodalMetric> nm(nx * ny);
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      nm[k * nx + j] = nodal_metric(g, static_cast<Idx>(j), static_cast<Idx>(k));
    }
  }
  auto at = [&](Idx j, Idx k) -> const NodalMetric& {
    const auto pj = periodic_index(j, static_cast<Idx>(nx));
    const auto pk = periodic_index(k, static_cast<Idx>(ny));
    return nm[static_cast<std::size_t>(pk.index) * nx + static_cast<std::size_t>(pj.index)];
  };
  const double dxi = g.dxi(), deta = g.deta();
  Field2D fe(nx, ny), fn(nx, ny);
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const Idx a = static_cast<Idx>(j), b = static_cast<Idx>(k);
      {
        // Face (j+1/2, k).
        const NodalMetric& m0 = at(a, b);
        const NodalMetric& m1 = at(a + 1, b);
        const double h_xi = (h.wrapped(a + 1, b) - h.wrapped(a, b)) / dxi;
        const double h_eta = (h.wrapped(a, b + 1) - h.wrapped(a, b - 1) +
                              h.wrapped(a + 1, b + 1) - h.wrapped(a + 1, b - 1)) /
                             (4.0 * deta);
        const double jxx = faces.xi_x(j, k), jxy = faces.xi_y(j, k);
        const double jex = -0.5 * (m0.y_xi + m1.y_xi);
        const double jey = 0.5 * (m0.x_xi + m1.x_xi);
        const double jf = 0.5 * (m0.J + m1.J);
        const double hx = (jxx * h_xi + jex * h_eta) / jf;
        const double hy = (jxy * h_xi + jey * h_eta) / jf;
        fe(j, k) = jxx * hx + jxy * hy;
      }
      {
        // Face (j, k+1/2).
        const NodalMetric& m0 = at(a, b);
        const NodalMetric& m1 = at(a, b + 1);
        const double h_eta = (h.wrapped(a, b + 1) - h.wrapped(a, b)) / deta;
        const double h_xi = (h.wrapped(a + 1, b) - h.wrapped(a - 1, b) +
                             h.wrapped(a + 1, b + 1) - h.wrapped(a - 1, b + 1)) /
                            (4.0 * dxi);
        const double jex = faces.eta_x(j, k), jey = faces.eta_y(j, k);
        const double jxx = 0.5 * (m0.y_eta + m1.y_eta);
        const double jxy = -0.5 * (m0.x_eta + m1.x_eta);
        const double jf = 0.5 * (m0.J + m1.J);
        const double hx = (jxx * h_xi + jex * h_eta) / jf;
        const double hy = (jxy * h_xi + jey * h_eta) / jf;
        fn(j, k) = jex * hx + jey * hy;
      }
    }
  }
  Field2D out(nx, ny);
  for (std::size_t k = 0; k < ny; ++k) {
    const std::size_t ks = (k + ny - 1) % ny;
    for (std::size_t j = 0; j < nx; ++j) {
      const std::size_t jw = (j + nx - 1) % nx;
      out(j, k) = ((fe(j, k) - fe(jw, k)) / dxi + (fn(j, k) - fn(j, ks)) / deta) /
                  nm[k * nx + j].J;
    }
  }
  return out;
}

Field2D smooth_121(const Field2D& f) {
  const std::size_t nx = f.nx(), ny = f.ny();
  Field2D row(nx, ny), out(nx, ny);
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const Idx a = static_cast<Idx>(j), b = static_cast<Idx>(k);
      row(j, k) = 0.25 * (f.wrapped(a - 1, b) + 2.0 * f(j, k) + f.wrapped(a + 1, b));
    }
  }
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const Idx a = static_cast<Idx>(j), b = static_cast<Idx>(k);
      out(j, k) = 0.25 * (row.wrapped(a, b - 1) + 2.0 * row(j, k) + row.wrapped(a, b + 1));
    }
  }
  return out;
}

namespace {

Field2D raw_weight(const Grid2D& grid, const State2D& state, const WeightSpec& spec);

}  // namespace

Field2D weight_values(const Grid2D& grid, const State2D& state,
                      const WeightSpec& spec) {
  if (spec.smoothing < 0) {
    throw SolverError(ErrorKind::InvalidConfig, "weight smoothing must be >= 0");
  }
  Field2D w = raw_weight(grid, state, spec);
  for (int pass = 0; pass < spec.smoothing; ++pass) w = smooth_121(w);
  return w;
}

namespace {

Field2D raw_weight(const Grid2D& grid, const State2D& state, const WeightSpec& spec) {
  require_consistent(grid, state);
  if (!(spec.alpha >= 0.0)) {
    throw SolverError(ErrorKind::InvalidConfig, "weight alpha must be >= 0");
  }
  const std::size_t nx = grid.nx(), ny = grid.ny();
  Field2D w(nx, ny, 1.0);
  if (spec.kind == WeightKind::Constant) return w;
  if (spec.kind == WeightKind::LaplacianH) {
    const Field2D lap = laplacian(grid, state.h);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double l = lap.flat()[i];
      w.flat()[i] = std::sqrt(1.0 + spec.alpha * l * l);
    }
    return w;
  }
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const Idx a = static_cast<Idx>(j), b = static_cast<Idx>(k);
      const NodalMetric m = nodal_metric(grid, a, b);
      double sum = 0.0;
      for (const Field2D* f : {&state.u, &state.v}) {
        const double f_xi = (f->wrapped(a + 1, b) - f->wrapped(a - 1, b)) / (2.0 * grid.dxi());
        const double f_eta = (f->wrapped(a, b + 1) - f->wrapped(a, b - 1)) / (2.0 * grid.deta());
        const double fx = (m.y_eta * f_xi - m.y_xi * f_eta) / m.J;
        const double fy = (-m.x_eta * f_xi + m.x_xi * f_eta) / m.J;
        sum += fx * fx + fy * fy;
      }
      w(j, k) = std::sqrt(1.0 + spec.alpha * sum);
    }
  }
  return w;
}

}  // namespace

double elliptic_residual(const Grid2D& grid, const Field2D& w) {
  const Coefficients c = coefficients(grid, w);
  return grid_residual(c, grid.x(), grid.y(), grid.lx(), grid.ly());
}

EllipticResult solve_elliptic_grid(const Grid2D& grid, const Field2D& w,
                                   double anchor_x, double anchor_y, double tau,
                                   const EllipticOptions& opt) {
  if (grid.nx() < 3 || grid.ny() < 3) {
    throw SolverError(ErrorKind::InvalidConfig, "grid generator needs at least 3x3 nodes");
  }
  for (double v : w.flat()) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw SolverError(ErrorKind::InvalidConfig, "weights must be positive and finite");
    }
  }
  const kernels::KernelTable& kt = opt.kernels ? *opt.kernels : kernels::active_kernels();
  const Coefficients c = coefficients(grid, w);
  const long max_iter =
      opt.max_iter < 0 ? 50L * static_cast<long>(grid.nx() * grid.ny()) : opt.max_iter;
  Field2D x = grid.x();
  Field2D y = grid.y();
  double r = grid_residual(c, x, y, grid.lx(), grid.ly());
  long sweeps = 0;
  while (r > opt.tol) {
    if (sweeps >= max_iter) {
      std::ostringstream os;
      os << "grid generator: no convergence after " << max_iter
         << " sweeps (residual " << r << ")";
      throw SolverError(ErrorKind::NonConvergence, os.str(), std::nullopt, r);
    }
    for (int colour = 0; colour < 2; ++colour) {
      sweep_colour(kt, c, x, colour, grid.lx(), 0.0);
      sweep_colour(kt, c, y, colour, 0.0, grid.ly());
    }
    ++sweeps;
    // The residual costs as much as a sweep; test it every few sweeps.
    if (sweeps % kCheckEvery != 0 && sweeps < max_iter) continue;
    r = grid_residual(c, x, y, grid.lx(), grid.ly());
    if (std::isnan(r)) {
      throw SolverError(ErrorKind::NonConvergence, "grid generator produced NaN");
    }
  }
  const double sx = tau * anchor_x - mean_difference(x, grid.x());
  const double sy = tau * anchor_y - mean_difference(y, grid.y());
  for (double& v : x.flat()) v += sx;
  for (double& v : y.flat()) v += sy;
  Grid2D out(std::move(x), std::move(y), grid.lx(), grid.ly(), grid.dxi(), grid.deta());
  require_valid(out);
  return {std::move(out), sweeps, r};
}

Adaptive2DResult step_adaptive_2d(const Grid2D& grid, const State2D& state,
                                  double tau, const Adaptive2DOptions& opt) {
  require_consistent(grid, state);
  if (opt.couple_iterations < 0) {
    throw SolverError(ErrorKind::InvalidConfig, "couple_iterations must be >= 0");
  }
  const double au = mean(state.u);
  const double av = mean(state.v);
  EllipticResult mesh =
      solve_elliptic_grid(grid, weight_values(grid, state, opt.weight), au, av, tau, opt.mesh);
  long sweeps = mesh.sweeps;
  Step2DResult step = step_eulerian_trapezoidal(grid, mesh.grid, state, tau, opt.picard);
  for (int it = 0; it < opt.couple_iterations; ++it) {
    const Field2D w = weight_values(step.grid, step.state, opt.weight);
    EllipticResult again = solve_elliptic_grid(step.grid, w, 0.0, 0.0, tau, opt.mesh);
    // Re-anchor relative to the current level rather than the predicted one.
    Field2D x = again.grid.x(), y = again.grid.y();
    const double sx = tau * au - mean_difference(x, grid.x());
    const double sy = tau * av - mean_difference(y, grid.y());
    for (double& v : x.flat()) v += sx;
    for (double& v : y.flat()) v += sy;
    Grid2D hat(std::move(x), std::move(y), grid.lx(), grid.ly(), grid.dxi(), grid.deta());
    sweeps += again.sweeps;
    step = step_eulerian_trapezoidal(grid, hat, state, tau, opt.picard);
  }
  return {std::move(step), sweeps};
}

}  // namespace invswe
