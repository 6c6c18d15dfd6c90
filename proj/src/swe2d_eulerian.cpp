#include "invswe/swe2d_eulerian.hpp"

#include <sstream>
#include <vector>


namespace invswe {

namespace {

using Idx = std::ptrdiff_t;

void same_shape(const Grid2D& a, const Grid2D& b) {
  if (a.nx() != b.nx() || a.ny() != b.ny()) {
    throw SolverError(ErrorKind::ShapeMismatch, "grid shapes differ");
  }
}

// Flux of one component through every face of one family. `a` and `b` are
// the two nodal arrays on either side, handed in row by row so the kernel
// sees contiguous data.
void face_fluxes(const kernels::KernelTable& kt, const Field2D& mt,
                 const Field2D& mx, const Field2D& my, const Field2D& ft,
                 const Field2D& fx, const Field2D& fy, bool xi_faces,
                 Field2D& out) {
  const std::size_t nx = ft.nx(), ny = ft.ny();
  std::vector<double> pt(nx + 1), px(nx + 1), py(nx + 1);
  for (std::size_t k = 0; k < ny; ++k) {
    const double* ta = ft.row(k);
    const double* xa = fx.row(k);
    const double* ya = fy.row(k);
    const double *tb, *xb, *yb;
    if (xi_faces) {
      // Neighbour j+1, with the seam value appended.
      std::copy_n(ta, nx, pt.begin());
      std::copy_n(xa, nx, px.begin());
      std::copy_n(ya, nx, py.begin());
      pt[nx] = ta[0];
      px[nx] = xa[0];
      py[nx] = ya[0];
      tb = pt.data() + 1;
      xb = px.data() + 1;
      yb = py.data() + 1;
    } else {
      const std::size_t kn = (k + 1) % ny;
      tb = ft.row(kn);
      xb = fx.row(kn);
      yb = fy.row(kn);
    }
    kt.face_flux_row(nx, mt.row(k), mx.row(k), my.row(k), ta, tb, xa, xb, ya,
                     yb, out.row(k));
  }
}

}  // namespace

MetricTerms metric_terms_at(const Grid2D& g, const Field2D& xdot,
                            const Field2D& ydot) {
  const std::size_t nx = g.nx(), ny = g.ny();
  if (xdot.nx() != nx || xdot.ny() != ny || ydot.nx() != nx || ydot.ny() != ny) {
    throw SolverError(ErrorKind::ShapeMismatch, "mesh velocity shape mismatch");
  }
  MetricTerms m;
  m.dxi = g.dxi();
  m.deta = g.deta();
  for (Field2D* f : {&m.J, &m.xi_x, &m.xi_y, &m.xi_t, &m.eta_x, &m.eta_y, &m.eta_t}) {
    *f = Field2D(nx, ny);
  }
  const double cxi = 1.0 / (4.0 * g.deta());
  const double ceta = 1.0 / (4.0 * g.dxi());
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const Idx a = static_cast<Idx>(j), b = static_cast<Idx>(k);
      const double jac = nodal_jacobian(g, a, b);
      if (!(jac > 0.0)) {
        std::ostringstream os;
        os << "nonpositive Jacobian at (j, k) = (" << j << ", " << k << ")";
        throw SolverError(ErrorKind::TangledMesh, os.str(),
                          static_cast<Idx>(k * nx + j));
      }
      m.J(j, k) = jac;

      const double xix = cxi * (g.gy(a, b + 1) - g.gy(a, b - 1) +
                                g.gy(a + 1, b + 1) - g.gy(a + 1, b - 1));
      const double xiy = -cxi * (g.gx(a, b + 1) - g.gx(a, b - 1) +
                                 g.gx(a + 1, b + 1) - g.gx(a + 1, b - 1));
      m.xi_x(j, k) = xix;
      m.xi_y(j, k) = xiy;
      const double xd = 0.5 * (xdot(j, k) + xdot.wrapped(a + 1, b));
      const double yd = 0.5 * (ydot(j, k) + ydot.wrapped(a + 1, b));
      m.xi_t(j, k) = -xix * xd - xiy * yd;

      const double etx = -ceta * (g.gy(a + 1, b) - g.gy(a - 1, b) +
                                  g.gy(a + 1, b + 1) - g.gy(a - 1, b + 1));
      const double ety = ceta * (g.gx(a + 1, b) - g.gx(a - 1, b) +
                                 g.gx(a + 1, b + 1) - g.gx(a - 1, b + 1));
      m.eta_x(j, k) = etx;
      m.eta_y(j, k) = ety;
      const double xe = 0.5 * (xdot(j, k) + xdot.wrapped(a, b + 1));
      const double ye = 0.5 * (ydot(j, k) + ydot.wrapped(a, b + 1));
      m.eta_t(j, k) = -etx * xe - ety * ye;
    }
  }
  return m;
}

MetricPair metric_terms(const Grid2D& grid, const Grid2D& hat_grid, double tau) {
  same_shape(grid, hat_grid);
  if (!(tau > 0.0)) {
    throw SolverError(ErrorKind::InvalidConfig, "time step must be positive");
  }
  const std::size_t nx = grid.nx(), ny = grid.ny();
  Field2D xd(nx, ny), yd(nx, ny);
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      xd(j, k) = (hat_grid.x()(j, k) - grid.x()(j, k)) / tau;
      yd(j, k) = (hat_grid.y()(j, k) - grid.y()(j, k)) / tau;
    }
  }
  MetricTerms now = metric_terms_at(grid, xd, yd);
  MetricTerms next = metric_terms_at(hat_grid, xd, yd);
  return {std::move(now), std::move(next), std::move(xd), std::move(yd)};
}

FluxVectors flux_vectors(const State2D& s) {
  const std::size_t nx = s.h.nx(), ny = s.h.ny();
  FluxVectors f;
  for (int c = 0; c < 3; ++c) {
    f.t[c] = Field2D(nx, ny);
    f.x[c] = Field2D(nx, ny);
    f.y[c] = Field2D(nx, ny);
  }
  const auto u = s.u.flat(), v = s.v.flat(), h = s.h.flat();
  for (std::size_t i = 0; i < s.h.size(); ++i) {
    const double hu = h[i] * u[i], hv = h[i] * v[i];
    const double p = 0.5 * h[i] * h[i];
    f.t[0].flat()[i] = h[i];
    f.t[1].flat()[i] = hu;
    f.t[2].flat()[i] = hv;
    f.x[0].flat()[i] = hu;
    f.x[1].flat()[i] = hu * u[i] + p;
    f.x[2].flat()[i] = hu * v[i];
    f.y[0].flat()[i] = hv;
    f.y[1].flat()[i] = hv * u[i];
    f.y[2].flat()[i] = hv * v[i] + p;
  }
  return f;
}

FluxDivergence assemble_UV(const MetricTerms& m, const FluxVectors& f,
                           const kernels::KernelTable* table) {
  const std::size_t nx = m.J.nx(), ny = m.J.ny();
  if (f.t[0].nx() != nx || f.t[0].ny() != ny) {
    throw SolverError(ErrorKind::ShapeMismatch, "flux shape does not match metric");
  }
  const kernels::KernelTable& kt = table ? *table : kernels::active_kernels();
  FluxDivergence d;
  Field2D fe(nx, ny), fn(nx, ny);
  const double sx = 1.0 / (2.0 * m.dxi);
  const double sy = 1.0 / (2.0 * m.deta);
  for (int c = 0; c < 3; ++c) {
    face_fluxes(kt, m.xi_t, m.xi_x, m.xi_y, f.t[c], f.x[c], f.y[c], true, fe);
    face_fluxes(kt, m.eta_t, m.eta_x, m.eta_y, f.t[c], f.x[c], f.y[c], false, fn);
    d.U[c] = Field2D(nx, ny);
    d.V[c] = Field2D(nx, ny);
    for (std::size_t k = 0; k < ny; ++k) {
      const std::size_t kp = (k + ny - 1) % ny;
      for (std::size_t j = 0; j < nx; ++j) {
        const std::size_t jp = (j + nx - 1) % nx;
        d.U[c](j, k) = sx * (fe(j, k) - fe(jp, k));
        d.V[c](j, k) = sy * (fn(j, k) - fn(j, kp));
      }
    }
  }
  return d;
}

std::array<Field2D, 3> eulerian_residual(const Grid2D& grid,
                                         const Grid2D& hat_grid,
                                         const State2D& state,
                                         const State2D& hat_state, double tau) {
  require_consistent(grid, state);
  require_consistent(hat_grid, hat_state);
  const MetricPair mp = metric_terms(grid, hat_grid, tau);
  const FluxVectors f = flux_vectors(state);
  const FluxVectors fh = flux_vectors(hat_state);
  const FluxDivergence d = assemble_UV(mp.now, f);
  const FluxDivergence dh = assemble_UV(mp.next, fh);
  std::array<Field2D, 3> r;
  const std::size_t n = state.h.size();
  for (int c = 0; c < 3; ++c) {
    r[c] = Field2D(grid.nx(), grid.ny());
    for (std::size_t i = 0; i < n; ++i) {
      r[c].flat()[i] =
          (mp.next.J.flat()[i] * fh.t[c].flat()[i] - mp.now.J.flat()[i] * f.t[c].flat()[i]) / tau +
          0.5 * (d.U[c].flat()[i] + dh.U[c].flat()[i]) +
          0.5 * (d.V[c].flat()[i] + dh.V[c].flat()[i]);
    }
  }
  return r;
}

Step2DResult step_eulerian_trapezoidal(const Grid2D& grid,
                                       const Grid2D& hat_grid,
                                       const State2D& state, double tau,
                                       const PicardOptions& opt) {
  require_consistent(grid, state);
  require_positive_depth(state.h.flat());
  const MetricPair mp = metric_terms(grid, hat_grid, tau);
  const std::size_t nx = grid.nx(), ny = grid.ny(), n = nx * ny;
  const FluxVectors f = flux_vectors(state);
  const FluxDivergence d = assemble_UV(mp.now, f);

  // Explicit half of the balance: J F^t - tau/2 (U + V).
  std::vector<double> base(3 * n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      base[c * n + i] = mp.now.J.flat()[i] * f.t[c].flat()[i] -
                        0.5 * tau * (d.U[c].flat()[i] + d.V[c].flat()[i]);
    }
  }

  std::vector<double> z(3 * n);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      z[c * n + i] = f.t[c].flat()[i] * mp.now.J.flat()[i] / mp.next.J.flat()[i];
    }
  }

  State2D hat{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
  auto to_state = [&](const std::vector<double>& zz) {
    for (std::size_t i = 0; i < n; ++i) {
      const double h = zz[i];
      if (!(h > 0.0)) {
        throw SolverError(ErrorKind::NonPositiveDepth,
                          "nonpositive depth in Eulerian step",
                          static_cast<std::ptrdiff_t>(i));
      }
      hat.h.flat()[i] = h;
      hat.u.flat()[i] = zz[n + i] / h;
      hat.v.flat()[i] = zz[2 * n + i] / h;
    }
  };
  auto map = [&](const std::vector<double>& zz, std::vector<double>& out) {
    to_state(zz);
    const FluxDivergence dh = assemble_UV(mp.next, flux_vectors(hat));
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        out[c * n + i] = (base[c * n + i] - 0.5 * tau * (dh.U[c].flat()[i] +
                                                          dh.V[c].flat()[i])) /
                         mp.next.J.flat()[i];
      }
    }
  };
  const PicardOutcome res = picard_solve(z, map, opt, "Eulerian step");
  to_state(z);
  return {hat_grid, std::move(hat), res.iterations, res.residual};
}

}  // namespace invswe
