#include "invswe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace invswe {

namespace {

std::vector<double> wide_weights(const Grid1D& grid) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    w[i] = grid.ghost(ii + 1) - grid.ghost(ii - 1);
  }
  return w;
}

std::vector<double> jacobians(const Grid2D& grid) {
  std::vector<double> jac(grid.nx() * grid.ny());
  for (std::size_t k = 0; k < grid.ny(); ++k) {
    for (std::size_t j = 0; j < grid.nx(); ++j) {
      const double v = nodal_jacobian(grid, static_cast<std::ptrdiff_t>(j),
                                      static_cast<std::ptrdiff_t>(k));
      if (!(v > 0.0)) {
        throw SolverError(ErrorKind::TangledMesh,
                          "nonpositive Jacobian in diagnostics",
                          static_cast<std::ptrdiff_t>(k * grid.nx() + j));
      }
      jac[k * grid.nx() + j] = v;
    }
  }
  return jac;
}

// Relative to |reference| unless it vanishes at rounding level against the
// h|u| scale, in which case the scale is the denominator.
double relative_to(double value, double reference, double scale) {
  const double denom = std::abs(reference) > 1e-12 * scale ? std::abs(reference) : scale;
  return (value - reference) / denom;
}

}  // namespace

DiagnosticsRecord conserved_1d(const Grid1D& grid, const State1D& state,
                               double t) {
  require_consistent(grid, state);
  const auto w = wide_weights(grid);
  const std::size_t n = w.size();
  std::vector<double> m(n), p(n), e(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = state.h[i], u = state.u[i];
    m[i] = h * w[i];
    p[i] = h * u * w[i];
    e[i] = (h * u * u + h * h) * w[i];
  }
  return {t, 0.5 * pairwise_sum(m), 0.5 * pairwise_sum(p), 0.0,
          0.25 * pairwise_sum(e)};
}

DiagnosticsRecord conserved_2d(const Grid2D& grid, const State2D& state,
                               double t) {
  require_consistent(grid, state);
  const auto jac = jacobians(grid);
  const std::size_t n = jac.size();
  const auto h = state.h.flat(), u = state.u.flat(), v = state.v.flat();
  std::vector<double> m(n), px(n), py(n), e(n);
  for (std::size_t q = 0; q < n; ++q) {
    m[q] = h[q] * jac[q];
    px[q] = h[q] * u[q] * jac[q];
    py[q] = h[q] * v[q] * jac[q];
    e[q] = (h[q] * (u[q] * u[q] + v[q] * v[q]) + h[q] * h[q]) * jac[q];
  }
  const double cell = grid.dxi() * grid.deta();
  return {t, cell * pairwise_sum(m), cell * pairwise_sum(px),
          cell * pairwise_sum(py), 0.5 * cell * pairwise_sum(e)};
}

double momentum_scale_1d(const Grid1D& grid, const State1D& state) {
  require_consistent(grid, state);
  const auto w = wide_weights(grid);
  std::vector<double> a(w.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = state.h[i] * std::abs(state.u[i]) * w[i];
  }
  return 0.5 * pairwise_sum(a);
}

double momentum_scale_2d(const Grid2D& grid, std::span<const double> h,
                         std::span<const double> velocity) {
  const auto jac = jacobians(grid);
  std::vector<double> a(jac.size());
  for (std::size_t q = 0; q < a.size(); ++q) {
    a[q] = h[q] * std::abs(velocity[q]) * jac[q];
  }
  return grid.dxi() * grid.deta() * pairwise_sum(a);
}

RelativeChange DiagnosticsSeries::relative(std::size_t n) const {
  const auto& r0 = records_.front();
  const auto& r = records_.at(n);
  return {(r.mass - r0.mass) / r0.mass, relative_to(r.px, r0.px, px_scale_),
          relative_to(r.py, r0.py, py_scale_),
          (r.energy - r0.energy) / r0.energy};
}

std::vector<RelativeChange> DiagnosticsSeries::changes() const {
  std::vector<RelativeChange> out;
  for (std::size_t n = 1; n < records_.size(); ++n) out.push_back(relative(n));
  return out;
}

void DiagnosticsSeries::write_csv(std::ostream& os, int precision) const {
  const auto old_precision = os.precision(precision);
  if (two_d_) {
    os << "t,M,Px,Py,H,relM,relPx,relPy,relH\n";
  } else {
    os << "t,M,P,H,relM,relP,relH\n";
  }
  for (std::size_t n = 0; n < records_.size(); ++n) {
    const auto& r = records_[n];
    const auto c = relative(n);
    os << r.t << ',' << r.mass << ',' << r.px << ',';
    if (two_d_) os << r.py << ',';
    os << r.energy << ',' << c.mass << ',' << c.px << ',';
    if (two_d_) os << c.py << ',';
    os << c.energy << '\n';
  }
  os.precision(old_precision);
}

DiagnosticsSeries record_series(const std::vector<TrajectorySample1D>& trajectory) {
  if (trajectory.empty()) {
    throw SolverError(ErrorKind::InvalidConfig, "empty trajectory");
  }
  const auto& first = trajectory.front();
  DiagnosticsSeries series(false, momentum_scale_1d(first.grid, first.state), 0.0);
  for (const auto& s : trajectory) series.add(conserved_1d(s.grid, s.state, s.t));
  return series;
}

}  // namespace invswe
