// Shared fixtures for the unit and acceptance tests.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "invswe/core.hpp"

namespace testing_support {

using invswe::Field2D;
using invswe::Grid1D;
using invswe::Grid2D;
using invswe::State1D;
using invswe::State2D;

inline constexpr double kA = 0.4;
inline constexpr double kPhi0 = std::numbers::pi / 6.0;
inline constexpr double kH0 = 10.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Grid1D fig2_grid(std::size_t n = 51) { return Grid1D::uniform(n, kTwoPi); }

inline State1D fig2_state(const Grid1D& g) {
  State1D s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    s.u.push_back(kA * std::sin(g[i]));
    s.h.push_back(kH0 + kA * std::sin(g[i] + kPhi0));
  }
  return s;
}

/// Valid periodic grid with jittered spacings and a smooth random state.
struct RandomCase1D {
  Grid1D grid;
  State1D state;
};

inline RandomCase1D random_case_1d(std::mt19937_64& rng, std::size_t n,
                                   double length = kTwoPi) {
  std::uniform_real_distribution<double> jitter(0.4, 1.6);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> gaps(n);
  double total = 0.0;
  for (auto& g : gaps) total += (g = jitter(rng));
  std::vector<double> x(n);
  double pos = unit(rng);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pos;
    pos += gaps[i] * length / total;
  }
  Grid1D grid(std::move(x), length);
  State1D s;
  for (std::size_t i = 0; i < n; ++i) {
    s.u.push_back(0.5 * unit(rng));
    s.h.push_back(5.0 + unit(rng));
  }
  return {std::move(grid), std::move(s)};
}

inline State2D fig4_state(const Grid2D& g) {
  const std::size_t nx = g.nx(), ny = g.ny();
  State2D s{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const double x = g.x()(j, k), y = g.y()(j, k);
      s.u(j, k) = kA * std::sin(x + kPhi0) * std::sin(y);
      s.v(j, k) = kA * std::sin(x) * std::sin(y);
      s.h(j, k) = kH0 + kA * std::cos(x + kPhi0) * std::cos(y);
    }
  }
  return s;
}

inline State2D constant_state_2d(std::size_t nx, std::size_t ny, double u,
                                 double v, double h) {
  return {Field2D(nx, ny, u), Field2D(nx, ny, v), Field2D(nx, ny, h)};
}

/// Uniform lattice with every node displaced by up to `amp` cell widths.
inline Grid2D jittered_grid_2d(std::mt19937_64& rng, std::size_t nx,
                               std::size_t ny, double amp,
                               double length = kTwoPi) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Grid2D u = Grid2D::uniform(nx, ny, length, length);
  Field2D x = u.x(), y = u.y();
  for (double& v : x.flat()) v += amp * unit(rng) * length / static_cast<double>(nx);
  for (double& v : y.flat()) v += amp * unit(rng) * length / static_cast<double>(ny);
  return Grid2D(std::move(x), std::move(y), length, length, u.dxi(), u.deta());
}

inline State2D random_state_2d(std::mt19937_64& rng, std::size_t nx,
                               std::size_t ny) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  State2D s{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
  for (double& v : s.u.flat()) v = 0.5 * unit(rng);
  for (double& v : s.v.flat()) v = 0.5 * unit(rng);
  for (double& v : s.h.flat()) v = 5.0 + unit(rng);
  return s;
}

/// `grid` moved by tau times a random nodal velocity of size up to `speed`.
inline Grid2D moved_grid_2d(std::mt19937_64& rng, const Grid2D& grid,
                            double tau, double speed) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Field2D x = grid.x(), y = grid.y();
  for (double& v : x.flat()) v += tau * speed * unit(rng);
  for (double& v : y.flat()) v += tau * speed * unit(rng);
  return Grid2D(std::move(x), std::move(y), grid.lx(), grid.ly(), grid.dxi(),
                grid.deta());
}

inline double max_abs_diff(const Field2D& a, const Field2D& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a.flat()[i] - b.flat()[i]));
  }
  return d;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testing_support
