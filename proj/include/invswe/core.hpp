// Shared data model: periodic moving grids, collocated states and the
// error type every solver reports through.
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace invswe {

enum class ErrorKind {
  TangledMesh,
  NonPositiveDepth,
  NonConvergence,
  InvalidConfig,
  ShapeMismatch,
};

const char* to_string(ErrorKind kind);

/// Every solver failure. `location()` is the first offending node (or cell)
/// index when one exists; `residual()` carries the last residual of a failed
/// iterative solve.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorKind kind, const std::string& what,
              std::optional<std::ptrdiff_t> location = std::nullopt,
              double residual = 0.0);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::ptrdiff_t> location() const noexcept { return location_; }
  double residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  std::optional<std::ptrdiff_t> location_;
  double residual_;
};

struct PeriodicIndex {
  std::ptrdiff_t index;  // in [0, n)
  std::ptrdiff_t wraps;  // floor(i / n)
};

constexpr PeriodicIndex periodic_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  std::ptrdiff_t q = i / n;
  std::ptrdiff_t r = i % n;
  if (r < 0) {
    r += n;
    --q;
  }
  return {r, q};
}

/// Cascade summation; the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

// ---------------------------------------------------------------------------
// 1D
// ---------------------------------------------------------------------------

/// One period of node positions plus the period length. Positions outside
/// [0, N) are reached through ghost(), never stored.
class Grid1D {
 public:
  Grid1D(std::vector<double> x, double length);

  static Grid1D uniform(std::size_t n, double length, double origin = 0.0);

  std::size_t size() const noexcept { return x_.size(); }
  double length() const noexcept { return length_; }
  std::span<const double> x() const noexcept { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }

  /// x[i mod N] + floor(i/N) * L
  double ghost(std::ptrdiff_t i) const {
    const auto p = periodic_index(i, static_cast<std::ptrdiff_t>(x_.size()));
    return x_[static_cast<std::size_t>(p.index)] +
           static_cast<double>(p.wraps) * length_;
  }

 private:
  std::vector<double> x_;
  double length_;
};

inline double ghost_position_1d(const Grid1D& grid, std::ptrdiff_t i) {
  return grid.ghost(i);
}

struct State1D {
  std::vector<double> u;
  std::vector<double> h;

  std::size_t size() const noexcept { return u.size(); }

  double u_at(std::ptrdiff_t i) const { return u[wrap(i)]; }
  double h_at(std::ptrdiff_t i) const { return h[wrap(i)]; }

 private:
  std::size_t wrap(std::ptrdiff_t i) const {
    return static_cast<std::size_t>(
        periodic_index(i, static_cast<std::ptrdiff_t>(u.size())).index);
  }
};

struct StepSpec {
  double tau;
  double t;
};

/// Empty `violations` means the grid is valid. For 1D these are indices i
/// with x[i+1] <= x[i] (N-1 flags the wrap x[0] + L <= x[N-1]); for 2D they
/// are flattened node indices with nonpositive Jacobian.
struct GridReport {
  std::vector<std::size_t> violations;
  bool valid() const noexcept { return violations.empty(); }
};

GridReport validate_grid(const Grid1D& grid);

void require_consistent(const Grid1D& grid, const State1D& state);
/// Throws NonPositiveDepth at the first h <= 0 (or non-finite value).
void require_positive_depth(std::span<const double> h);
/// Throws TangledMesh at the first violation reported by validate_grid.
void require_valid(const Grid1D& grid);

// ---------------------------------------------------------------------------
// 2D
// ---------------------------------------------------------------------------

/// Doubly periodic nodal field, stored row-major with j fastest
/// (flat index k * nx + j).
class Field2D {
 public:
  Field2D() = default;
  Field2D(std::size_t nx, std::size_t ny, double value = 0.0)
      : nx_(nx), ny_(ny), data_(nx * ny, value) {}

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t j, std::size_t k) { return data_[k * nx_ + j]; }
  double operator()(std::size_t j, std::size_t k) const {
    return data_[k * nx_ + j];
  }
  double wrapped(std::ptrdiff_t j, std::ptrdiff_t k) const {
    const auto pj = periodic_index(j, static_cast<std::ptrdiff_t>(nx_));
    const auto pk = periodic_index(k, static_cast<std::ptrdiff_t>(ny_));
    return data_[static_cast<std::size_t>(pk.index) * nx_ +
                 static_cast<std::size_t>(pj.index)];
  }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }
  double* row(std::size_t k) { return data_.data() + k * nx_; }
  const double* row(std::size_t k) const { return data_.data() + k * nx_; }

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> data_;
};

/// Node lattice of the moving 2D mesh. x gains Lx per wrap in j, y gains Ly
/// per wrap in k; dxi/deta are the computational-coordinate steps.
class Grid2D {
 public:
  Grid2D(Field2D x, Field2D y, double lx, double ly, double dxi, double deta);

  /// x = lx*j/nx + ox, y = ly*k/ny + oy with dxi = 1/nx, deta = 1/ny.
  static Grid2D uniform(std::size_t nx, std::size_t ny, double lx, double ly,
                        double ox = 0.0, double oy = 0.0);

  std::size_t nx() const noexcept { return x_.nx(); }
  std::size_t ny() const noexcept { return x_.ny(); }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  double dxi() const noexcept { return dxi_; }
  double deta() const noexcept { return deta_; }
  const Field2D& x() const noexcept { return x_; }
  const Field2D& y() const noexcept { return y_; }

  double gx(std::ptrdiff_t j, std::ptrdiff_t k) const {
    const auto pj = periodic_index(j, static_cast<std::ptrdiff_t>(nx()));
    const auto pk = periodic_index(k, static_cast<std::ptrdiff_t>(ny()));
    return x_(static_cast<std::size_t>(pj.index),
              static_cast<std::size_t>(pk.index)) +
           static_cast<double>(pj.wraps) * lx_;
  }
  double gy(std::ptrdiff_t j, std::ptrdiff_t k) const {
    const auto pj = periodic_index(j, static_cast<std::ptrdiff_t>(nx()));
    const auto pk = periodic_index(k, static_cast<std::ptrdiff_t>(ny()));
    return y_(static_cast<std::size_t>(pj.index),
              static_cast<std::size_t>(pk.index)) +
           static_cast<double>(pk.wraps) * ly_;
  }

 private:
  Field2D x_;
  Field2D y_;
  double lx_;
  double ly_;
  double dxi_;
  double deta_;
};

struct State2D {
  Field2D u;
  Field2D v;
  Field2D h;
};

/// Outcome of one 2D time step. `iterations` is 0 for explicit steps.
struct Step2DResult {
  Grid2D grid;
  State2D state;
  int iterations = 0;
  double residual = 0.0;
};

/// Central-difference Jacobian x_xi*y_eta - x_eta*y_xi at node (j, k).
double nodal_jacobian(const Grid2D& grid, std::ptrdiff_t j, std::ptrdiff_t k);

GridReport validate_grid(const Grid2D& grid);

void require_consistent(const Grid2D& grid, const State2D& state);
void require_valid(const Grid2D& grid);

}  // namespace invswe
