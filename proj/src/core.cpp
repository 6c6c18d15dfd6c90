#include "invswe/core.hpp"

#include <cmath>
#include <sstream>

namespace invswe {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TangledMesh: return "tangled mesh";
    case ErrorKind::NonPositiveDepth: return "non-positive depth";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::InvalidConfig: return "invalid config";
    case ErrorKind::ShapeMismatch: return "shape mismatch";
  }
  return "unknown";
}

SolverError::SolverError(ErrorKind kind, const std::string& what,
                         std::optional<std::ptrdiff_t> location,
                         double residual)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what),
      kind_(kind),
      location_(location),
      residual_(residual) {}

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

// ---------------------------------------------------------------------------

Grid1D::Grid1D(std::vector<double> x, double length)
    : x_(std::move(x)), length_(length) {
  if (x_.size() < 3) {
    throw SolverError(ErrorKind::ShapeMismatch, "Grid1D needs at least 3 nodes");
  }
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw SolverError(ErrorKind::InvalidConfig,
                      "Grid1D period length must be positive and finite");
  }
}

Grid1D Grid1D::uniform(std::size_t n, double length, double origin) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = origin + length * static_cast<double>(i) / static_cast<double>(n);
  }
  return Grid1D(std::move(x), length);
}

GridReport validate_grid(const Grid1D& grid) {
  GridReport report;
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(grid[i + 1] > grid[i])) report.violations.push_back(i);
  }
  if (!(grid[0] + grid.length() > grid[n - 1])) report.violations.push_back(n - 1);
  return report;
}

void require_consistent(const Grid1D& grid, const State1D& state) {
  if (state.u.size() != grid.size() || state.h.size() != grid.size()) {
    throw SolverError(ErrorKind::ShapeMismatch,
                      "state length does not match grid node count");
  }
}

void require_positive_depth(std::span<const double> h) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !std::isfinite(h[i])) {
      std::ostringstream os;
      os << "h[" << i << "] = " << h[i];
      throw SolverError(ErrorKind::NonPositiveDepth, os.str(),
                        static_cast<std::ptrdiff_t>(i));
    }
  }
}

void require_valid(const Grid1D& grid) {
  const auto report = validate_grid(grid);
  if (!report.valid()) {
    const auto i = report.violations.front();
    std::ostringstream os;
    os << "node ordering violated at i = " << i;
    throw SolverError(ErrorKind::TangledMesh, os.str(),
                      static_cast<std::ptrdiff_t>(i));
  }
}

// ---------------------------------------------------------------------------

Grid2D::Grid2D(Field2D x, Field2D y, double lx, double ly, double dxi,
               double deta)
    : x_(std::move(x)), y_(std::move(y)), lx_(lx), ly_(ly), dxi_(dxi),
      deta_(deta) {
  if (x_.nx() != y_.nx() || x_.ny() != y_.ny()) {
    throw SolverError(ErrorKind::ShapeMismatch, "x and y lattices differ in shape");
  }
  if (x_.nx() < 3 || x_.ny() < 3) {
    throw SolverError(ErrorKind::ShapeMismatch, "Grid2D needs at least 3x3 nodes");
  }
  if (!(lx_ > 0.0) || !(ly_ > 0.0) || !(dxi_ > 0.0) || !(deta_ > 0.0)) {
    throw SolverError(ErrorKind::InvalidConfig,
                      "Grid2D lengths and computational steps must be positive");
  }
}

Grid2D Grid2D::uniform(std::size_t nx, std::size_t ny, double lx, double ly,
                       double ox, double oy) {
  Field2D x(nx, ny), y(nx, ny);
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      x(j, k) = ox + lx * static_cast<double>(j) / static_cast<double>(nx);
      y(j, k) = oy + ly * static_cast<double>(k) / static_cast<double>(ny);
    }
  }
  return Grid2D(std::move(x), std::move(y), lx, ly,
                1.0 / static_cast<double>(nx), 1.0 / static_cast<double>(ny));
}

double nodal_jacobian(const Grid2D& g, std::ptrdiff_t j, std::ptrdiff_t k) {
  const double x_xi = g.gx(j + 1, k) - g.gx(j - 1, k);
  const double y_eta = g.gy(j, k + 1) - g.gy(j, k - 1);
  const double x_eta = g.gx(j, k + 1) - g.gx(j, k - 1);
  const double y_xi = g.gy(j + 1, k) - g.gy(j - 1, k);
  return (x_xi * y_eta - x_eta * y_xi) / (4.0 * g.dxi() * g.deta());
}

GridReport validate_grid(const Grid2D& grid) {
  GridReport report;
  const auto nx = static_cast<std::ptrdiff_t>(grid.nx());
  const auto ny = static_cast<std::ptrdiff_t>(grid.ny());
  for (std::ptrdiff_t k = 0; k < ny; ++k) {
    for (std::ptrdiff_t j = 0; j < nx; ++j) {
      if (!(nodal_jacobian(grid, j, k) > 0.0)) {
        report.violations.push_back(static_cast<std::size_t>(k * nx + j));
      }
    }
  }
  return report;
}

void require_consistent(const Grid2D& grid, const State2D& state) {
  for (const Field2D* f : {&state.u, &state.v, &state.h}) {
    if (f->nx() != grid.nx() || f->ny() != grid.ny()) {
      throw SolverError(ErrorKind::ShapeMismatch,
                        "state field shape does not match grid");
    }
  }
}

void require_valid(const Grid2D& grid) {
  const auto report = validate_grid(grid);
  if (!report.valid()) {
    const auto idx = report.violations.front();
    std::ostringstream os;
    os << "nonpositive Jacobian at (j, k) = (" << idx % grid.nx() << ", "
       << idx / grid.nx() << ")";
    throw SolverError(ErrorKind::TangledMesh, os.str(),
                      static_cast<std::ptrdiff_t>(idx));
  }
}

}  // namespace invswe
