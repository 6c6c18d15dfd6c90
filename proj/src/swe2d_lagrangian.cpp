#include "invswe/swe2d_lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace invswe {

namespace {

// Convex polygon with room for every clip the Sibson construction makes.
struct Polygon {
  static constexpr int kMax = 48;
  int n = 0;
  std::array<Point2, kMax> p;
};

// Keeps the part of `poly` where nx*x + ny*y <= d.
void clip(Polygon& poly, double nx, double ny, double d) {
  bool all_inside = true;
  std::array<double, Polygon::kMax> s;
  for (int i = 0; i < poly.n; ++i) {
    s[i] = nx * poly.p[i].x + ny * poly.p[i].y - d;
    if (s[i] > 0.0) all_inside = false;
  }
  if (all_inside) return;
  std::array<Point2, Polygon::kMax> out;
  int m = 0;
  for (int i = 0; i < poly.n; ++i) {
    const int k = i + 1 == poly.n ? 0 : i + 1;
    const bool in_i = s[i] <= 0.0;
    const bool in_k = s[k] <= 0.0;
    if (in_i) out[m++] = poly.p[i];
    if (in_i != in_k) {
      const double t = s[i] / (s[i] - s[k]);
      out[m++] = {poly.p[i].x + t * (poly.p[k].x - poly.p[i].x),
                  poly.p[i].y + t * (poly.p[k].y - poly.p[i].y)};
    }
    if (m > Polygon::kMax - 2) {
      throw SolverError(ErrorKind::TangledMesh,
                        "natural-neighbour cell has too many vertices");
    }
  }
  std::copy_n(out.begin(), m, poly.p.begin());
  poly.n = m;
}

double area(const Polygon& poly) {
  double a = 0.0;
  for (int i = 0; i < poly.n; ++i) {
    const int k = (i + 1) % poly.n;
    a += poly.p[i].x * poly.p[k].y - poly.p[k].x * poly.p[i].y;
  }
  return 0.5 * a;
}

double norm2(Point2 p) { return p.x * p.x + p.y * p.y; }

// Half-plane of points at least as close to a as to c: q.(c-a) <= (|c|^2-|a|^2)/2.
void clip_bisector(Polygon& poly, Point2 a, Point2 c) {
  clip(poly, c.x - a.x, c.y - a.y, 0.5 * (norm2(c) - norm2(a)));
}

Point2 corner_at(const CornerField& c, const Grid2D& grid, std::ptrdiff_t a,
                 std::ptrdiff_t b) {
  const auto pa = periodic_index(a, static_cast<std::ptrdiff_t>(grid.nx()));
  const auto pb = periodic_index(b, static_cast<std::ptrdiff_t>(grid.ny()));
  const auto ja = static_cast<std::size_t>(pa.index);
  const auto kb = static_cast<std::size_t>(pb.index);
  return {c.x(ja, kb) + static_cast<double>(pa.wraps) * grid.lx(),
          c.y(ja, kb) + static_cast<double>(pb.wraps) * grid.ly()};
}

struct CornerSample {
  double u, v, h;
};

CornerSample corner_value(const CornerField& c, std::ptrdiff_t a,
                          std::ptrdiff_t b) {
  return {c.u.wrapped(a, b), c.v.wrapped(a, b), c.h.wrapped(a, b)};
}

std::string cell_name(std::size_t j, std::size_t k) {
  std::ostringstream os;
  os << "(j, k) = (" << j << ", " << k << ")";
  return os.str();
}

void check_inputs(const Grid2D& grid, const State2D& state, double tau) {
  require_consistent(grid, state);
  if (!(tau > 0.0)) {
    throw SolverError(ErrorKind::InvalidConfig, "time step must be positive");
  }
  require_valid(grid);
  require_positive_depth(state.h.flat());
}

void finish(const Grid2D& grid, const State2D& state) {
  require_valid(grid);
  require_positive_depth(state.h.flat());
}

std::vector<CellSums> all_sums(const Grid2D& grid, const CornerField& corners) {
  std::vector<CellSums> sums(grid.nx() * grid.ny());
  for (std::size_t k = 0; k < grid.ny(); ++k) {
    for (std::size_t j = 0; j < grid.nx(); ++j) {
      const CellSums s = cell_sums(grid, corners, j, k);
      if (!(s.area > 0.0)) {
        throw SolverError(ErrorKind::TangledMesh,
                          "nonpositive cell area at " + cell_name(j, k),
                          static_cast<std::ptrdiff_t>(k * grid.nx() + j));
      }
      sums[k * grid.nx() + j] = s;
    }
  }
  return sums;
}

}  // namespace

double signed_polygon_area(const std::array<Point2, 4>& c) {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const int k = (i + 1) % 4;
    a += c[i].x * c[k].y - c[k].x * c[i].y;
  }
  return 0.5 * a;
}

double polygon_area(const std::array<Point2, 4>& corners) {
  const double a = signed_polygon_area(corners);
  if (!(a > 0.0)) {
    throw SolverError(ErrorKind::TangledMesh, "nonpositive polygon area");
  }
  return a;
}

InterpolationWeights corner_weights(const std::array<Point2, 4>& centers,
                                    Point2 corner,
                                    std::span<const Point2> neighborhood) {
  // Work relative to the corner so the result depends on relative geometry
  // only.
  std::array<Point2, 4> a;
  double reach = 0.0;
  for (int m = 0; m < 4; ++m) {
    a[m] = {centers[m].x - corner.x, centers[m].y - corner.y};
    reach = std::max(reach, std::sqrt(norm2(a[m])));
  }
  if (!(reach > 0.0) || !std::isfinite(reach)) {
    throw SolverError(ErrorKind::TangledMesh, "degenerate corner stencil");
  }
  const double tiny = 1e-14 * reach;

  InterpolationWeights out;
  for (int m = 0; m < 4; ++m) {
    if (std::sqrt(norm2(a[m])) <= tiny) {
      out.weights[m] = 1.0;
      return out;
    }
  }

  thread_local std::vector<Point2> others;
  others.clear();
  for (const Point2& p : neighborhood) {
    const Point2 q{p.x - corner.x, p.y - corner.y};
    bool duplicate = false;
    for (const Point2& am : a) {
      if (std::hypot(q.x - am.x, q.y - am.y) <= tiny) duplicate = true;
    }
    if (!duplicate) others.push_back(q);
  }

  const double box = 64.0 * reach;
  Polygon cell;
  cell.n = 4;
  cell.p[0] = {-box, -box};
  cell.p[1] = {box, -box};
  cell.p[2] = {box, box};
  cell.p[3] = {-box, box};
  const Point2 origin{0.0, 0.0};
  for (const Point2& am : a) clip_bisector(cell, origin, am);
  for (const Point2& c : others) clip_bisector(cell, origin, c);
  for (int i = 0; i < cell.n; ++i) {
    if (std::max(std::abs(cell.p[i].x), std::abs(cell.p[i].y)) >= 0.5 * box) {
      throw SolverError(ErrorKind::TangledMesh,
                        "natural-neighbour cell of a corner is unbounded");
    }
  }
  out.cell_area = area(cell);

  double total = 0.0;
  for (int m = 0; m < 4; ++m) {
    Polygon part;
    part.n = cell.n;
    std::copy_n(cell.p.begin(), cell.n, part.p.begin());
    for (int q = 0; q < 4 && part.n > 0; ++q) {
      if (q != m) clip_bisector(part, a[m], a[q]);
    }
    for (std::size_t q = 0; q < others.size() && part.n > 0; ++q) {
      clip_bisector(part, a[m], others[q]);
    }
    out.stolen[m] = part.n >= 3 ? std::max(area(part), 0.0) : 0.0;
    total += out.stolen[m];
  }
  if (!(total > 0.0)) {
    throw SolverError(ErrorKind::TangledMesh,
                      "corner cell takes no area from its adjacent centers");
  }
  for (int m = 0; m < 4; ++m) out.weights[m] = out.stolen[m] / total;
  return out;
}

CornerInterp parse_corner_interp(const std::string& name) {
  if (name == "sibson") return CornerInterp::Sibson;
  if (name == "mean") return CornerInterp::Mean;
  throw SolverError(ErrorKind::InvalidConfig, "unknown interpolation: " + name);
}

const char* to_string(CornerInterp mode) {
  return mode == CornerInterp::Sibson ? "sibson" : "mean";
}

Point2 corner_position(const Grid2D& g, std::ptrdiff_t j, std::ptrdiff_t k) {
  return {0.25 * (g.gx(j, k) + g.gx(j + 1, k) + g.gx(j, k + 1) + g.gx(j + 1, k + 1)),
          0.25 * (g.gy(j, k) + g.gy(j + 1, k) + g.gy(j, k + 1) + g.gy(j + 1, k + 1))};
}

CornerField interpolate_corners(const Grid2D& grid, const State2D& state,
                                CornerInterp mode) {
  require_consistent(grid, state);
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  CornerField out{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny),
                  Field2D(nx, ny), Field2D(nx, ny)};
  std::vector<Point2> hood;
  hood.reserve(36);
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const auto jj = static_cast<std::ptrdiff_t>(j);
      const auto kk = static_cast<std::ptrdiff_t>(k);
      const Point2 p = corner_position(grid, jj, kk);
      out.x(j, k) = p.x;
      out.y(j, k) = p.y;

      const std::array<std::array<std::ptrdiff_t, 2>, 4> adj{
          {{jj, kk}, {jj + 1, kk}, {jj, kk + 1}, {jj + 1, kk + 1}}};
      std::array<double, 4> w{0.25, 0.25, 0.25, 0.25};
      if (mode == CornerInterp::Sibson) {
        std::array<Point2, 4> centers;
        for (int m = 0; m < 4; ++m) {
          centers[m] = {grid.gx(adj[m][0], adj[m][1]), grid.gy(adj[m][0], adj[m][1])};
        }
        hood.clear();
        for (std::ptrdiff_t b = kk - 2; b <= kk + 3; ++b) {
          for (std::ptrdiff_t a = jj - 2; a <= jj + 3; ++a) {
            const bool adjacent = (a == jj || a == jj + 1) && (b == kk || b == kk + 1);
            if (!adjacent) hood.push_back({grid.gx(a, b), grid.gy(a, b)});
          }
        }
        try {
          w = corner_weights(centers, p, hood).weights;
        } catch (const SolverError& e) {
          throw SolverError(e.kind(),
                            std::string(e.what()) + " at corner " + cell_name(j, k),
                            static_cast<std::ptrdiff_t>(k * nx + j));
        }
      }
      double u = 0.0, v = 0.0, h = 0.0;
      for (int m = 0; m < 4; ++m) {
        u += w[m] * state.u.wrapped(adj[m][0], adj[m][1]);
        v += w[m] * state.v.wrapped(adj[m][0], adj[m][1]);
        h += w[m] * state.h.wrapped(adj[m][0], adj[m][1]);
      }
      out.u(j, k) = u;
      out.v(j, k) = v;
      out.h(j, k) = h;
    }
  }
  return out;
}

std::array<Point2, 4> cell_corners(const Grid2D& grid, std::ptrdiff_t j,
                                   std::ptrdiff_t k) {
  return {corner_position(grid, j - 1, k - 1), corner_position(grid, j, k - 1),
          corner_position(grid, j, k), corner_position(grid, j - 1, k)};
}

CellSums cell_sums(const Grid2D& grid, const CornerField& corners,
                   std::size_t j, std::size_t k) {
  const auto jj = static_cast<std::ptrdiff_t>(j);
  const auto kk = static_cast<std::ptrdiff_t>(k);
  const std::array<std::array<std::ptrdiff_t, 2>, 4> idx{
      {{jj - 1, kk - 1}, {jj, kk - 1}, {jj, kk}, {jj - 1, kk}}};
  std::array<Point2, 4> p;
  std::array<CornerSample, 4> w;
  for (int i = 0; i < 4; ++i) {
    p[i] = corner_at(corners, grid, idx[i][0], idx[i][1]);
    w[i] = corner_value(corners, idx[i][0], idx[i][1]);
  }
  CellSums s{signed_polygon_area(p), 0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    const int n = (i + 1) % 4;
    const double dx = p[n].x - p[i].x;
    const double dy = p[n].y - p[i].y;
    s.div += (w[i].u + w[n].u) * dy - (w[i].v + w[n].v) * dx;
    s.gx += (w[i].h + w[n].h) * dy;
    s.gy += (w[i].h + w[n].h) * dx;
  }
  return s;
}

Step2DResult step_fv_explicit(const Grid2D& grid, const State2D& state,
                              double tau, CornerInterp mode) {
  check_inputs(grid, state, tau);
  const CornerField corners = interpolate_corners(grid, state, mode);
  const std::vector<CellSums> sums = all_sums(grid, corners);
  const std::size_t nx = grid.nx(), ny = grid.ny();
  Field2D x(nx, ny), y(nx, ny);
  State2D next{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
  for (std::size_t k = 0; k < ny; ++k) {
    for (std::size_t j = 0; j < nx; ++j) {
      const CellSums& s = sums[k * nx + j];
      const double u = state.u(j, k), v = state.v(j, k), h = state.h(j, k);
      x(j, k) = grid.x()(j, k) + tau * u;
      y(j, k) = grid.y()(j, k) + tau * v;
      next.h(j, k) = h - tau * h / (2.0 * s.area) * s.div;
      next.u(j, k) = u - tau / (2.0 * s.area) * s.gx;
      next.v(j, k) = v + tau / (2.0 * s.area) * s.gy;
    }
  }
  Grid2D out(std::move(x), std::move(y), grid.lx(), grid.ly(), grid.dxi(),
             grid.deta());
  finish(out, next);
  return {std::move(out), std::move(next), 0, 0.0};
}

Step2DResult step_fv_trapezoidal(const Grid2D& grid, const State2D& state,
                                 double tau, CornerInterp mode,
                                 const PicardOptions& opt) {
  check_inputs(grid, state, tau);
  const std::size_t nx = grid.nx(), ny = grid.ny(), n = nx * ny;
  const std::vector<CellSums> sums =
      all_sums(grid, interpolate_corners(grid, state, mode));

  const auto x0 = grid.x().flat();
  const auto y0 = grid.y().flat();
  const auto u0 = state.u.flat();
  const auto v0 = state.v.flat();
  const auto h0 = state.h.flat();

  // Unknowns packed as [x | y | u | v | h] at the new level.
  std::vector<double> z(5 * n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = x0[i] + tau * u0[i];
    z[n + i] = y0[i] + tau * v0[i];
    z[2 * n + i] = u0[i];
    z[3 * n + i] = v0[i];
    z[4 * n + i] = h0[i];
  }

  auto unpack = [&](const std::vector<double>& zz, Grid2D& g, State2D& s) {
    Field2D x(nx, ny), y(nx, ny);
    s = State2D{Field2D(nx, ny), Field2D(nx, ny), Field2D(nx, ny)};
    std::copy_n(zz.begin(), n, x.flat().begin());
    std::copy_n(zz.begin() + n, n, y.flat().begin());
    std::copy_n(zz.begin() + 2 * n, n, s.u.flat().begin());
    std::copy_n(zz.begin() + 3 * n, n, s.v.flat().begin());
    std::copy_n(zz.begin() + 4 * n, n, s.h.flat().begin());
    g = Grid2D(std::move(x), std::move(y), grid.lx(), grid.ly(), grid.dxi(),
               grid.deta());
  };

  Grid2D hat_grid = grid;
  State2D hat_state = state;
  auto map = [&](const std::vector<double>& zz, std::vector<double>& out) {
    unpack(zz, hat_grid, hat_state);
    const std::vector<CellSums> hat =
        all_sums(hat_grid, interpolate_corners(hat_grid, hat_state, mode));
    for (std::size_t i = 0; i < n; ++i) {
      const CellSums& s = sums[i];
      const CellSums& r = hat[i];
      const double uh = zz[2 * n + i], vh = zz[3 * n + i], hh = zz[4 * n + i];
      out[i] = x0[i] + tau * 0.5 * (u0[i] + uh);
      out[n + i] = y0[i] + tau * 0.5 * (v0[i] + vh);
      out[2 * n + i] = u0[i] - tau * (s.gx / (4.0 * s.area) + r.gx / (4.0 * r.area));
      out[3 * n + i] = v0[i] + tau * (s.gy / (4.0 * s.area) + r.gy / (4.0 * r.area));
      out[4 * n + i] = h0[i] - tau * (h0[i] * s.div / (4.0 * s.area) +
                                      hh * r.div / (4.0 * r.area));
    }
  };
  const PicardOutcome res = picard_solve(z, map, opt, "trapezoidal FV step");
  unpack(z, hat_grid, hat_state);
  finish(hat_grid, hat_state);
  return {std::move(hat_grid), std::move(hat_state), res.iterations, res.residual};
}

}  // namespace invswe
