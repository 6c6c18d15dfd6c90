// Finite-volume Lagrangian schemes on the moving quadrilateral lattice:
// cell values live at the nodes ("centers"), fluxes are evaluated on the
// dual quadrilateral whose corners are the plaquette centroids.
#pragma once

#include <array>
#include <span>
#include <string>

#include "invswe/core.hpp"
#include "invswe/picard.hpp"

namespace invswe {

struct Point2 {
  double x;
  double y;
};

/// Shoelace area of four counterclockwise points; no sign check.
double signed_polygon_area(const std::array<Point2, 4>& corners);
/// As above but throws TangledMesh when the area is not positive.
double polygon_area(const std::array<Point2, 4>& corners);

struct InterpolationWeights {
  std::array<double, 4> weights{};  // restricted to the 4 adjacent centers, sum 1
  std::array<double, 4> stolen{};   // area of the new cell taken from each
  double cell_area = 0.0;           // area of the inserted corner's cell
};

/// Sibson (natural-neighbour) weights of `corner` with respect to its four
/// adjacent centers. `neighborhood` holds the other centers that may bound
/// the Voronoi cells involved (the adjacent ones may be repeated there).
/// Throws TangledMesh when the inserted cell is unbounded or none of its
/// area comes from the adjacent centers.
InterpolationWeights corner_weights(const std::array<Point2, 4>& centers,
                                    Point2 corner,
                                    std::span<const Point2> neighborhood);

enum class CornerInterp { Sibson, Mean };

CornerInterp parse_corner_interp(const std::string& name);
const char* to_string(CornerInterp mode);

/// Corner (j+1/2, k+1/2) is stored at index (j, k).
struct CornerField {
  Field2D x;
  Field2D y;
  Field2D u;
  Field2D v;
  Field2D h;
};

/// Centroid of centers (j..j+1, k..k+1), ghost-aware so that the returned
/// position is the one adjacent to node (j, k) even across the seams.
Point2 corner_position(const Grid2D& grid, std::ptrdiff_t j, std::ptrdiff_t k);

/// Positions and interpolated values of every corner.
CornerField interpolate_corners(const Grid2D& grid, const State2D& state,
                                CornerInterp mode);

/// Counterclockwise corners of the cell around node (j, k).
std::array<Point2, 4> cell_corners(const Grid2D& grid, std::ptrdiff_t j,
                                   std::ptrdiff_t k);

/// Edge sums of one cell: div = sum[(u_i+u_{i+1})(y_{i+1}-y_i) -
/// (v_i+v_{i+1})(x_{i+1}-x_i)], gx = sum (h_i+h_{i+1})(y_{i+1}-y_i),
/// gy = sum (h_i+h_{i+1})(x_{i+1}-x_i), plus the area.
struct CellSums {
  double area;
  double div;
  double gx;
  double gy;
};

CellSums cell_sums(const Grid2D& grid, const CornerField& corners,
                   std::size_t j, std::size_t k);

Step2DResult step_fv_explicit(const Grid2D& grid, const State2D& state,
                              double tau,
                              CornerInterp mode = CornerInterp::Sibson);

Step2DResult step_fv_trapezoidal(const Grid2D& grid, const State2D& state,
                                 double tau,
                                 CornerInterp mode = CornerInterp::Sibson,
                                 const PicardOptions& opt = {});

}  // namespace invswe
