// Discrete conserved quantities and their time series.
#pragma once

#include <iosfwd>
#include <vector>

#include "invswe/core.hpp"

namespace invswe {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double px = 0.0;
  double py = 0.0;  // zero in 1D
  double energy = 0.0;
};

/// M = 1/2 sum h_i (x_{i+1} - x_{i-1}), P = 1/2 sum h_i u_i (...),
/// H = 1/4 sum (h_i u_i^2 + h_i^2)(...).
DiagnosticsRecord conserved_1d(const Grid1D& grid, const State1D& state,
                               double t = 0.0);

/// M, Px, Py and H as d_xi d_eta sum (.) J_jk with the nodal Jacobian;
/// H uses the integrand (h (u^2 + v^2) + h^2) / 2.
DiagnosticsRecord conserved_2d(const Grid2D& grid, const State2D& state,
                               double t = 0.0);

/// Reference magnitude for the momentum relative change: the same quadrature
/// applied to h|u| (resp. h|v|). Used when the initial momentum is zero.
double momentum_scale_1d(const Grid1D& grid, const State1D& state);
double momentum_scale_2d(const Grid2D& grid, std::span<const double> h,
                         std::span<const double> velocity);

struct RelativeChange {
  double mass = 0.0;
  double px = 0.0;
  double py = 0.0;
  double energy = 0.0;
};

class DiagnosticsSeries {
 public:
  DiagnosticsSeries() = default;
  /// `px_scale`, `py_scale` are the momentum reference magnitudes at t = 0;
  /// the relative momentum change divides by |P(0)|, or by the scale when
  /// |P(0)| <= 1e-12 * scale.
  DiagnosticsSeries(bool two_d, double px_scale, double py_scale)
      : two_d_(two_d), px_scale_(px_scale), py_scale_(py_scale) {}

  void add(const DiagnosticsRecord& r) { records_.push_back(r); }
  const std::vector<DiagnosticsRecord>& records() const { return records_; }
  bool two_d() const { return two_d_; }

  /// Change of record n against record 0.
  RelativeChange relative(std::size_t n) const;
  /// Changes of records 1..end; empty for a single sample.
  std::vector<RelativeChange> changes() const;

  /// `t,M,P,H,relM,relP,relH` (1D) or `t,M,Px,Py,H,relM,relPx,relPy,relH`.
  void write_csv(std::ostream& os, int precision) const;

 private:
  bool two_d_ = false;
  double px_scale_ = 0.0;
  double py_scale_ = 0.0;
  std::vector<DiagnosticsRecord> records_;
};

struct TrajectorySample1D {
  double t;
  Grid1D grid;
  State1D state;
};

DiagnosticsSeries record_series(const std::vector<TrajectorySample1D>& trajectory);

}  // namespace invswe
