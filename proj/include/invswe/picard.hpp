// Damped fixed-point (Picard) iteration shared by the implicit steps.
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "invswe/core.hpp"

namespace invswe {

struct PicardOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

struct PicardOutcome {
  int iterations = 0;
  double residual = 0.0;
};

/// Iterates z <- z + w (F(z) - z) until max|F(z) - z| <= tol, starting with
/// w = 1 and halving to 0.5 once the residual grows. On convergence z holds
/// F(z) of the last evaluation. `map(z, out)` writes F(z) into out.
template <class Map>
PicardOutcome picard_solve(std::vector<double>& z, Map&& map,
                           const PicardOptions& opt, const char* what) {
  std::vector<double> next(z.size());
  double damping = 1.0;
  double previous = INFINITY;
  for (int it = 1; it <= opt.max_iter; ++it) {
    map(z, next);
    double r = 0.0;
    for (std::size_t n = 0; n < z.size(); ++n) {
      const double d = std::abs(next[n] - z[n]);
      if (!(d <= r)) r = d;  // propagates NaN
    }
    if (std::isnan(r)) {
      throw SolverError(ErrorKind::NonConvergence,
                        std::string(what) + ": iteration produced NaN",
                        std::nullopt, r);
    }
    if (r <= opt.tol) {
      z.swap(next);
      return {it, r};
    }
    if (r > previous) damping = 0.5;
    previous = r;
    for (std::size_t n = 0; n < z.size(); ++n) {
      z[n] += damping * (next[n] - z[n]);
    }
  }
  std::ostringstream os;
  os << what << ": no convergence after " << opt.max_iter
     << " iterations (residual " << previous << ")";
  throw SolverError(ErrorKind::NonConvergence, os.str(), std::nullopt, previous);
}

}  // namespace invswe
