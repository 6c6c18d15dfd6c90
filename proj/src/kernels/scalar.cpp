#include "invswe/kernels/kernels.hpp"

namespace invswe::kernels {

namespace {

void sweep_row(std::size_t begin, std::size_t end, const double* ae,
               const double* aw, const double* an, const double* as,
               const double* den, const double* zn, double off_n,
               const double* zs, double off_s, double* z) {
  for (std::size_t j = begin; j < end; j += 2) {
    double num = ae[j] * z[j + 1];
    num = num + aw[j] * z[j - 1];
    num = num + an[j] * (zn[j] + off_n);
    num = num + as[j] * (zs[j] + off_s);
    z[j] = num / den[j];
  }
}

void face_flux_row(std::size_t n, const double* mt, const double* mx,
                   const double* my, const double* ta, const double* tb,
                   const double* xa, const double* xb, const double* ya,
                   const double* yb, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    double f = mt[j] * (ta[j] + tb[j]);
    f = f + mx[j] * (xa[j] + xb[j]);
    f = f + my[j] * (ya[j] + yb[j]);
    out[j] = f;
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", sweep_row, face_flux_row};
  return table;
}

}  // namespace invswe::kernels
