// Compiled with -mavx2 only; callers go through avx2_kernels(), which checks
// the CPU first.
#include <immintrin.h>

#include "invswe/kernels/kernels.hpp"

namespace invswe::kernels {

namespace {

void sweep_row(std::size_t begin, std::size_t end, const double* ae,
               const double* aw, const double* an, const double* as,
               const double* den, const double* zn, double off_n,
               const double* zs, double off_s, double* z) {
  // Compute four consecutive nodes and keep only the ones of the colour
  // being updated. Their inputs are all of the other colour, so the
  // discarded lanes do not affect the kept ones.
  const __m256d vn = _mm256_set1_pd(off_n);
  const __m256d vs = _mm256_set1_pd(off_s);
  std::size_t j = begin;
  for (; j + 4 <= end; j += 4) {
    __m256d num = _mm256_mul_pd(_mm256_loadu_pd(ae + j), _mm256_loadu_pd(z + j + 1));
    num = _mm256_add_pd(num, _mm256_mul_pd(_mm256_loadu_pd(aw + j),
                                           _mm256_loadu_pd(z + j - 1)));
    num = _mm256_add_pd(
        num, _mm256_mul_pd(_mm256_loadu_pd(an + j),
                           _mm256_add_pd(_mm256_loadu_pd(zn + j), vn)));
    num = _mm256_add_pd(
        num, _mm256_mul_pd(_mm256_loadu_pd(as + j),
                           _mm256_add_pd(_mm256_loadu_pd(zs + j), vs)));
    const __m256d upd = _mm256_div_pd(num, _mm256_loadu_pd(den + j));
    const __m256d old = _mm256_loadu_pd(z + j);
    // Lanes 0 and 2 belong to the colour.
    _mm256_storeu_pd(z + j, _mm256_blend_pd(old, upd, 0b0101));
  }
  for (; j < end; j += 2) {
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
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d f = _mm256_mul_pd(_mm256_loadu_pd(mt + j),
                              _mm256_add_pd(_mm256_loadu_pd(ta + j),
                                            _mm256_loadu_pd(tb + j)));
    f = _mm256_add_pd(f, _mm256_mul_pd(_mm256_loadu_pd(mx + j),
                                       _mm256_add_pd(_mm256_loadu_pd(xa + j),
                                                     _mm256_loadu_pd(xb + j))));
    f = _mm256_add_pd(f, _mm256_mul_pd(_mm256_loadu_pd(my + j),
                                       _mm256_add_pd(_mm256_loadu_pd(ya + j),
                                                     _mm256_loadu_pd(yb + j))));
    _mm256_storeu_pd(out + j, f);
  }
  for (; j < n; ++j) {
    double f = mt[j] * (ta[j] + tb[j]);
    f = f + mx[j] * (xa[j] + xb[j]);
    f = f + my[j] * (ya[j] + yb[j]);
    out[j] = f;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", sweep_row, face_flux_row};
  return table;
}

}  // namespace invswe::kernels
