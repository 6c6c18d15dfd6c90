// Row kernels for the 2D inner loops. Each has a scalar reference and,
// where the CPU allows, an AVX2 variant that produces bit-identical results
// (same operation order, no fused multiply-add).
#pragma once

#include <cstddef>
#include <string>

namespace invswe::kernels {

/// Weighted five-point Gauss-Seidel update of every other node in
/// [begin, end) starting at `begin`:
///   z[j] = (ae[j] z[j+1] + aw[j] z[j-1] + an[j] (zn[j] + off_n)
///           + as[j] (zs[j] + off_s)) / den[j]
/// Updated nodes never neighbour each other, so the order inside the range
/// is irrelevant.
using SweepRowFn = void (*)(std::size_t begin, std::size_t end, const double* ae,
                            const double* aw, const double* an, const double* as,
                            const double* den, const double* zn, double off_n,
                            const double* zs, double off_s, double* z);

/// Face flux of one conserved component on n faces:
///   out[j] = mt[j] (ta[j] + tb[j]) + mx[j] (xa[j] + xb[j]) + my[j] (ya[j] + yb[j])
using FaceFluxRowFn = void (*)(std::size_t n, const double* mt, const double* mx,
                               const double* my, const double* ta, const double* tb,
                               const double* xa, const double* xb, const double* ya,
                               const double* yb, double* out);

struct KernelTable {
  const char* name;
  SweepRowFn sweep_row;
  FaceFluxRowFn face_flux_row;
};

const KernelTable& scalar_kernels();
/// nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

/// Table used by the solvers: AVX2 when available, unless the environment
/// variable INVSWE_SIMD is set to "scalar".
const KernelTable& active_kernels();

}  // namespace invswe::kernels
