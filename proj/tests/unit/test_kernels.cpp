#include <doctest.h>

#include <random>
#include <vector>

#include "invswe/kernels/kernels.hpp"

using namespace invswe::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("active table is one of the known ones") {
  const KernelTable& t = active_kernels();
  CHECK((&t == &scalar_kernels() || &t == avx2_kernels()));
}

TEST_CASE("sweep row kernels agree bit for bit") {
  const KernelTable* avx = avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 kernels unavailable");
    return;
  }
  std::mt19937_64 rng(1);
  for (std::size_t n : {3u, 4u, 7u, 8u, 9u, 31u, 71u}) {
    for (std::size_t begin : {1u, 2u}) {
      const auto ae = random_vec(rng, n, 0.5, 2.0), aw = random_vec(rng, n, 0.5, 2.0);
      const auto an = random_vec(rng, n, 0.5, 2.0), as = random_vec(rng, n, 0.5, 2.0);
      std::vector<double> den(n);
      for (std::size_t j = 0; j < n; ++j) den[j] = ae[j] + aw[j] + an[j] + as[j];
      const auto zn = random_vec(rng, n, -3, 3), zs = random_vec(rng, n, -3, 3);
      auto za = random_vec(rng, n, -3, 3);
      auto zb = za;
      scalar_kernels().sweep_row(begin, n - 1, ae.data(), aw.data(), an.data(), as.data(),
                                 den.data(), zn.data(), 0.25, zs.data(), -1.5, za.data());
      avx->sweep_row(begin, n - 1, ae.data(), aw.data(), an.data(), as.data(), den.data(),
                     zn.data(), 0.25, zs.data(), -1.5, zb.data());
      CHECK(za == zb);
    }
  }
}

TEST_CASE("face flux row kernels agree bit for bit") {
  const KernelTable* avx = avx2_kernels();
  if (avx == nullptr) {
    MESSAGE("AVX2 kernels unavailable");
    return;
  }
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 4u, 5u, 13u, 71u}) {
    std::vector<std::vector<double>> in;
    for (int i = 0; i < 9; ++i) in.push_back(random_vec(rng, n, -2, 2));
    std::vector<double> a(n), b(n);
    scalar_kernels().face_flux_row(n, in[0].data(), in[1].data(), in[2].data(), in[3].data(),
                                   in[4].data(), in[5].data(), in[6].data(), in[7].data(),
                                   in[8].data(), a.data());
    avx->face_flux_row(n, in[0].data(), in[1].data(), in[2].data(), in[3].data(),
                       in[4].data(), in[5].data(), in[6].data(), in[7].data(),
                       in[8].data(), b.data());
    CHECK(a == b);
  }
}

TEST_CASE("scalar sweep row updates only every other node") {
  std::vector<double> one(6, 1.0), den(6, 4.0), zn(6, 1.0), zs(6, 1.0);
  std::vector<double> z{0, 0, 0, 0, 0, 0};
  scalar_kernels().sweep_row(1, 5, one.data(), one.data(), one.data(), one.data(),
                             den.data(), zn.data(), 0.0, zs.data(), 0.0, z.data());
  CHECK(z == std::vector<double>{0, 0.5, 0, 0.5, 0, 0});
}
