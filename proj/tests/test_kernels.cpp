#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hajlasz/kernels.hpp"
#include "hajlasz/parallel.hpp"

using namespace hajlasz;

namespace {

struct Data {
  std::vector<double> d, w, v;
};

// Distances drawn from a small lattice so that ties with the radius occur.
Data lattice_data(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> lattice(0, 16);
  std::uniform_real_distribution<double> real(-2.0, 2.0);
  Data x;
  for (std::size_t j = 0; j < n; ++j) {
    x.d.push_back(lattice(rng) / 8.0);
    x.w.push_back(std::fabs(real(rng)));
    x.v.push_back(real(rng));
  }
  return x;
}

}  // namespace

TEST_CASE("scalar kernels on a hand example") {
  const auto& k = kernels::scalar_table();
  const double d[] = {0.0, 1.0, 2.0, 1.0, 3.0};
  const double w[] = {1, 2, 3, 4, 5};
  const double v[] = {1, -1, 2, 0.5, 7};
  CHECK(k.masked_sum(d, w, 5, 1.0) == 1.0);
  CHECK(k.masked_sum(d, w, 5, 1.5) == 7.0);
  CHECK(k.masked_dot(d, w, v, 5, 1.5) == 1.0 - 2.0 + 2.0);
  CHECK(k.masked_min(v, d, 5, 1.5) == -1.0);
  CHECK(std::isinf(k.masked_min(v, d, 5, 0.0)));
  CHECK(k.count_in_range(d, 5, 1.0, 2.0) == 3);
  CHECK(k.weighted_sq_sum(w, v, 5) == 1 + 2 + 12 + 1 + 245);
  double out[] = {0, 5, -1, 2, 2};
  k.max_inplace(out, v, 5);
  CHECK(out[0] == 1);
  CHECK(out[1] == 5);
  CHECK(out[2] == 2);
  CHECK(out[4] == 7);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const auto* avx = kernels::avx2_table();
  if (avx == nullptr) {
    MESSAGE("no AVX2 on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = kernels::scalar_table();
  std::mt19937_64 rng(42);
  for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1023}) {
    for (int t = 0; t < 20; ++t) {
      const auto x = lattice_data(rng, n);
      for (double r : {0.0, 0.125, 0.5, 1.0, 1.0625, 3.0}) {
        // sums differ only by association order
        const double s_ref = ref.masked_sum(x.d.data(), x.w.data(), n, r);
        CHECK(avx->masked_sum(x.d.data(), x.w.data(), n, r) == doctest::Approx(s_ref).epsilon(1e-13).scale(1.0));
        const double d_ref = ref.masked_dot(x.d.data(), x.w.data(), x.v.data(), n, r);
        CHECK(avx->masked_dot(x.d.data(), x.w.data(), x.v.data(), n, r) ==
              doctest::Approx(d_ref).epsilon(1e-13).scale(1.0));
        CHECK(avx->masked_min(x.v.data(), x.d.data(), n, r) == ref.masked_min(x.v.data(), x.d.data(), n, r));
        CHECK(avx->count_in_range(x.d.data(), n, r, r + 0.5) == ref.count_in_range(x.d.data(), n, r, r + 0.5));
      }
      CHECK(avx->weighted_sq_sum(x.w.data(), x.v.data(), n) ==
            doctest::Approx(ref.weighted_sq_sum(x.w.data(), x.v.data(), n)).epsilon(1e-13).scale(1.0));
      std::vector<double> a(x.w), b(x.w);
      ref.max_inplace(a.data(), x.v.data(), n);
      avx->max_inplace(b.data(), x.v.data(), n);
      CHECK(a == b);
    }
  }
}

TEST_CASE("active table is one of the two") {
  const auto& act = kernels::active();
  CHECK((act.name == kernels::scalar_table().name ||
         (kernels::avx2_table() != nullptr && act.name == kernels::avx2_table()->name)));
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  CHECK(thread_count() >= 1);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
