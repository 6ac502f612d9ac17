#include "hajlasz/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <limits>

#if defined(__x86_64__) || defined(_M_X64)
#define HAJLASZ_X86 1
#include <immintrin.h>
#else
#define HAJLASZ_X86 0
#endif

namespace hajlasz::kernels {
namespace {

double masked_sum_scalar(const double* d, const double* w, std::size_t n, double r) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] < r) acc += w[j];
  }
  return acc;
}

double masked_dot_scalar(const double* d, const double* w, const double* v, std::size_t n,
                         double r) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] < r) acc += w[j] * v[j];
  }
  return acc;
}

double masked_min_scalar(const double* a, const double* d, std::size_t n, double r) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] < r && a[j] < best) best = a[j];
  }
  return best;
}

std::size_t count_in_range_scalar(const double* d, std::size_t n, double lo, double hi) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (d[j] >= lo && d[j] <= hi) ++count;
  }
  return count;
}

void max_inplace_scalar(double* out, const double* in, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] = std::max(out[j], in[j]);
}

double weighted_sq_sum_scalar(const double* w, const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += w[j] * v[j] * v[j];
  return acc;
}

#if HAJLASZ_X86

#define HAJLASZ_AVX2 __attribute__((target("avx2")))

HAJLASZ_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

HAJLASZ_AVX2 double masked_sum_avx2(const double* d, const double* w, std::size_t n, double r) {
  const __m256d rv = _mm256_set1_pd(r);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(d + j), rv, _CMP_LT_OQ);
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(w + j)));
  }
  double tail = 0.0;
  for (; j < n; ++j) {
    if (d[j] < r) tail += w[j];
  }
  return hsum(acc) + tail;
}

HAJLASZ_AVX2 double masked_dot_avx2(const double* d, const double* w, const double* v,
                                    std::size_t n, double r) {
  const __m256d rv = _mm256_set1_pd(r);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(d + j), rv, _CMP_LT_OQ);
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(w + j), _mm256_loadu_pd(v + j));
    acc = _mm256_add_pd(acc, _mm256_and_pd(mask, prod));
  }
  double tail = 0.0;
  for (; j < n; ++j) {
    if (d[j] < r) tail += w[j] * v[j];
  }
  return hsum(acc) + tail;
}

HAJLASZ_AVX2 double masked_min_avx2(const double* a, const double* d, std::size_t n, double r) {
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d rv = _mm256_set1_pd(r);
  const __m256d infv = _mm256_set1_pd(inf);
  __m256d best = infv;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d mask = _mm256_cmp_pd(_mm256_loadu_pd(d + j), rv, _CMP_LT_OQ);
    __m256d cand = _mm256_blendv_pd(infv, _mm256_loadu_pd(a + j), mask);
    best = _mm256_min_pd(best, cand);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best);
  double out = std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
  for (; j < n; ++j) {
    if (d[j] < r && a[j] < out) out = a[j];
  }
  return out;
}

HAJLASZ_AVX2 std::size_t count_in_range_avx2(const double* d, std::size_t n, double lo,
                                             double hi) {
  const __m256d lov = _mm256_set1_pd(lo);
  const __m256d hiv = _mm256_set1_pd(hi);
  std::size_t count = 0;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d x = _mm256_loadu_pd(d + j);
    __m256d in = _mm256_and_pd(_mm256_cmp_pd(x, lov, _CMP_GE_OQ), _mm256_cmp_pd(x, hiv, _CMP_LE_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(in)));
  }
  for (; j < n; ++j) {
    if (d[j] >= lo && d[j] <= hi) ++count;
  }
  return count;
}

HAJLASZ_AVX2 void max_inplace_avx2(double* out, const double* in, std::size_t n) {
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    // max_pd returns the second operand on NaN; inputs are finite.
    _mm256_storeu_pd(out + j, _mm256_max_pd(_mm256_loadu_pd(out + j), _mm256_loadu_pd(in + j)));
  }
  for (; j < n; ++j) out[j] = std::max(out[j], in[j]);
}

HAJLASZ_AVX2 double weighted_sq_sum_avx2(const double* w, const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    __m256d x = _mm256_loadu_pd(v + j);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + j), _mm256_mul_pd(x, x)));
  }
  double tail = 0.0;
  for (; j < n; ++j) tail += w[j] * v[j] * v[j];
  return hsum(acc) + tail;
}

const KernelTable kAvx2{"avx2",          masked_sum_avx2,  masked_dot_avx2,     masked_min_avx2,
                        count_in_range_avx2, max_inplace_avx2, weighted_sq_sum_avx2};
#endif

const KernelTable kScalar{"scalar",
                          masked_sum_scalar,
                          masked_dot_scalar,
                          masked_min_scalar,
                          count_in_range_scalar,
                          max_inplace_scalar,
                          weighted_sq_sum_scalar};

const KernelTable& select_table() {
  const char* env = std::getenv("HAJLASZ_LAB_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return kScalar;
  if (const KernelTable* t = avx2_table()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if HAJLASZ_X86
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select_table();
  return table;
}

}  // namespace hajlasz::kernels
