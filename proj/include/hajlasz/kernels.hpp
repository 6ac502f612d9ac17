#pragma once
// Data-parallel row kernels over distance-matrix rows.
//
// Every kernel has a scalar reference implementation and an AVX2 variant.
// The active table is chosen once at first use: AVX2 when the CPU reports it,
// unless HAJLASZ_LAB_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace hajlasz::kernels {

struct KernelTable {
  std::string_view name;
  // sum_j w[j] * [d[j] < r]
  double (*masked_sum)(const double* d, const double* w, std::size_t n, double r);
  // sum_j w[j] * v[j] * [d[j] < r]
  double (*masked_dot)(const double* d, const double* w, const double* v, std::size_t n,
                       double r);
  // min_j a[j] over d[j] < r, +inf when the mask is empty
  double (*masked_min)(const double* a, const double* d, std::size_t n, double r);
  // #{j : lo <= d[j] <= hi}
  std::size_t (*count_in_range)(const double* d, std::size_t n, double lo, double hi);
  // out[j] = max(out[j], in[j])
  void (*max_inplace)(double* out, const double* in, std::size_t n);
  // sum_j w[j] * v[j]^2
  double (*weighted_sq_sum)(const double* w, const double* v, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the binary or CPU has no AVX2 support.
const KernelTable* avx2_table();
const KernelTable& active();

inline double masked_sum(std::span<const double> d, std::span<const double> w, double r) {
  return active().masked_sum(d.data(), w.data(), d.size(), r);
}
inline double masked_dot(std::span<const double> d, std::span<const double> w,
                         std::span<const double> v, double r) {
  return active().masked_dot(d.data(), w.data(), v.data(), d.size(), r);
}
inline double masked_min(std::span<const double> a, std::span<const double> d, double r) {
  return active().masked_min(a.data(), d.data(), d.size(), r);
}
inline std::size_t count_in_range(std::span<const double> d, double lo, double hi) {
  return active().count_in_range(d.data(), d.size(), lo, hi);
}
inline void max_inplace(std::span<double> out, std::span<const double> in) {
  active().max_inplace(out.data(), in.data(), out.size());
}
inline double weighted_sq_sum(std::span<const double> w, std::span<const double> v) {
  return active().weighted_sq_sum(w.data(), v.data(), w.size());
}

}  // namespace hajlasz::kernels
