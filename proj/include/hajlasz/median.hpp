#pragma once
// gamma-medians and integral averages over weighted subsets.

#include <span>

#include "hajlasz/space.hpp"

namespace hajlasz {

// 0 < gamma <= 1/2.
struct GammaParam {
  double gamma;

  explicit GammaParam(double g);
};

// Least value a of u on A with mu({x in A : u(x) > a}) < gamma mu(A).
// Equal values are merged before accumulation. An exceedance mass within
// 1e-12 mu(A) of the threshold counts as reaching it.
double gamma_median(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                    const WeightedSubset& A, GammaParam gamma);
double gamma_median(std::span<const double> values, std::span<const double> masses,
                    GammaParam gamma);

double integral_average(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                        const WeightedSubset& A);

}  // namespace hajlasz
