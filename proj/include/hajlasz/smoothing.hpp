#pragma once
// Discrete (median) convolutions and maximal operators.

#include "hajlasz/covering.hpp"
#include "hajlasz/median.hpp"
#include "hajlasz/space.hpp"

namespace hajlasz {

// x -> sum_i avg_{B_i} u * phi_i(x)
FunctionOnSpace discrete_convolution(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                     const PartitionOfUnity& pou);
// x -> sum_i m^gamma_u(B_i) * phi_i(x)
FunctionOnSpace discrete_median_convolution(const MetricMeasureSpace& space,
                                            const FunctionOnSpace& u, const PartitionOfUnity& pou,
                                            GammaParam gamma);

// sup over balls centred at x of m^gamma_{|u|}(B)
FunctionOnSpace median_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                               GammaParam gamma);
// sup over the ladder's scales of the median convolution of |u|
FunctionOnSpace discrete_median_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                        GammaParam gamma, const ScaleLadder& ladder);
FunctionOnSpace discrete_median_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                        GammaParam gamma, ScaleRange scales);

// sup over balls centred at x of the average of |u|
FunctionOnSpace hl_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u);
// same, restricted to radii 0 < r < R
FunctionOnSpace restricted_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                   double R);

FunctionOnSpace abs(const FunctionOnSpace& u);

}  // namespace hajlasz
