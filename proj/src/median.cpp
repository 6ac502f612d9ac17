#include "hajlasz/median.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace hajlasz {

GammaParam::GammaParam(double g) : gamma(g) {
  if (!(g > 0.0 && g <= 0.5)) {
    throw std::invalid_argument("gamma must lie in (0, 1/2], got " + std::to_string(g));
  }
}

double gamma_median(std::span<const double> values, std::span<const double> masses,
                    GammaParam gamma) {
  if (values.empty()) throw std::invalid_argument("gamma_median of an empty set");
  if (values.size() != masses.size()) throw std::invalid_argument("values and masses differ in size");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

  double total = 0.0;
  for (double m : masses) total += m;
  const double threshold = gamma.gamma * total - 1e-12 * total;

  // exceed = mass strictly above the current group's value
  double exceed = 0.0;
  double answer = values[order.front()];
  std::size_t i = 0;
  while (i < order.size()) {
    const double v = values[order[i]];
    if (!(exceed < threshold)) break;
    answer = v;
    while (i < order.size() && values[order[i]] == v) exceed += masses[order[i++]];
  }
  return answer;
}

double gamma_median(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                    const WeightedSubset& A, GammaParam gamma) {
  if (A.indices.empty()) throw std::invalid_argument("gamma_median of an empty set");
  std::vector<double> vals(A.size()), mass(A.size());
  for (std::size_t j = 0; j < A.size(); ++j) {
    vals[j] = u[A.indices[j]];
    mass[j] = space.mass(A.indices[j]);
  }
  return gamma_median(vals, mass, gamma);
}

double integral_average(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                        const WeightedSubset& A) {
  if (A.indices.empty()) throw std::invalid_argument("integral_average of an empty set");
  double acc = 0.0, mass = 0.0;
  for (std::size_t i : A.indices) {
    acc += u[i] * space.mass(i);
    mass += space.mass(i);
  }
  return acc / mass;
}

}  // namespace hajlasz
