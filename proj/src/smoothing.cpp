#include "hajlasz/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "hajlasz/kernels.hpp"
#include "hajlasz/parallel.hpp"

namespace hajlasz {

namespace {

FunctionOnSpace combine(const PartitionOfUnity& pou, const std::vector<double>& ball_values) {
  std::vector<double> out(pou.num_points(), 0.0);
  for (std::size_t x = 0; x < out.size(); ++x) {
    for (const auto& e : pou.row(x)) out[x] += ball_values[e.ball] * e.weight;
  }
  return FunctionOnSpace(std::move(out));
}

void check_size(const MetricMeasureSpace& space, const FunctionOnSpace& u) {
  if (u.size() != space.size()) {
    throw std::invalid_argument("function has " + std::to_string(u.size()) +
                                " values for a space of " + std::to_string(space.size()) +
                                " points");
  }
}

// Points sorted by distance from x with group ends: order[0, ends[j]) is the
// closed ball of the j-th distinct radius.
void distance_order(const MetricMeasureSpace& space, std::size_t x, std::vector<std::size_t>& order,
                    std::vector<std::size_t>& ends) {
  const auto row = space.row(x);
  order.resize(space.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return row[a] < row[b] || (row[a] == row[b] && a < b);
  });
  ends.clear();
  for (std::size_t j = 1; j <= order.size(); ++j) {
    if (j == order.size() || row[order[j]] != row[order[j - 1]]) ends.push_back(j);
  }
}

// Fenwick tree over value ranks (rank 0 = largest value).
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0.0) {}
  void add(std::size_t i, double v) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += v;
  }
  // Largest p with sum(ranks < p) < threshold.
  std::size_t search(double threshold) const {
    std::size_t pos = 0;
    double acc = 0.0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && acc + tree_[pos + step] < threshold) {
        pos += step;
        acc += tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<double> tree_;
};

template <class BallStat>
FunctionOnSpace per_center_max(const MetricMeasureSpace& space, BallStat&& stat) {
  std::vector<double> out(space.size(), 0.0);
  parallel_for(space.size(), [&](std::size_t x) { out[x] = stat(x); });
  return FunctionOnSpace(std::move(out));
}

}  // namespace

FunctionOnSpace abs(const FunctionOnSpace& u) {
  std::vector<double> v(u.vec());
  for (double& a : v) a = std::fabs(a);
  return FunctionOnSpace(std::move(v));
}

FunctionOnSpace discrete_convolution(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                     const PartitionOfUnity& pou) {
  check_size(space, u);
  const auto& balls = pou.covering().balls;
  std::vector<double> avg(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) avg[i] = integral_average(space, u, balls[i]);
  return combine(pou, avg);
}

FunctionOnSpace discrete_median_convolution(const MetricMeasureSpace& space,
                                            const FunctionOnSpace& u, const PartitionOfUnity& pou,
                                            GammaParam gamma) {
  check_size(space, u);
  const auto& balls = pou.covering().balls;
  std::vector<double> med(balls.size());
  for (std::size_t i = 0; i < balls.size(); ++i) med[i] = gamma_median(space, u, balls[i], gamma);
  return combine(pou, med);
}

FunctionOnSpace median_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                               GammaParam gamma) {
  check_size(space, u);
  const std::size_t n = space.size();
  // distinct |u| values descending; rank_of[y] indexes them
  std::vector<double> values(n);
  for (std::size_t y = 0; y < n; ++y) values[y] = std::fabs(u[y]);
  std::vector<double> distinct(values);
  std::sort(distinct.begin(), distinct.end(), std::greater<>());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> rank_of(n);
  for (std::size_t y = 0; y < n; ++y) {
    rank_of[y] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), values[y], std::greater<>()) -
        distinct.begin());
  }

  return per_center_max(space, [&](std::size_t x) {
    std::vector<std::size_t> order, ends;
    distance_order(space, x, order, ends);
    Fenwick tree(distinct.size());
    double mass = 0.0;
    double best = 0.0;
    std::size_t j = 0;
    for (std::size_t end : ends) {
      for (; j < end; ++j) {
        tree.add(rank_of[order[j]], space.mass(order[j]));
        mass += space.mass(order[j]);
      }
      const double threshold = gamma.gamma * mass - 1e-12 * mass;
      const std::size_t rank = std::min(tree.search(threshold), distinct.size() - 1);
      best = std::max(best, distinct[rank]);
    }
    return best;
  });
}

FunctionOnSpace discrete_median_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                        GammaParam gamma, const ScaleLadder& ladder) {
  check_size(space, u);
  const FunctionOnSpace a = abs(u);
  const ScaleRange range = ladder.range();
  std::vector<std::vector<double>> terms(range.count());
  parallel_for(range.count(), [&](std::size_t idx) {
    const int k = range.k_min + static_cast<int>(idx);
    terms[idx] = discrete_median_convolution(space, a, ladder.at(k), gamma).vec();
  });
  std::vector<double> out(space.size(), 0.0);
  for (const auto& t : terms) kernels::max_inplace(out, t);
  return FunctionOnSpace(std::move(out));
}

FunctionOnSpace discrete_median_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                        GammaParam gamma, ScaleRange scales) {
  ScaleLadder ladder(space, scales);
  return discrete_median_maximal(space, u, gamma, ladder);
}

FunctionOnSpace restricted_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                   double R) {
  check_size(space, u);
  if (!(R > 0.0)) throw std::invalid_argument("restricted maximal radius must be positive");
  return per_center_max(space, [&](std::size_t x) {
    std::vector<std::size_t> order, ends;
    distance_order(space, x, order, ends);
    double sum = 0.0, mass = 0.0, best = 0.0;
    std::size_t j = 0;
    for (std::size_t end : ends) {
      // closed ball of radius d_j is B(x, r) for r just above d_j
      if (!(space.distance(x, order[end - 1]) < R)) break;
      for (; j < end; ++j) {
        sum += std::fabs(u[order[j]]) * space.mass(order[j]);
        mass += space.mass(order[j]);
      }
      best = std::max(best, sum / mass);
    }
    return best;
  });
}

FunctionOnSpace hl_maximal(const MetricMeasureSpace& space, const FunctionOnSpace& u) {
  return restricted_maximal(space, u, std::numeric_limits<double>::infinity());
}

}  // namespace hajlasz
