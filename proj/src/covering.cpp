#include "hajlasz/covering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "hajlasz/kernels.hpp"

namespace hajlasz {

namespace {

BallCovering finish_covering(const MetricMeasureSpace& space, std::vector<std::size_t> centers,
                             double r) {
  BallCovering cov;
  cov.r = r;
  cov.centers = std::move(centers);
  std::vector<std::size_t> overlap(space.size(), 0);
  std::vector<bool> covered(space.size(), false);
  for (std::size_t c : cov.centers) {
    cov.balls.push_back(ball(space, c, r));
    cov.doubled.push_back(ball(space, c, 2.0 * r));
    for (std::size_t x : cov.balls.back().indices) covered[x] = true;
    for (std::size_t x : cov.doubled.back().indices) ++overlap[x];
  }
  for (std::size_t x = 0; x < space.size(); ++x) {
    if (!covered[x]) {
      throw std::invalid_argument("balls of radius r do not cover point " + std::to_string(x));
    }
  }
  cov.overlap_K = *std::max_element(overlap.begin(), overlap.end());
  return cov;
}

// dist_to_core(i, x) is d(x, core_i); candidates(i) lists points that may
// have a positive tent for ball i.
PartitionOfUnity build_tents(
    const MetricMeasureSpace& space, const BallCovering& covering, double falloff,
    const std::function<double(std::size_t, std::size_t)>& dist_to_core,
    const std::function<std::vector<std::size_t>(std::size_t)>& candidates) {
  const std::size_t n = space.size();
  std::vector<std::vector<PartitionEntry>> rows(n);
  for (std::size_t i = 0; i < covering.centers.size(); ++i) {
    for (std::size_t x : candidates(i)) {
      const double psi = 1.0 - dist_to_core(i, x) / falloff;
      if (psi > 0.0) rows[x].push_back({i, psi});
    }
  }
  double min_den = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> row_ptr(n + 1, 0);
  std::vector<PartitionEntry> entries;
  for (std::size_t x = 0; x < n; ++x) {
    double den = 0.0;
    for (const auto& e : rows[x]) den += e.weight;
    if (!(den > 0.0)) {
      throw std::invalid_argument("no tent is positive at point " + std::to_string(x));
    }
    min_den = std::min(min_den, den);
    for (const auto& e : rows[x]) entries.push_back({e.ball, e.weight / den});
    row_ptr[x + 1] = entries.size();
  }
  const double lip = static_cast<double>(covering.overlap_K + 1) / (falloff * std::min(1.0, min_den));
  return PartitionOfUnity(covering, std::move(row_ptr), std::move(entries), lip);
}

}  // namespace

BallCovering build_covering(const MetricMeasureSpace& space, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("covering radius must be positive");
  std::vector<std::size_t> centers;
  for (std::size_t x = 0; x < space.size(); ++x) {
    bool separated = true;
    for (std::size_t c : centers) {
      if (space.distance(x, c) < r) {
        separated = false;
        break;
      }
    }
    if (separated) centers.push_back(x);
  }
  return finish_covering(space, std::move(centers), r);
}

BallCovering covering_from_centers(const MetricMeasureSpace& space,
                                   std::vector<std::size_t> centers, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("covering radius must be positive");
  if (centers.empty()) throw std::invalid_argument("covering needs at least one center");
  for (std::size_t c : centers) {
    if (c >= space.size()) throw std::invalid_argument("center index out of range");
  }
  return finish_covering(space, std::move(centers), r);
}

PartitionOfUnity::PartitionOfUnity(BallCovering covering, std::vector<std::size_t> row_ptr,
                                   std::vector<PartitionEntry> entries, double lipschitz_bound)
    : covering_(std::move(covering)),
      row_ptr_(std::move(row_ptr)),
      entries_(std::move(entries)),
      lipschitz_bound_(lipschitz_bound) {}

double PartitionOfUnity::phi(std::size_t x, std::size_t i) const {
  for (const auto& e : row(x)) {
    if (e.ball == i) return e.weight;
  }
  return 0.0;
}

PartitionOfUnity partition_of_unity(const MetricMeasureSpace& space, const BallCovering& covering) {
  const double r = covering.r;
  auto dist_to_core = [&](std::size_t i, std::size_t x) {
    return kernels::masked_min(space.row(x), space.row(covering.centers[i]), r);
  };
  // d(x, B_i) < r forces d(x, center_i) < 2r
  auto candidates = [&](std::size_t i) { return covering.doubled[i].indices; };
  return build_tents(space, covering, r, dist_to_core, candidates);
}

PartitionOfUnity tent_partition(const MetricMeasureSpace& space, const BallCovering& covering,
                                const std::vector<WeightedSubset>& cores, double falloff) {
  if (cores.size() != covering.centers.size()) {
    throw std::invalid_argument("one core per ball is required");
  }
  if (!(falloff > 0.0)) throw std::invalid_argument("tent falloff must be positive");
  auto dist_to_core = [&](std::size_t i, std::size_t x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y : cores[i].indices) best = std::min(best, space.distance(x, y));
    return best;
  };
  std::vector<std::size_t> all(space.size());
  for (std::size_t x = 0; x < all.size(); ++x) all[x] = x;
  auto candidates = [&](std::size_t) { return all; };
  return build_tents(space, covering, falloff, dist_to_core, candidates);
}

std::vector<InvariantCheck> check_partition(const MetricMeasureSpace& space,
                                            const PartitionOfUnity& pou) {
  const auto& cov = pou.covering();
  const std::size_t n = space.size();
  InvariantCheck rows{"row_sums", true, {}}, support{"support", true, {}}, lower{"lower_bound", true, {}}, lip{"lipschitz", true, {}};
  auto fail = [](InvariantCheck& c, const std::string& msg) {
    if (c.passed) {
      c.passed = false;
      c.witness = msg;
    }
  };

  std::vector<double> dense(n * cov.centers.size(), 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (const auto& e : pou.row(x)) {
      dense[x * cov.centers.size() + e.ball] = e.weight;
      sum += e.weight;
      if (e.weight < 0.0 || e.weight > 1.0) fail(rows, "weight outside [0,1] at " + std::to_string(x));
      if (space.distance(x, cov.centers[e.ball]) >= 2.0 * cov.r && e.weight != 0.0) {
        fail(support, "point " + std::to_string(x) + ", ball " + std::to_string(e.ball));
      }
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "point " << x << " sums to " << sum;
      fail(rows, os.str());
    }
  }
  const double floor = 1.0 / static_cast<double>(cov.overlap_K);
  for (std::size_t i = 0; i < cov.centers.size(); ++i) {
    for (std::size_t x : cov.balls[i].indices) {
      if (dense[x * cov.centers.size() + i] < floor * (1.0 - 1e-12)) {
        fail(lower, "point " + std::to_string(x) + ", ball " + std::to_string(i));
      }
    }
  }
  const double L = pou.lipschitz_bound();
  for (std::size_t x = 0; x < n && lip.passed; ++x) {
    for (std::size_t y = x + 1; y < n && lip.passed; ++y) {
      const double bound = L * space.distance(x, y) * (1.0 + 1e-12) + 1e-15;
      for (std::size_t i = 0; i < cov.centers.size(); ++i) {
        const double diff =
            std::fabs(dense[x * cov.centers.size() + i] - dense[y * cov.centers.size() + i]);
        if (diff > bound) {
          fail(lip, "points (" + std::to_string(x) + "," + std::to_string(y) + "), ball " +
                        std::to_string(i));
          break;
        }
      }
    }
  }
  return {rows, support, lower, lip};
}

ScaleLadder::ScaleLadder(const MetricMeasureSpace& space, ScaleRange range)
    : space_(space), range_(range) {}

ScaleLadder::ScaleLadder(const MetricMeasureSpace& space) : ScaleLadder(space, scale_range(space)) {}

const PartitionOfUnity& ScaleLadder::at(int k) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return *it->second;
  }
  const double r = ScaleRange::radius(k);
  auto built = std::make_shared<const PartitionOfUnity>(
      partition_of_unity(space_, build_covering(space_, r)));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = cache_.emplace(k, std::move(built));
  return *it->second;
}

}  // namespace hajlasz
