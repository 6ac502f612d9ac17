#pragma once
// Scale-r ball coverings and tent partitions of unity subordinate to them.

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "hajlasz/space.hpp"

namespace hajlasz {

struct BallCovering {
  double r = 0.0;
  std::vector<std::size_t> centers;
  std::vector<WeightedSubset> balls;    // B(center_i, r)
  std::vector<WeightedSubset> doubled;  // B(center_i, 2r)
  std::size_t overlap_K = 0;            // max_x #{i : x in 2B_i}
};

// Greedy r-net in ascending index order: x becomes a center iff it is at
// distance >= r from every earlier center.
BallCovering build_covering(const MetricMeasureSpace& space, double r);
// Covering with prescribed centers; throws if the balls miss a point.
BallCovering covering_from_centers(const MetricMeasureSpace& space,
                                   std::vector<std::size_t> centers, double r);

struct PartitionEntry {
  std::size_t ball;
  double weight;
};

// phi stored by point (CSR); only nonzero weights are kept.
class PartitionOfUnity {
 public:
  PartitionOfUnity(BallCovering covering, std::vector<std::size_t> row_ptr,
                   std::vector<PartitionEntry> entries, double lipschitz_bound);

  const BallCovering& covering() const { return covering_; }
  std::size_t num_points() const { return row_ptr_.size() - 1; }
  std::size_t num_balls() const { return covering_.centers.size(); }
  std::span<const PartitionEntry> row(std::size_t x) const {
    return {entries_.data() + row_ptr_[x], row_ptr_[x + 1] - row_ptr_[x]};
  }
  double phi(std::size_t x, std::size_t i) const;
  double lipschitz_bound() const { return lipschitz_bound_; }

 private:
  BallCovering covering_;
  std::vector<std::size_t> row_ptr_;
  std::vector<PartitionEntry> entries_;
  double lipschitz_bound_;
};

// psi_i(x) = max(0, 1 - d(x, B_i)/r), phi_i = psi_i / sum_j psi_j.
// Lipschitz bound (K + 1)/r.
PartitionOfUnity partition_of_unity(const MetricMeasureSpace& space, const BallCovering& covering);

// Same normalised tent construction with arbitrary cores and falloff length:
// psi_i(x) = max(0, 1 - d(x, core_i)/falloff). Every point must have a
// positive tent.
PartitionOfUnity tent_partition(const MetricMeasureSpace& space, const BallCovering& covering,
                                const std::vector<WeightedSubset>& cores, double falloff);

// Row sums, support inside 2B_i, phi >= 1/K on B_i, Lipschitz bound; all
// exhaustive over points and pairs.
std::vector<InvariantCheck> check_partition(const MetricMeasureSpace& space,
                                            const PartitionOfUnity& pou);

// Lazily built covering + partition for each dyadic scale of a space.
// Thread-safe; entries are immutable once built.
class ScaleLadder {
 public:
  ScaleLadder(const MetricMeasureSpace& space, ScaleRange range);
  explicit ScaleLadder(const MetricMeasureSpace& space);

  const MetricMeasureSpace& space() const { return space_; }
  const ScaleRange& range() const { return range_; }
  const PartitionOfUnity& at(int k) const;

 private:
  const MetricMeasureSpace& space_;
  ScaleRange range_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::shared_ptr<const PartitionOfUnity>> cache_;
};

}  // namespace hajlasz
