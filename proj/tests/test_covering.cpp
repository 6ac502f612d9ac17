#include <random>
#include <variant>

#include "doctest.h"
#include "hajlasz/covering.hpp"
#include "suites.hpp"

using namespace hajlasz;
using hajlasz::testing::partition_suite;
using hajlasz::testing::path_space;

namespace {

bool all_pass(const std::vector<InvariantCheck>& checks) {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("greedy covering of the 5-point path") {
  const auto path = path_space(5);
  CHECK(build_covering(path, 1.0).centers == std::vector<std::size_t>{0, 1, 2, 3, 4});
  const auto c = build_covering(path, 2.5);
  CHECK(c.centers == std::vector<std::size_t>{0, 3});
  CHECK(c.balls[0].indices == std::vector<std::size_t>{0, 1, 2});
  CHECK(c.balls[1].indices == std::vector<std::size_t>{1, 2, 3, 4});
  const auto big = build_covering(path, 10.0);
  CHECK(big.centers == std::vector<std::size_t>{0});
  CHECK(big.overlap_K == 1);
  CHECK_THROWS(build_covering(path, 0.0));
}

TEST_CASE("prescribed centers must cover") {
  const auto path = path_space(5);
  CHECK_THROWS(covering_from_centers(path, {0}, 1.5));
  CHECK(covering_from_centers(path, {1, 3}, 1.5).overlap_K == 2);
}

TEST_CASE("tent partition on the 5-point path") {
  const auto path = path_space(5);
  const auto pou = partition_of_unity(path, build_covering(path, 2.5));
  CHECK(pou.phi(4, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(pou.phi(4, 1) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  // d(0, B_1) = 1 so both tents are positive at 0
  CHECK(pou.phi(0, 1) > 0.0);
  CHECK(pou.phi(0, 0) + pou.phi(0, 1) == doctest::Approx(1.0));
  CHECK(all_pass(check_partition(path, pou)));
  CHECK(pou.lipschitz_bound() == doctest::Approx(double(pou.covering().overlap_K + 1) / 2.5));
}

TEST_CASE("single ball gives the constant partition") {
  const auto path = path_space(6);
  const auto pou = partition_of_unity(path, build_covering(path, 100.0));
  for (std::size_t x = 0; x < 6; ++x) CHECK(pou.phi(x, 0) == 1.0);
}

TEST_CASE("lone tents equal one") {
  // clusters far apart relative to r: each point sees one ball only
  const auto sp = euclidean_space({{0.0}, {0.1}, {10.0}, {10.1}}, {1, 1, 1, 1});
  const auto pou = partition_of_unity(sp, build_covering(sp, 1.0));
  CHECK(pou.phi(1, 0) == 1.0);
  CHECK(pou.phi(3, 1) == 1.0);
  CHECK(pou.phi(3, 0) == 0.0);
}

TEST_CASE("covering invariants on grids") {
  for (const auto& spec : {GeneratorSpec{Grid1d{65}}, GeneratorSpec{Grid2d{9}}, GeneratorSpec{Grid2d{17}}}) {
    const auto sp = generate(spec);
    // In the plane a centre of a 3x3 block of net points already lies in nine
    // doubled balls, so 8 is out of reach. Disjoint discs of radius r/2 around
    // centres within 2r of x fit in a disc of radius 5r/2, hence at most 25.
    const bool planar = std::holds_alternative<Grid2d>(spec.kind);
    const std::size_t bound = planar ? 25 : 8;
    const auto range = scale_range(sp);
    std::size_t prev = 0;
    for (int k = range.k_min; k <= range.k_max; ++k) {
      const double r = ScaleRange::radius(k);
      const auto cov = build_covering(sp, r);
      CHECK(cov.overlap_K <= bound);
      CHECK(cov.centers.size() >= prev);
      prev = cov.centers.size();
      for (std::size_t a = 0; a < cov.centers.size(); ++a) {
        for (std::size_t b = a + 1; b < cov.centers.size(); ++b) {
          CHECK(sp.distance(cov.centers[a], cov.centers[b]) >= r);
        }
      }
      std::size_t K = 0;
      for (std::size_t x = 0; x < sp.size(); ++x) {
        std::size_t m = 0;
        for (const auto& d : cov.doubled) m += d.contains(x);
        K = std::max(K, m);
      }
      CHECK(K == cov.overlap_K);
      CHECK(all_pass(check_partition(sp, partition_of_unity(sp, cov))));
    }
  }
}

TEST_CASE("scale ladder caches per scale") {
  const auto sp = generate({Grid1d{33}});
  const ScaleLadder ladder(sp);
  const auto& a = ladder.at(ladder.range().k_min);
  const auto& b = ladder.at(ladder.range().k_min);
  CHECK(&a == &b);
}

TEST_CASE("partition invariants on random spaces") {
  const auto r = partition_suite(10, 23);
  CHECK_MESSAGE(r.passed, r.failure);
  CHECK(r.checked == 30);
}
