#include "doctest.h"
#include "hajlasz/median.hpp"
#include "suites.hpp"

using namespace hajlasz;
using hajlasz::testing::median_property;
using hajlasz::testing::path_space;

TEST_CASE("median of a constant is the constant") {
  const auto sp = path_space(6);
  const FunctionOnSpace u(std::vector<double>(6, -2.5));
  for (double g : {0.01, 0.25, 0.5}) CHECK(gamma_median(sp, u, whole_space(sp), GammaParam(g)) == -2.5);
}

TEST_CASE("median of 1,2,3,4") {
  const auto sp = path_space(4);
  const FunctionOnSpace u({1, 2, 3, 4});
  const auto A = whole_space(sp);
  CHECK(gamma_median(sp, u, A, GammaParam(0.5)) == 3.0);
  CHECK(gamma_median(sp, u, A, GammaParam(0.25)) == 4.0);
  // order of the values does not matter
  const FunctionOnSpace v({4, 1, 3, 2});
  CHECK(gamma_median(sp, v, A, GammaParam(0.5)) == 3.0);
}

TEST_CASE("median uses the masses and ties merge") {
  const std::vector<double> vals{5, 1, 5, 2};
  const std::vector<double> mass{1, 4, 1, 1};
  // mass above 1 is 3 of 7; 3 < 3.5 so the half-median is 1
  CHECK(gamma_median(vals, mass, GammaParam(0.5)) == 1.0);
  // above 2 is 2 of 7 and 2 >= 7/4 fails the quarter threshold at 1 and 2
  CHECK(gamma_median(vals, mass, GammaParam(0.25)) == 5.0);
}

TEST_CASE("median over a singleton is the value") {
  const auto sp = path_space(5);
  const FunctionOnSpace u({3, -1, 4, 1, -5});
  for (std::size_t x = 0; x < 5; ++x) {
    for (double g : {0.1, 0.5}) CHECK(gamma_median(sp, u, ball(sp, x, 0.5), GammaParam(g)) == u[x]);
  }
}

TEST_CASE("gamma must lie in (0, 1/2]") {
  CHECK_THROWS_AS(GammaParam(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GammaParam(0.51), std::invalid_argument);
  CHECK_NOTHROW(GammaParam(0.5));
}

TEST_CASE("integral averages") {
  const MetricMeasureSpace sp({0, 1, 1, 0}, {1, 3});
  CHECK(integral_average(sp, FunctionOnSpace({0, 1}), whole_space(sp)) == 0.75);
  CHECK(integral_average(sp, FunctionOnSpace({2, 2}), whole_space(sp)) == 2.0);
  const auto path = path_space(8);
  CHECK(integral_average(path, FunctionOnSpace({1, 1, 1, 1, 0, 0, 0, 0}), whole_space(path)) == 0.5);
  CHECK(integral_average(path, FunctionOnSpace({1, 1, 1, 1, 0, 0, 0, 0}), make_subset(path, {2, 3, 4})) ==
        doctest::Approx(2.0 / 3.0));
}

TEST_CASE("median calculus properties on small random batches") {
  for (char p : std::string("abcdefgh")) {
    CAPTURE(p);
    const auto r = median_property(p, 200, 17);
    CHECK_MESSAGE(r.passed, r.failure);
    CHECK(r.checked > 0);
  }
}
