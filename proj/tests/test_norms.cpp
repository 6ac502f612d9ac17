#include <cmath>
#include <random>

#include "doctest.h"
#include "hajlasz/norms.hpp"
#include "hajlasz/oracle.hpp"
#include "suites.hpp"

using namespace hajlasz;
using hajlasz::testing::below;
using hajlasz::testing::besov_decoupling_suite;
using hajlasz::testing::lattice_suite;
using hajlasz::testing::path_space;
using hajlasz::testing::random_space;
using hajlasz::testing::sup_suite;
using hajlasz::testing::two_point_space;
using hajlasz::testing::unit;

namespace {

FunctionOnSpace random_values(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = 2.0 * unit(rng) - 1.0;
  return FunctionOnSpace(std::move(v));
}

const Flavor kFlavors[] = {Flavor::Besov, Flavor::TriebelLizorkin, Flavor::Hajlasz};

}  // namespace

TEST_CASE("band index") {
  CHECK(band_index(1.0) == -1);
  CHECK(band_index(2.0) == -2);
  CHECK(band_index(0.5) == 0);
  CHECK(band_index(0.75) == 0);
  CHECK(band_index(0.4999) == 1);
}

TEST_CASE("pair bands") {
  const auto two = pair_bands(two_point_space(1.0), FunctionOnSpace({0.25, 1.0}), 0.5);
  REQUIRE(two.size() == 1);
  CHECK(two[0].k == -1);
  CHECK(two[0].pairs[0].c == 0.75);

  const auto path = path_space(3);
  const auto bands = pair_bands(path, FunctionOnSpace({0, 1, 2}), 1.0);
  REQUIRE(bands.size() == 2);
  CHECK(bands[0].k == -2);
  CHECK(bands[0].pairs.size() == 1);
  CHECK(bands[1].k == -1);
  CHECK(bands[1].pairs.size() == 2);

  for (const auto& b : pair_bands(path, FunctionOnSpace({3, 3, 3}), 0.5)) {
    for (const auto& pc : b.pairs) CHECK(pc.c == 0.0);
  }
}

TEST_CASE("feasibility and the canonical gradient") {
  const auto sp = two_point_space(1.0);
  const FunctionOnSpace flat({1, 1}), step({0, 1});
  const FractionalGradient zero(scale_range(sp), 2);
  CHECK(is_feasible(zero, pair_bands(sp, flat, 0.5)));
  CHECK_FALSE(is_feasible(zero, pair_bands(sp, step, 0.5)));

  const auto g = canonical_gradient(sp, step, 0.7);
  CHECK(g.at(-1) == std::vector<double>{0.5, 0.5});
  for (const auto& gk : canonical_gradient(sp, flat, 0.7).g) {
    for (double v : gk) CHECK(v == 0.0);
  }

  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const auto space = random_space(rng, 2 + below(rng, 12));
    const auto u = random_values(rng, space.size());
    const double s = 0.1 + 0.9 * unit(rng);
    CHECK(is_feasible(canonical_gradient(space, u, s), pair_bands(space, u, s)));
  }
}

TEST_CASE("aggregate norm") {
  const auto sp = two_point_space(1.0);
  const auto g = canonical_gradient(sp, FunctionOnSpace({0, 1}), 1.0);
  for (Flavor f : kFlavors) {
    CHECK(aggregate_norm(g, NormParams(1.0, 2.0, 2.0, f), sp) == doctest::Approx(std::sqrt(0.5)));
    CHECK(aggregate_norm(g, NormParams(1.0, 1.0, 1.0, f), sp) == doctest::Approx(1.0));
  }
  const FractionalGradient zero(scale_range(sp), 2);
  CHECK(aggregate_norm(zero, NormParams(1.0, 2.0, 2.0, Flavor::Besov), sp) == 0.0);

  // two active bands: l^q of band norms vs L^p of pointwise l^q
  const auto path = path_space(3);
  FractionalGradient h(scale_range(path), 3);
  h.at(-1) = {1, 0, 0};
  h.at(-2) = {0, 0, 1};
  CHECK(aggregate_norm(h, NormParams(1, 2, 1, Flavor::Besov), path) == doctest::Approx(2.0));
  CHECK(aggregate_norm(h, NormParams(1, 2, 1, Flavor::TriebelLizorkin), path) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(aggregate_norm(h, NormParams(1, 1, kInf, Flavor::Besov), path) == doctest::Approx(1.0));
  CHECK(aggregate_norm(h, NormParams(1, 1, kInf, Flavor::TriebelLizorkin), path) == doctest::Approx(2.0));
}

TEST_CASE("two-point minimum norms") {
  const auto sp = two_point_space(1.0);
  const FunctionOnSpace u({0, 1});
  for (Flavor f : kFlavors) {
    for (double q : {1.0, 2.0, kInf}) {
      const auto r1 = min_norm_gradient(sp, u, NormParams(0.5, 1.0, q, f));
      CHECK(r1.seminorm == doctest::Approx(1.0).epsilon(1e-7));
      CHECK(r1.certificate.mode == CertificateMode::Certified);
      const auto r2 = min_norm_gradient(sp, u, NormParams(0.5, 2.0, q, f));
      CHECK(r2.seminorm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
      CHECK(r2.gradient.at(-1)[0] == doctest::Approx(0.5).epsilon(1e-6));
      CHECK(r2.gradient.at(-1)[1] == doctest::Approx(0.5).epsilon(1e-6));
      CHECK(oracle_min_norm(sp, u, NormParams(0.5, 2.0, q, f)).seminorm ==
            doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    }
    CHECK(min_norm_gradient(sp, FunctionOnSpace({2, 2}), NormParams(0.5, 2.0, 2.0, f)).seminorm == 0.0);
  }
}

TEST_CASE("three-point path oracle value") {
  // per-band L^1 problems: g_1 = 1 covers both unit pairs, the distance-2 pair costs 1
  const auto path = path_space(3);
  const FunctionOnSpace u({0, 1, 2});
  const NormParams params(1.0, 1.0, 1.0, Flavor::Besov);
  CHECK(oracle_min_norm(path, u, params).seminorm == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(oracle_min_norm(path, u, params, OracleMethod::Enumeration).seminorm ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(min_norm_gradient(path, u, params).seminorm == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("full norm") {
  const auto sp = two_point_space(1.0);
  const NormParams params(0.5, 2.0, 2.0, Flavor::Besov);
  CHECK(full_norm(sp, FunctionOnSpace({0, 0}), params) == 0.0);
  CHECK(full_norm(sp, FunctionOnSpace({0, 1}), params) == doctest::Approx(1.0 + std::sqrt(0.5)).epsilon(1e-7));
  std::mt19937_64 rng(3);
  const auto space = random_space(rng, 8);
  const auto u = random_values(rng, 8);
  std::vector<double> scaled(u.vec());
  for (auto& v : scaled) v *= 3.5;
  for (Flavor f : kFlavors) {
    const NormParams pr(0.6, 1.5, 2.0, f);
    CHECK(full_norm(space, FunctionOnSpace(scaled), pr) ==
          doctest::Approx(3.5 * full_norm(space, u, pr)).epsilon(1e-6));
  }
}

TEST_CASE("solver never exceeds the canonical gradient and matches the oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const auto space = random_space(rng, 3 + below(rng, 6));
    const auto u = random_values(rng, space.size());
    const double s = 0.25 + 0.75 * unit(rng);
    const auto canon = canonical_gradient(space, u, s);
    for (Flavor f : kFlavors) {
      for (double p : {1.0, 2.0}) {
        for (double q : {1.0, 2.0, kInf}) {
          const NormParams params(s, p, q, f);
          const auto r = min_norm_gradient(space, u, params);
          CHECK(is_feasible(r.gradient, pair_bands(space, u, s)));
          CHECK(r.seminorm <= aggregate_norm(canon, params, space) * (1 + 1e-9));
          const double orc = oracle_min_norm(space, u, params).seminorm;
          CHECK(r.seminorm == doctest::Approx(orc).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("Hajlasz norm equals the Triebel-Lizorkin q = inf norm") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const auto space = random_space(rng, 3 + below(rng, 8));
    const auto u = random_values(rng, space.size());
    for (double p : {1.0, 1.5, 2.0}) {
      const double h = min_norm_gradient(space, u, NormParams(0.5, p, kInf, Flavor::Hajlasz)).seminorm;
      const double tl = min_norm_gradient(space, u, NormParams(0.5, p, kInf, Flavor::TriebelLizorkin)).seminorm;
      CHECK(h == doctest::Approx(tl).epsilon(1e-6));
    }
  }
}

TEST_CASE("Besov seminorm decreases in q") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto space = random_space(rng, 3 + below(rng, 8));
    const auto u = random_values(rng, space.size());
    double prev = kInf;
    for (double q : {1.0, 1.5, 2.0, 4.0, kInf}) {
      const double v = min_norm_gradient(space, u, NormParams(0.5, 2.0, q, Flavor::Besov)).seminorm;
      CHECK(v <= prev * (1 + 1e-7));
      prev = v;
    }
  }
}

TEST_CASE("sub-one exponents are labelled upper bounds") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    const auto space = random_space(rng, 3 + below(rng, 4));
    const auto u = random_values(rng, space.size());
    for (Flavor f : kFlavors) {
      const NormParams params(0.5, 0.5, f == Flavor::Besov ? 2.0 : 0.5, f);
      CHECK_FALSE(params.certified());
      const auto r = min_norm_gradient(space, u, params);
      CHECK(r.certificate.mode == CertificateMode::UpperBoundOnly);
      CHECK(is_feasible(r.gradient, pair_bands(space, u, 0.5)));
      CHECK(r.seminorm <= aggregate_norm(canonical_gradient(space, u, 0.5), params, space) * (1 + 1e-12));
      // concave objective: the best vertex is the global minimum
      if (f != Flavor::TriebelLizorkin) CHECK(r.seminorm >= vertex_min_norm(space, u, params) * (1 - 1e-9));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(NormParams(0.0, 1.0, 1.0, Flavor::Besov));
  CHECK_THROWS(NormParams(1.5, 1.0, 1.0, Flavor::Besov));
  CHECK_THROWS(NormParams(0.5, 0.0, 1.0, Flavor::Besov));
  CHECK(NormParams(0.5, 1.0, 0.5, Flavor::Hajlasz).q == kInf);
  CHECK(NormParams(0.5, 1.0, 0.5, Flavor::Besov).certified());
  CHECK_FALSE(NormParams(0.5, 1.0, 0.5, Flavor::TriebelLizorkin).certified());
  CHECK(parse_flavor(to_string(Flavor::TriebelLizorkin)) == Flavor::TriebelLizorkin);
  CHECK_THROWS(parse_flavor("sobolev"));
}

TEST_CASE("Besov decoupling, lattice and sup properties on small batches") {
  const auto d = besov_decoupling_suite(15, 31);
  CHECK_MESSAGE(d.passed, d.failure);
  const auto l = lattice_suite(100, 32);
  CHECK_MESSAGE(l.passed, l.failure);
  const auto s = sup_suite(50, 33);
  CHECK_MESSAGE(s.passed, s.failure);
}
