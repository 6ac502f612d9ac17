#include <cmath>
#include <random>

#include "doctest.h"
#include "hajlasz/oracle.hpp"
#include "suites.hpp"

using namespace hajlasz;
using namespace hajlasz::oracle;
using hajlasz::testing::below;
using hajlasz::testing::random_space;
using hajlasz::testing::unit;

TEST_CASE("Lemke on a hand-solved QP") {
  // min (z0 - 1)^2 + (z1 - 2)^2 - 5 s.t. z0 + z1 >= 4: optimum (1.5, 2.5), value 0.5 - 5
  QuadraticProgram qp(2);
  qp.h(0, 0) = 2;
  qp.h(1, 1) = 2;
  qp.f = {-2, -4};
  qp.c0 = 5 - 5;
  qp.add_row({{0, 1.0}, {1, 1.0}}, 4.0);
  const auto s = solve_lemke(qp);
  CHECK(s.z[0] == doctest::Approx(1.5));
  CHECK(s.z[1] == doctest::Approx(2.5));
  CHECK(s.value == doctest::Approx(-4.5));
  CHECK(solve_enumeration(qp).value == doctest::Approx(-4.5));
}

TEST_CASE("Lemke solves LPs and stops on unbounded ones") {
  QuadraticProgram lp(2);
  lp.f = {1, 3};
  lp.add_row({{0, 1.0}, {1, 1.0}}, 2.0);
  CHECK(solve_lemke(lp).value == doctest::Approx(2.0));
  QuadraticProgram ray(1);
  ray.f = {-1};
  CHECK_THROWS(solve_lemke(ray));
}

TEST_CASE("Lemke agrees with active-set enumeration on random QPs") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + below(rng, 5), m = 1 + below(rng, 5);
    QuadraticProgram qp(n);
    // H = B'B is positive semidefinite, singular when B has fewer rows
    const std::size_t rank = below(rng, n + 1);
    std::vector<double> B(rank * n);
    for (auto& x : B) x = 2 * unit(rng) - 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < rank; ++r) qp.h(i, j) += B[r * n + i] * B[r * n + j];
      }
    }
    for (auto& f : qp.f) f = unit(rng);  // nonnegative keeps the problem bounded
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<std::pair<std::size_t, double>> terms;
      for (std::size_t j = 0; j < n; ++j) terms.push_back({j, unit(rng)});
      qp.add_row(terms, unit(rng));
    }
    const auto a = solve_lemke(qp);
    const auto b = solve_enumeration(qp);
    CHECK(qp.feasible(a.z, 1e-9));
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("vertices of a triangle") {
  QuadraticProgram qp(2);
  qp.add_row({{0, -1.0}, {1, -1.0}}, -1.0);  // z0 + z1 <= 1
  const auto v = enumerate_vertices(qp);
  CHECK(v.size() == 3);
}

TEST_CASE("oracle methods agree on random seminorms") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 40; ++t) {
    // enumeration is exponential in variables plus rows; the joint
    // Triebel-Lizorkin programs only fit on three points
    const Flavor f = t % 2 == 0 ? Flavor::Besov : (t % 4 == 1 ? Flavor::Hajlasz : Flavor::TriebelLizorkin);
    const auto sp = random_space(rng, f == Flavor::TriebelLizorkin ? 3 : 3 + below(rng, 3));
    std::vector<double> vals(sp.size());
    for (auto& x : vals) x = unit(rng);
    const FunctionOnSpace u(vals);
    for (double p : {1.0, 2.0}) {
      for (double q : {1.0, 2.0, kInf}) {
        if (f == Flavor::TriebelLizorkin && p == 1.0 && q == 2.0) continue;  // pivoting only
        const NormParams params(0.5, p, q, f);
        const double a = oracle_min_norm(sp, u, params).seminorm;
        const double b = oracle_min_norm(sp, u, params, OracleMethod::Enumeration).seminorm;
        CHECK(a == doctest::Approx(b).epsilon(1e-7));
      }
    }
  }
  const auto big = random_space(rng, 13);
  CHECK_THROWS(oracle_min_norm(big, FunctionOnSpace(std::vector<double>(13, 0.0)),
                               NormParams(0.5, 1, 1, Flavor::Besov)));
  const auto small = random_space(rng, 4);
  CHECK_THROWS(oracle_min_norm(small, FunctionOnSpace({0, 1, 2, 3}), NormParams(0.5, 1.5, 1, Flavor::Besov)));
}

TEST_CASE("solver and oracle agree at the acceptance settings on a small batch") {
  const auto r = hajlasz::testing::solver_oracle_suite(20, 77);
  CHECK_MESSAGE(r.seminorm.passed, r.seminorm.failure);
  CHECK_MESSAGE(r.capacity.passed, r.capacity.failure);
}
