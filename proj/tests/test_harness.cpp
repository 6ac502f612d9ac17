#include <cmath>
#include <sstream>

#include "doctest.h"
#include "hajlasz/harness.hpp"

using namespace hajlasz;

namespace {

std::string csv(const Table& t) {
  std::ostringstream out;
  t.write_csv(out);
  return out.str();
}

ExperimentConfig small_convergence() {
  auto c = default_config("convergence");
  c.space = {Grid1d{129}};
  c.scales = {2, 3, 4};
  return c;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(kInf) == "inf");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("CSV tables") {
  Table t;
  t.header = {"a", "b"};
  t.rows = {{"1", "x"}, {"2", "y"}};
  CHECK(csv(t) == "a,b\n1,x\n2,y\n");
}

TEST_CASE("function families") {
  const auto sp = generate({Grid1d{5}});
  CHECK(make_function(sp, {"linear"}).vec() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(make_function(sp, {"spike"}).vec() == std::vector<double>{0, 0, 1, 0, 0});
  CHECK(make_function(sp, {"constant"}).vec() == std::vector<double>(5, 1.0));
  CHECK(make_function(sp, {"holder", 0.5}).vec()[1] == 0.5);
  CHECK(make_function(sp, {"sin"}).vec()[1] == doctest::Approx(1.0));
  FunctionSpec rp{"random-piecewise", 0.5, 5, 3};
  const auto a = make_function(sp, rp), b = make_function(sp, rp);
  CHECK(a.vec() == b.vec());
  for (double v : a.values()) CHECK(std::fabs(v) <= 1.0);
  rp.seed = 4;
  CHECK(make_function(sp, rp).vec() != a.vec());
  CHECK_THROWS(make_function(sp, {"bogus"}));
}

TEST_CASE("config parsing") {
  const auto c = config_from_json_text(R"({"experiment": "convergence", "space": {"kind": "grid1d", "n": 65},
      "function": {"family": "linear"}, "params": {"s": 0.25, "p": 1, "q": "inf", "flavor": "triebel-lizorkin"},
      "gammas": [0.125, 0.5], "scales": [2, 3], "modes": ["median", "mean"], "seed": 9})");
  CHECK(std::get<Grid1d>(c.space.kind).n == 65);
  CHECK(c.function.family == "linear");
  CHECK(c.params.s == 0.25);
  CHECK(std::isinf(c.params.q));
  CHECK(c.params.flavor == Flavor::TriebelLizorkin);
  CHECK(c.gammas == std::vector<double>{0.125, 0.5});
  CHECK(c.modes.size() == 2);
  CHECK(c.seed == 9);
  CHECK_THROWS(config_from_json_text(R"({"experiment": "convergence", "typo": 1})"));
  CHECK_THROWS(config_from_json_text(R"({"experiment": "nonsense"})"));
  const auto s = config_from_json_text(
      R"({"experiment": "weak_type", "space": {"kind": "snowflake", "alpha": 0.5, "base": {"kind": "grid1d", "n": 9}}})");
  CHECK(std::get<Snowflake>(s.space.kind).alpha == 0.5);
}

TEST_CASE("constant functions have zero convergence error") {
  auto c = small_convergence();
  c.function.family = "constant";
  c.modes = {SmoothingMode::Median, SmoothingMode::Mean};
  const auto r = run_convergence(c);
  CHECK(r.rows.size() == 6);
  for (const auto& row : r.rows) CHECK(row.error_norm == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("convergence rows decompose and the output is deterministic") {
  auto c = small_convergence();
  c.modes = {SmoothingMode::Median, SmoothingMode::Mean};
  c.gammas = {0.25, 0.5};
  const auto a = run_experiment(c);
  const auto b = run_experiment(c);
  CHECK(csv(a.table) == csv(b.table));
  const auto r = run_convergence(c);
  CHECK(r.rows.size() == 9);
  CHECK(r.verdicts.size() == 3);
  for (const auto& row : r.rows) {
    CHECK(row.error_norm == doctest::Approx(row.lp_part + row.seminorm_part).epsilon(1e-12));
    CHECK(row.certificate == CertificateMode::Certified);
  }
  CHECK(csv(a.table).find("wall_time") == std::string::npos);
}

TEST_CASE("scales below eight grid spacings are skipped") {
  auto c = small_convergence();
  c.scales = {2, 4};
  c.space = {Grid1d{65}};  // spacing 1/64: 2^-4 < 8/64
  const auto r = run_convergence(c);
  CHECK(r.skipped_scales == std::vector<int>{4});
  c.scales = {40};
  CHECK_THROWS(run_convergence(c));
}

TEST_CASE("counterexample partition") {
  const auto sp = generate({Grid1d{257}});
  const auto pou = counterexample_partition(sp, 2);
  CHECK(pou.num_balls() == 5);
  for (std::size_t x = 0; x < sp.size(); ++x) {
    double sum = 0.0;
    for (const auto& e : pou.row(x)) sum += e.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  // 0.0625 is within 2^-4 of centre 0, inside its core
  CHECK(pou.phi(16, 0) == 1.0);
  // 0.125 sits halfway between the cores of centres 0 and 0.25
  CHECK(pou.phi(32, 0) == doctest::Approx(0.5));
}

TEST_CASE("small counterexample run holds its bound") {
  auto c = default_config("counterexample");
  c.scales = {2};
  c.p_values = {1.0};
  c.contrast = false;
  const auto r = run_counterexample(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].seminorm >= r.rows[0].bound);
  CHECK(r.rows[0].bound == doctest::Approx(0.225));
  CHECK(r.rows[0].seminorm == doctest::Approx(0.45375122589925376).epsilon(1e-6));
}

TEST_CASE("maximal boundedness of constants and rescaled functions") {
  auto c = default_config("maximal_boundedness");
  c.sizes = {32};
  c.functions = 2;
  c.function.family = "constant";
  const auto r = run_maximal_boundedness(c);
  for (const auto& row : r.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-9));

  c.function.family = "random-piecewise";
  const auto a = run_maximal_boundedness(c);
  c.seed = 1;
  const auto b = run_maximal_boundedness(c);
  CHECK(csv(to_table(a)) == csv(to_table(b)));
}

TEST_CASE("weak-type experiment on small grids") {
  auto c = default_config("weak_type");
  c.sizes = {6, 8};
  const auto r = run_weak_type(c);
  CHECK(r.max_ratio.size() == 2);
  for (const auto& row : r.rows) {
    CHECK(std::isfinite(row.R));
    CHECK(row.R >= 0.0);
  }
}

TEST_CASE("experiment dispatch") {
  auto c = default_config("subadditivity");
  c.trials = 4;
  const auto out = run_experiment(c);
  CHECK(out.table.rows.size() == 8);
  CHECK(out.passed());
  c.experiment = "nonsense";
  CHECK_THROWS(run_experiment(c));
}
