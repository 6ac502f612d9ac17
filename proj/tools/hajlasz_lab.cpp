// hajlasz-lab: command-line front end for the library.
//
// Exit codes: 0 when every assertion holds, 2 when one fails, 1 on usage or
// input errors. `--config file.json` supplies any flag of a subcommand as a
// JSON key; flags given on the command line take precedence. For
// `experiment` the JSON is an experiment config instead.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hajlasz/capacity.hpp"
#include "hajlasz/covering.hpp"
#include "hajlasz/harness.hpp"
#include "hajlasz/median.hpp"
#include "hajlasz/norms.hpp"
#include "hajlasz/parallel.hpp"
#include "hajlasz/smoothing.hpp"
#include "hajlasz/space.hpp"

namespace {

using namespace hajlasz;
using json = nlohmann::json;

constexpr int kExitFail = 2;
constexpr int kExitUsage = 1;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// JSON array, or numbers separated by commas / whitespace; a non-numeric
// first line is treated as a header and the last column is taken.
std::vector<double> read_values(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') return json::parse(text).get<std::vector<double>>();
  std::vector<double> v;
  std::istringstream lines(text);
  std::string line;
  bool first_line = true;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream cs(line);
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    try {
      if (cells.size() > 1) {
        v.push_back(std::stod(cells.back()));
      } else {
        std::istringstream ws(line);
        double x;
        std::size_t got = 0;
        while (ws >> x) {
          v.push_back(x);
          ++got;
        }
        if (got == 0) throw std::invalid_argument("header");
      }
    } catch (const std::invalid_argument&) {
      if (!first_line) throw UsageError("bad number in '" + path + "': " + line);
    }
    first_line = false;
  }
  return v;
}

void write_to(const std::string& path, const Table& t) {
  if (path.empty() || path == "-") {
    t.write_csv(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  t.write_csv(out);
}

struct SpaceArgs {
  std::string file;
  void add(CLI::App* app) { app->add_option("--space", file, "space JSON file")->required(); }
  MetricMeasureSpace load() const { return load_space(file); }
};

struct FunctionArgs {
  std::string values;
  FunctionSpec spec;
  std::string family;
  void add(CLI::App* app) {
    app->add_option("--values", values, "values file (JSON array or CSV)");
    app->add_option("--function", family, "linear|sin|holder|spike|random-piecewise|constant");
    app->add_option("--beta", spec.beta, "holder exponent");
    app->add_option("--knots", spec.knots, "random-piecewise knot count");
    app->add_option("--function-seed", spec.seed, "random-piecewise seed");
  }
  FunctionOnSpace load(const MetricMeasureSpace& space) {
    if (!values.empty() && !family.empty()) throw UsageError("give either --values or --function");
    if (!family.empty()) {
      spec.family = family;
      return make_function(space, spec);
    }
    if (values.empty()) throw UsageError("one of --values or --function is required");
    auto v = read_values(values);
    if (v.size() != space.size()) {
      throw UsageError("values file has " + std::to_string(v.size()) + " entries for a space of " +
                       std::to_string(space.size()) + " points");
    }
    return FunctionOnSpace(std::move(v));
  }
};

struct ParamArgs {
  double s = 0.5, p = 2.0;
  std::string q = "2", flavor = "besov";
  void add(CLI::App* app) {
    app->add_option("--s", s, "smoothness in (0,1]")->capture_default_str();
    app->add_option("--p", p, "integrability exponent")->capture_default_str();
    app->add_option("--q", q, "summability exponent or 'inf'")->capture_default_str();
    app->add_option("--flavor", flavor, "besov|tl|hajlasz")->capture_default_str();
  }
  NormParams get() const {
    const double qv = (q == "inf" || q == "infinity") ? kInf : std::stod(q);
    return NormParams(s, p, qv, parse_flavor(flavor));
  }
};

// "all", "0,3,5" or "ball:center:radius"
WeightedSubset parse_subset(const MetricMeasureSpace& space, const std::string& spec) {
  if (spec == "all") return whole_space(space);
  if (spec.rfind("ball:", 0) == 0) {
    const auto rest = spec.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw UsageError("ball subset needs ball:center:radius");
    return ball(space, std::stoul(rest.substr(0, colon)), std::stod(rest.substr(colon + 1)));
  }
  std::vector<std::size_t> idx;
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) idx.push_back(std::stoul(tok));
  }
  return make_subset(space, std::move(idx));
}

Table function_table(const FunctionOnSpace& f, const std::string& name) {
  Table t;
  t.header = {"x", name};
  for (std::size_t x = 0; x < f.size(); ++x) t.rows.push_back({std::to_string(x), format_number(f[x])});
  return t;
}

// Turns the JSON object in `--config file` into flags placed before the
// user's own, so the command line wins under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  if (args.size() < 2 || args[1] == "experiment") return args;
  for (std::size_t j = 2; j + 1 < args.size(); ++j) {
    if (args[j] != "--config") continue;
    const json cfg = json::parse(read_file(args[j + 1]));
    if (!cfg.is_object()) throw UsageError("--config must hold a JSON object");
    std::vector<std::string> flags;
    for (const auto& [key, value] : cfg.items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) flags.push_back("--" + key);
        continue;
      }
      flags.push_back("--" + key);
      flags.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    args.erase(args.begin() + static_cast<long>(j), args.begin() + static_cast<long>(j) + 2);
    args.insert(args.begin() + 2, flags.begin(), flags.end());
    break;
  }
  return args;
}

int run(int argc, char** argv) {
  CLI::App app{"Finite metric measure space laboratory for median smoothing, fractional gradients and capacities", "hajlasz-lab"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_unused;
  int status = 0;

  // gen-space
  auto* gen = app.add_subcommand("gen-space", "generate a space and write it as JSON");
  std::string kind = "grid1d", gen_out, doubling_out;
  std::size_t n = 16, dim = 2;
  std::uint64_t seed = 1;
  double alpha = 1.0;
  std::string base_kind = "grid1d";
  gen->add_option("--kind", kind, "grid1d|grid2d|random_points|snowflake")->capture_default_str();
  gen->add_option("--n", n, "points (per side for grid2d)")->capture_default_str();
  gen->add_option("--dim", dim, "dimension for random_points")->capture_default_str();
  gen->add_option("--seed", seed, "seed for random_points")->capture_default_str();
  gen->add_option("--alpha", alpha, "snowflake exponent in (0,1]")->capture_default_str();
  gen->add_option("--base", base_kind, "base generator of a snowflake")->capture_default_str();
  gen->add_option("--out", gen_out, "space JSON output (stdout when absent)");
  gen->add_option("--doubling-out", doubling_out, "CSV of doubling witnesses");
  gen->add_option("--config", config_unused, "JSON file of flags");
  gen->callback([&] {
    auto make = [&](const std::string& k) -> GeneratorSpec {
      if (k == "grid1d") return {Grid1d{n}};
      if (k == "grid2d") return {Grid2d{n}};
      if (k == "random_points") return {RandomPoints{n, dim, seed}};
      throw UsageError("unknown space kind '" + k + "'");
    };
    GeneratorSpec spec = kind == "snowflake"
                             ? GeneratorSpec{Snowflake{std::make_shared<const GeneratorSpec>(make(base_kind)), alpha}}
                             : make(kind);
    const auto space = generate(spec);
    const auto report = validate(space);
    const auto doubling = estimate_doubling(space);
    if (gen_out.empty()) {
      std::cout << space_to_json_text(space) << '\n';
    } else {
      save_space(gen_out, space);
    }
    if (!doubling_out.empty()) {
      std::ofstream out(doubling_out);
      if (!out) throw UsageError("cannot write '" + doubling_out + "'");
      write_doubling_csv(out, doubling);
    }
    std::cerr << "n=" << space.size() << " diameter=" << format_number(space.diameter())
              << " c_d=" << format_number(doubling.c_d) << " Q=" << format_number(doubling.Q)
              << " valid=" << (report.ok() ? "true" : "false") << '\n';
    if (!report.ok()) status = kExitFail;
  });

  // median
  auto* med = app.add_subcommand("median", "gamma-median (and average) of a function over a subset");
  SpaceArgs med_space;
  FunctionArgs med_fn;
  std::string med_subset = "all";
  double med_gamma = 0.5;
  med_space.add(med);
  med_fn.add(med);
  med->add_option("--subset", med_subset, "all | i,j,k | ball:center:radius")->capture_default_str();
  med->add_option("--gamma", med_gamma, "gamma in (0,1/2]")->capture_default_str();
  med->add_option("--config", config_unused, "JSON file of flags");
  med->callback([&] {
    const auto space = med_space.load();
    const auto u = med_fn.load(space);
    const auto A = parse_subset(space, med_subset);
    std::cout << "median=" << format_number(gamma_median(space, u, A, GammaParam(med_gamma)))
              << " average=" << format_number(integral_average(space, u, A)) << " mass="
              << format_number(A.total_mass) << '\n';
  });

  // covering
  auto* cov = app.add_subcommand("covering", "greedy covering, partition of unity and its invariant checks");
  SpaceArgs cov_space;
  double cov_r = 0.25;
  std::string cov_out;
  cov_space.add(cov);
  cov->add_option("--r", cov_r, "ball radius")->capture_default_str();
  cov->add_option("--out", cov_out, "CSV dump of phi (point, ball, weight)");
  cov->add_option("--config", config_unused, "JSON file of flags");
  cov->callback([&] {
    const auto space = cov_space.load();
    const auto pou = partition_of_unity(space, build_covering(space, cov_r));
    const auto& c = pou.covering();
    std::cout << "centers=";
    for (std::size_t j = 0; j < c.centers.size(); ++j) std::cout << (j ? " " : "") << c.centers[j];
    std::cout << "\noverlap_K=" << c.overlap_K << "\nlipschitz_bound=" << format_number(pou.lipschitz_bound())
              << '\n';
    for (const auto& chk : check_partition(space, pou)) {
      std::cout << chk.name << '=' << (chk.passed ? "pass" : "fail");
      if (!chk.passed) {
        std::cout << " (" << chk.witness << ')';
        status = kExitFail;
      }
      std::cout << '\n';
    }
    if (!cov_out.empty()) {
      Table t;
      t.header = {"point", "ball", "weight"};
      for (std::size_t x = 0; x < pou.num_points(); ++x) {
        for (const auto& e : pou.row(x)) {
          t.rows.push_back({std::to_string(x), std::to_string(e.ball), format_number(e.weight)});
        }
      }
      write_to(cov_out, t);
    }
  });

  // smooth
  auto* sm = app.add_subcommand("smooth", "convolutions and maximal operators");
  SpaceArgs sm_space;
  FunctionArgs sm_fn;
  std::string sm_op = "median-convolution", sm_out;
  double sm_gamma = 0.5, sm_r = 0.25, sm_R = kInf;
  int k_min = 0, k_max = 0;
  bool k_set = false;
  sm_space.add(sm);
  sm_fn.add(sm);
  sm->add_option("--op", sm_op,
                 "convolution|median-convolution|median-maximal|discrete-median-maximal|hl-maximal|restricted-maximal")
      ->capture_default_str();
  sm->add_option("--gamma", sm_gamma, "gamma in (0,1/2]")->capture_default_str();
  sm->add_option("--r", sm_r, "scale for the convolutions")->capture_default_str();
  sm->add_option("--R", sm_R, "radius bound for restricted-maximal");
  auto* kmin_opt = sm->add_option("--k-min", k_min, "finest-to-coarsest scale range for discrete-median-maximal");
  auto* kmax_opt = sm->add_option("--k-max", k_max, "");
  sm->add_option("--out", sm_out, "CSV output (stdout when absent)");
  sm->add_option("--config", config_unused, "JSON file of flags");
  sm->callback([&] {
    const auto space = sm_space.load();
    const auto u = sm_fn.load(space);
    k_set = kmin_opt->count() > 0 || kmax_opt->count() > 0;
    FunctionOnSpace out;
    if (sm_op == "convolution") {
      out = discrete_convolution(space, u, partition_of_unity(space, build_covering(space, sm_r)));
    } else if (sm_op == "median-convolution") {
      out = discrete_median_convolution(space, u, partition_of_unity(space, build_covering(space, sm_r)),
                                        GammaParam(sm_gamma));
    } else if (sm_op == "median-maximal") {
      out = median_maximal(space, u, GammaParam(sm_gamma));
    } else if (sm_op == "discrete-median-maximal") {
      ScaleRange range = scale_range(space);
      if (k_set) {
        if (kmin_opt->count()) range.k_min = k_min;
        if (kmax_opt->count()) range.k_max = k_max;
        if (range.k_min > range.k_max) throw UsageError("--k-min exceeds --k-max");
      }
      out = discrete_median_maximal(space, u, GammaParam(sm_gamma), range);
    } else if (sm_op == "hl-maximal") {
      out = hl_maximal(space, u);
    } else if (sm_op == "restricted-maximal") {
      out = restricted_maximal(space, u, sm_R);
    } else {
      throw UsageError("unknown operator '" + sm_op + "'");
    }
    write_to(sm_out, function_table(out, sm_op));
  });

  // norm
  auto* nm = app.add_subcommand("norm", "minimum-norm fractional gradient and full norm");
  SpaceArgs nm_space;
  FunctionArgs nm_fn;
  ParamArgs nm_params;
  std::string nm_out;
  nm_space.add(nm);
  nm_fn.add(nm);
  nm_params.add(nm);
  nm->add_option("--out", nm_out, "CSV dump of the optimal gradient (k, point, g)");
  nm->add_option("--config", config_unused, "JSON file of flags");
  nm->callback([&] {
    const auto space = nm_space.load();
    const auto u = nm_fn.load(space);
    const auto params = nm_params.get();
    const auto r = min_norm_gradient(space, u, params);
    const double lp = lp_norm(space, u, params.p);
    std::cout << "seminorm=" << format_number(r.seminorm) << "\nlp=" << format_number(lp)
              << "\nfull_norm=" << format_number(lp + r.seminorm) << "\ncertificate=" << to_string(r.certificate.mode)
              << "\nmethod=" << r.certificate.method << "\nresidual=" << format_number(r.certificate.residual)
              << '\n';
    if (!nm_out.empty()) {
      Table t;
      t.header = {"k", "point", "g"};
      for (int k = r.gradient.scales.k_min; k <= r.gradient.scales.k_max; ++k) {
        const auto& g = r.gradient.at(k);
        for (std::size_t x = 0; x < g.size(); ++x) {
          if (g[x] != 0.0) t.rows.push_back({std::to_string(k), std::to_string(x), format_number(g[x])});
        }
      }
      write_to(nm_out, t);
    }
  });

  // capacity
  auto* cap = app.add_subcommand("capacity", "capacity of a subset with its witness function");
  SpaceArgs cap_space;
  ParamArgs cap_params;
  std::string cap_subset, cap_out;
  bool cap_oracle = false;
  cap_space.add(cap);
  cap_params.add(cap);
  cap->add_option("--subset", cap_subset, "i,j,k | ball:center:radius | all")->required();
  cap->add_flag("--oracle", cap_oracle, "also compute the exact small-instance value; exit 2 on mismatch");
  cap->add_option("--out", cap_out, "CSV of the witness u");
  cap->add_option("--config", config_unused, "JSON file of flags");
  cap->callback([&] {
    const auto space = cap_space.load();
    const CapacityProblem pb(space, parse_subset(space, cap_subset), cap_params.get());
    const auto r = capacity(pb);
    std::cout << "capacity=" << format_number(r.value) << "\ncertificate=" << to_string(r.certificate.mode)
              << "\nwitness=";
    for (std::size_t x = 0; x < r.u.size(); ++x) std::cout << (x ? " " : "") << format_number(r.u[x]);
    std::cout << '\n';
    if (cap_oracle) {
      const double o = capacity_oracle(pb);
      const double rel = std::fabs(r.value - o) / std::max(o, 1e-300);
      std::cout << "oracle=" << format_number(o) << "\nrelative_difference=" << format_number(rel) << '\n';
      if (rel > 1e-4) status = kExitFail;
    }
    if (!cap_out.empty()) write_to(cap_out, function_table(r.u, "u"));
  });

  // subadd
  auto* sub = app.add_subcommand("subadd", "r-subadditivity of capacities on random families");
  SubadditivityConfig sub_cfg;
  std::string sub_flavor = "besov", sub_out;
  sub->add_option("--trials", sub_cfg.trials, "families")->capture_default_str();
  sub->add_option("--n-min", sub_cfg.n_min, "smallest space")->capture_default_str();
  sub->add_option("--n-max", sub_cfg.n_max, "largest space")->capture_default_str();
  sub->add_option("--seed", sub_cfg.seed, "seed")->capture_default_str();
  sub->add_option("--s", sub_cfg.s, "smoothness")->capture_default_str();
  sub->add_option("--flavor", sub_flavor, "besov|tl")->capture_default_str();
  sub->add_option("--out", sub_out, "CSV output (stdout when absent)");
  sub->add_option("--config", config_unused, "JSON file of flags");
  sub->callback([&] {
    sub_cfg.flavor = parse_flavor(sub_flavor);
    if (sub_cfg.flavor == Flavor::Hajlasz) throw UsageError("subadd takes besov or tl");
    const auto rep = r_subadditivity_check(sub_cfg);
    write_to(sub_out, to_table(rep));
    std::cerr << "max ratio/bound=" << format_number(rep.max_ratio_over_bound)
              << (rep.passed ? " PASS" : " FAIL") << '\n';
    if (!rep.passed) status = kExitFail;
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "run a named experiment and check its assertions");
  std::string ex_config, ex_name, ex_out;
  bool ex_timing = false;
  ex->add_option("--config", ex_config, "experiment config JSON");
  ex->add_option("--name", ex_name,
                 "convergence|counterexample|maximal_boundedness|weak_type|subadditivity (default settings)");
  ex->add_option("--out", ex_out, "CSV output (stdout when absent)");
  ex->add_flag("--timing", ex_timing, "add wall-clock columns (breaks byte-identical output)");
  ex->callback([&] {
    if (ex_config.empty() == ex_name.empty()) throw UsageError("give exactly one of --config or --name");
    ExperimentConfig cfg = ex_config.empty() ? default_config(ex_name) : config_from_json_text(read_file(ex_config));
    if (!ex_out.empty()) cfg.out = ex_out;
    if (ex_timing) cfg.timing = true;
    const auto out = run_experiment(cfg);
    write_to(cfg.out, out.table);
    for (const auto& v : out.verdicts) {
      std::cerr << (v.passed ? "PASS " : "FAIL ") << v.name << ' ' << v.detail << '\n';
    }
    if (!out.passed()) status = kExitFail;
  });

  std::vector<std::string> args(argv, argv + argc);
  args = expand_config(std::move(args));
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
