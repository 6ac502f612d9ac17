#include "hajlasz/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "hajlasz/parallel.hpp"
#include "hajlasz/smoothing.hpp"

namespace hajlasz {

using json = nlohmann::json;

void Table::write_csv(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j) out << ',';
      out << cells[j];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string yes_no(bool b) { return b ? "true" : "false"; }

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

double coordinate(const MetricMeasureSpace& space, std::size_t x) {
  if (!space.points().empty()) return space.points()[x].at(0);
  return space.size() > 1 ? static_cast<double>(x) / static_cast<double>(space.size() - 1) : 0.0;
}

MetricMeasureSpace resolve_space(const ExperimentConfig& config) {
  return config.space_file ? load_space(*config.space_file) : generate(config.space);
}

FunctionOnSpace difference(const FunctionOnSpace& a, const FunctionOnSpace& b) {
  std::vector<double> v(a.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = a[x] - b[x];
  return FunctionOnSpace(std::move(v));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (!(v[j] < v[j - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t j = 0; j < v.size(); ++j) s += (j ? " " : "") + format_number(v[j]);
  return s;
}

Verdict spread_verdict(const std::string& name, const std::vector<std::pair<std::size_t, double>>& per_n,
                       double factor) {
  Verdict v{name, true, {}};
  if (per_n.empty()) return v;
  double lo = kInf, hi = 0.0;
  for (const auto& [n, r] : per_n) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  v.passed = lo > 0.0 && std::isfinite(hi) && hi < factor * lo;
  v.detail = "max/min=" + format_number(hi / lo) + " limit=" + format_number(factor);
  return v;
}

GeneratorSpec generator_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "grid1d") return {Grid1d{j.at("n").get<std::size_t>()}};
  if (kind == "grid2d") return {Grid2d{j.at("n").get<std::size_t>()}};
  if (kind == "random_points") {
    return {RandomPoints{j.at("n").get<std::size_t>(), j.value("dim", std::size_t{2}),
                         j.value("seed", std::uint64_t{1})}};
  }
  if (kind == "snowflake") {
    return {Snowflake{std::make_shared<const GeneratorSpec>(generator_from_json(j.at("base"))),
                      j.at("alpha").get<double>()}};
  }
  throw std::invalid_argument("unknown space kind '" + kind + "'");
}

double exponent_from_json(const json& j) {
  if (j.is_null()) return kInf;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInf;
    return std::stod(s);
  }
  return j.get<double>();
}

SmoothingMode parse_mode(const std::string& s) {
  if (s == "median") return SmoothingMode::Median;
  if (s == "mean") return SmoothingMode::Mean;
  throw std::invalid_argument("unknown smoothing mode '" + s + "'");
}

}  // namespace

FunctionOnSpace make_function(const MetricMeasureSpace& space, const FunctionSpec& spec) {
  const std::size_t n = space.size();
  std::vector<double> v(n, 0.0);
  const auto& f = spec.family;
  if (f == "constant") {
    std::fill(v.begin(), v.end(), 1.0);
  } else if (f == "linear") {
    for (std::size_t x = 0; x < n; ++x) v[x] = coordinate(space, x);
  } else if (f == "sin") {
    for (std::size_t x = 0; x < n; ++x) v[x] = std::sin(2.0 * std::numbers::pi * coordinate(space, x));
  } else if (f == "holder") {
    if (!(spec.beta > 0.0)) throw std::invalid_argument("holder exponent must be positive");
    for (std::size_t x = 0; x < n; ++x) v[x] = std::pow(std::fabs(coordinate(space, x)), spec.beta);
  } else if (f == "spike") {
    v[n / 2] = 1.0;
  } else if (f == "random-piecewise") {
    if (spec.knots < 2) throw std::invalid_argument("random-piecewise needs at least 2 knots");
    std::mt19937_64 rng(spec.seed);
    std::vector<double> knot(spec.knots);
    for (double& k : knot) k = 2.0 * unit_double(rng) - 1.0;
    const double segs = static_cast<double>(spec.knots - 1);
    for (std::size_t x = 0; x < n; ++x) {
      const double t = std::clamp(coordinate(space, x), 0.0, 1.0) * segs;
      const std::size_t j = std::min(static_cast<std::size_t>(t), spec.knots - 2);
      const double w = t - static_cast<double>(j);
      v[x] = (1.0 - w) * knot[j] + w * knot[j + 1];
    }
  } else {
    throw std::invalid_argument("unknown function family '" + f + "'");
  }
  return FunctionOnSpace(std::move(v));
}

std::string to_string(SmoothingMode m) { return m == SmoothingMode::Median ? "median" : "mean"; }

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (experiment == "convergence") {
    c.space = {Grid1d{1024}};
    c.function.family = "sin";
    c.scales = {2, 3, 4, 5, 6};
    c.modes = {SmoothingMode::Median, SmoothingMode::Mean};
  } else if (experiment == "counterexample") {
    c.space = {Grid1d{257}};
    c.function.family = "linear";
    c.params = NormParams(1.0, 1.0, kInf, Flavor::Hajlasz);
    c.scales = {2, 3, 4};
    c.modes = {SmoothingMode::Median};
  } else if (experiment == "maximal_boundedness") {
    c.function.family = "random-piecewise";
    c.sizes = {64, 128, 256};
  } else if (experiment == "weak_type") {
    c.sizes = {6, 8, 10, 12};
  } else if (experiment == "subadditivity") {
    c.params = NormParams(0.5, 1.0, 1.0, Flavor::Besov);
  } else {
    throw std::invalid_argument("unknown experiment '" + experiment + "'");
  }
  return c;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  ExperimentConfig c = default_config(j.value("experiment", std::string("convergence")));
  static const std::set<std::string> known{"experiment", "space", "space_file", "function",
                                           "params", "gamma", "gammas", "scales", "modes",
                                           "p_values", "sizes", "functions", "trials", "seed",
                                           "contrast", "out", "timing"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (j.contains("space")) c.space = generator_from_json(j["space"]);
  if (j.contains("space_file")) c.space_file = j["space_file"].get<std::string>();
  if (j.contains("function")) {
    const auto& f = j["function"];
    if (f.is_string()) {
      c.function.family = f.get<std::string>();
    } else {
      c.function.family = f.value("family", c.function.family);
      c.function.beta = f.value("beta", c.function.beta);
      c.function.knots = f.value("knots", c.function.knots);
      c.function.seed = f.value("seed", c.function.seed);
    }
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    const Flavor fl = p.contains("flavor") ? parse_flavor(p["flavor"].get<std::string>()) : c.params.flavor;
    c.params = NormParams(p.value("s", c.params.s), p.value("p", c.params.p),
                          p.contains("q") ? exponent_from_json(p["q"]) : c.params.q, fl);
  }
  if (j.contains("gamma")) c.gammas = {j["gamma"].get<double>()};
  if (j.contains("gammas")) c.gammas = j["gammas"].get<std::vector<double>>();
  for (double g : c.gammas) (void)GammaParam(g);
  if (j.contains("scales")) c.scales = j["scales"].get<std::vector<int>>();
  if (j.contains("modes")) {
    c.modes.clear();
    for (const auto& m : j["modes"]) c.modes.push_back(parse_mode(m.get<std::string>()));
  }
  if (j.contains("p_values")) c.p_values = j["p_values"].get<std::vector<double>>();
  if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::size_t>>();
  c.functions = j.value("functions", c.functions);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  c.contrast = j.value("contrast", c.contrast);
  c.out = j.value("out", c.out);
  c.timing = j.value("timing", c.timing);
  return c;
}

bool ExperimentOutput::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

// ---------------------------------------------------------------- convergence

ConvergenceResult run_convergence(const ExperimentConfig& config) {
  const MetricMeasureSpace space = resolve_space(config);
  const FunctionOnSpace u = make_function(space, config.function);
  const ScaleRange range = scale_range(space);
  const double spacing = space.min_positive_distance();
  ConvergenceResult res;

  std::vector<int> scales;
  for (int i : config.scales) {
    if (i < range.k_min || i > range.k_max) {
      throw std::invalid_argument("scale " + std::to_string(i) + " outside the space's scale range");
    }
    if (ScaleRange::radius(i) < 8.0 * spacing) {
      res.skipped_scales.push_back(i);
    } else {
      scales.push_back(i);
    }
  }
  std::vector<std::unique_ptr<PartitionOfUnity>> pous(scales.size());
  parallel_for(scales.size(), [&](std::size_t j) {
    const double r = ScaleRange::radius(scales[j]);
    pous[j] = std::make_unique<PartitionOfUnity>(partition_of_unity(space, build_covering(space, r)));
  });

  struct Job {
    SmoothingMode mode;
    double gamma;
    std::size_t scale;
  };
  std::vector<Job> jobs;
  for (auto mode : config.modes) {
    // mean convolutions do not depend on gamma
    const std::vector<double> gammas = mode == SmoothingMode::Mean ? std::vector<double>{config.gammas.front()}
                                                                   : config.gammas;
    for (double g : gammas) {
      for (std::size_t j = 0; j < scales.size(); ++j) jobs.push_back({mode, g, j});
    }
  }
  res.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t t) {
    const auto& job = jobs[t];
    const auto t0 = std::chrono::steady_clock::now();
    const FunctionOnSpace approx = job.mode == SmoothingMode::Median
                                       ? discrete_median_convolution(space, u, *pous[job.scale], GammaParam(job.gamma))
                                       : discrete_convolution(space, u, *pous[job.scale]);
    const auto rep = full_norm_report(space, difference(u, approx), config.params);
    auto& row = res.rows[t];
    row.mode = job.mode;
    row.gamma = job.gamma;
    row.i = scales[job.scale];
    row.lp_part = rep.lp;
    row.seminorm_part = rep.seminorm;
    row.error_norm = rep.total;
    row.certificate = rep.certificate.mode;
    row.wall_time = seconds_since(t0);
  });

  for (std::size_t start = 0; start < res.rows.size(); start += scales.size()) {
    const auto& first = res.rows[start];
    std::vector<double> errors;
    bool certified = true;
    for (std::size_t j = 0; j < scales.size(); ++j) {
      errors.push_back(res.rows[start + j].error_norm);
      certified = certified && res.rows[start + j].certificate == CertificateMode::Certified;
    }
    Verdict v;
    v.name = "convergence/" + to_string(first.mode) +
             (first.mode == SmoothingMode::Median ? "/gamma=" + format_number(first.gamma) : "");
    v.passed = certified && errors.size() >= 2 && strictly_decreasing(errors) &&
               errors.back() <= 0.5 * errors.front();
    v.detail = "errors=" + join(errors) + (certified ? "" : " (upper bounds only)");
    res.verdicts.push_back(std::move(v));
  }
  return res;
}

// ------------------------------------------------------------- counterexample

PartitionOfUnity counterexample_partition(const MetricMeasureSpace& space, int i) {
  if (i < 0) throw std::invalid_argument("counterexample scale must be nonnegative");
  const double h = ScaleRange::radius(i);
  const std::size_t balls = (std::size_t{1} << i) + 1;
  std::vector<std::size_t> centers;
  for (std::size_t j = 0; j < balls; ++j) {
    const double target = static_cast<double>(j) * h;
    std::size_t best = 0;
    for (std::size_t x = 1; x < space.size(); ++x) {
      if (std::fabs(coordinate(space, x) - target) < std::fabs(coordinate(space, best) - target)) best = x;
    }
    if (std::fabs(coordinate(space, best) - target) > 1e-12) {
      throw std::invalid_argument("grid has no point at j 2^-i; use n - 1 divisible by 2^i");
    }
    centers.push_back(best);
  }
  BallCovering cov = covering_from_centers(space, centers, h);
  std::vector<WeightedSubset> cores;
  for (std::size_t c : centers) cores.push_back(ball(space, c, h / 4.0));
  return tent_partition(space, cov, cores, h / 2.0);
}

CounterexampleResult run_counterexample(const ExperimentConfig& config) {
  const MetricMeasureSpace space = resolve_space(config);
  if (space.points().empty() || space.points().front().size() != 1) {
    throw std::invalid_argument("counterexample needs a one-dimensional grid");
  }
  const FunctionOnSpace u = make_function(space, config.function);
  const double spacing = space.min_positive_distance();
  for (int i : config.scales) {
    if (spacing > ScaleRange::radius(i + 4) * (1.0 + 1e-12)) {
      throw std::invalid_argument("grid spacing exceeds 2^-(i+4) at i = " + std::to_string(i));
    }
  }
  std::vector<std::unique_ptr<PartitionOfUnity>> pous(config.scales.size());
  for (std::size_t j = 0; j < config.scales.size(); ++j) {
    pous[j] = std::make_unique<PartitionOfUnity>(counterexample_partition(space, config.scales[j]));
  }
  auto approx = [&](SmoothingMode mode, double gamma, std::size_t j) {
    return mode == SmoothingMode::Median ? discrete_median_convolution(space, u, *pous[j], GammaParam(gamma))
                                         : discrete_convolution(space, u, *pous[j]);
  };

  struct Job {
    bool contrast;
    SmoothingMode mode;
    double gamma;
    double p;
    std::size_t scale;
  };
  std::vector<Job> jobs;
  for (double p : config.p_values) {
    for (auto mode : config.modes) {
      const std::vector<double> gammas = mode == SmoothingMode::Mean ? std::vector<double>{config.gammas.front()}
                                                                     : config.gammas;
      for (double g : gammas) {
        for (std::size_t j = 0; j < config.scales.size(); ++j) jobs.push_back({false, mode, g, p, j});
      }
    }
  }
  if (config.contrast) {
    for (std::size_t j = 0; j < config.scales.size(); ++j) {
      jobs.push_back({true, SmoothingMode::Median, config.gammas.front(), 2.0, j});
    }
  }
  CounterexampleResult res;
  res.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t t) {
    const auto& job = jobs[t];
    const auto t0 = std::chrono::steady_clock::now();
    const FunctionOnSpace w = difference(u, approx(job.mode, job.gamma, job.scale));
    const NormParams params = job.contrast ? NormParams(0.5, 2.0, 2.0, Flavor::Besov)
                                           : NormParams(config.params.s, job.p, kInf, Flavor::Hajlasz);
    const auto r = min_norm_gradient(space, w, params);
    auto& row = res.rows[t];
    row.norm = job.contrast ? "besov-contrast" : "hajlasz";
    row.mode = job.mode;
    row.p = job.p;
    row.i = config.scales[job.scale];
    row.seminorm = r.seminorm;
    row.bound = job.contrast ? 0.0 : 0.9 * 0.5 * std::pow(0.5, 1.0 / job.p);
    row.certificate = r.certificate.mode;
    row.wall_time = seconds_since(t0);
  });

  const std::size_t per = config.scales.size();
  for (std::size_t start = 0; start < res.rows.size(); start += per) {
    const auto& first = res.rows[start];
    const auto& job = jobs[start];
    std::vector<double> values;
    bool ok = per > 0, certified = true;
    for (std::size_t j = 0; j < per; ++j) {
      const auto& row = res.rows[start + j];
      values.push_back(row.seminorm);
      ok = ok && (first.norm != "hajlasz" || row.seminorm >= row.bound);
      certified = certified && row.certificate == CertificateMode::Certified;
    }
    Verdict v;
    if (first.norm == "hajlasz") {
      v.name = "counterexample/" + to_string(first.mode) + "/p=" + format_number(first.p) +
               (first.mode == SmoothingMode::Median ? "/gamma=" + format_number(job.gamma) : "");
      v.passed = ok && certified;
      v.detail = "seminorms=" + join(values) + " bound=" + format_number(first.bound);
    } else {
      v.name = "counterexample/besov-contrast";
      v.passed = certified && strictly_decreasing(values);
      v.detail = "seminorms=" + join(values);
    }
    res.verdicts.push_back(std::move(v));
  }
  return res;
}

// -------------------------------------------------------- maximal boundedness

StabilityResult run_maximal_boundedness(const ExperimentConfig& config) {
  const GammaParam gamma(config.gammas.front());
  StabilityResult res;
  struct Job {
    std::size_t size_index;
    std::size_t function;
  };
  std::vector<MetricMeasureSpace> spaces;
  for (std::size_t n : config.sizes) spaces.push_back(generate({Grid1d{n}}));
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    for (std::size_t f = 0; f < config.functions; ++f) jobs.push_back({s, f});
  }
  res.rows.resize(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t t) {
    const auto& space = spaces[jobs[t].size_index];
    FunctionSpec spec = config.function;
    spec.seed = config.seed + jobs[t].function;
    const FunctionOnSpace u = make_function(space, spec);
    const FunctionOnSpace M = discrete_median_maximal(space, u, gamma, scale_range(space));
    const auto a = full_norm_report(space, u, config.params);
    const auto b = full_norm_report(space, M, config.params);
    auto& row = res.rows[t];
    row.n = space.size();
    row.function = jobs[t].function;
    row.norm_u = a.total;
    row.norm_maximal = b.total;
    row.ratio = b.total / a.total;
    row.certificate = a.certificate.mode == CertificateMode::Certified && b.certificate.mode == CertificateMode::Certified
                          ? CertificateMode::Certified
                          : CertificateMode::UpperBoundOnly;
  });
  bool certified = true;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    double mx = 0.0;
    for (std::size_t t = 0; t < jobs.size(); ++t) {
      if (jobs[t].size_index == s) {
        mx = std::max(mx, res.rows[t].ratio);
        certified = certified && res.rows[t].certificate == CertificateMode::Certified;
      }
    }
    res.max_ratio.push_back({config.sizes[s], mx});
  }
  Verdict v = spread_verdict("maximal_boundedness", res.max_ratio, 2.0);
  v.passed = v.passed && certified;
  res.verdicts.push_back(std::move(v));
  return res;
}

// ----------------------------------------------------------------- weak type

WeakTypeResult run_weak_type(const ExperimentConfig& config) {
  const GammaParam gamma(config.gammas.front());
  std::vector<FunctionSpec> family;
  for (const char* name : {"spike", "linear", "sin", "holder"}) {
    FunctionSpec f = config.function;
    f.family = name;
    family.push_back(f);
  }
  for (std::uint64_t r = 0; r < 4; ++r) {
    FunctionSpec f = config.function;
    f.family = "random-piecewise";
    f.seed = config.seed + r;
    family.push_back(f);
  }
  std::vector<MetricMeasureSpace> spaces;
  for (std::size_t n : config.sizes) spaces.push_back(generate({Grid1d{n}}));
  WeakTypeResult res;
  res.rows.resize(spaces.size() * family.size());
  parallel_for(res.rows.size(), [&](std::size_t t) {
    const auto& space = spaces[t / family.size()];
    const auto& spec = family[t % family.size()];
    const auto rep = weak_type_ratio(space, make_function(space, spec), config.params, gamma);
    auto& row = res.rows[t];
    row.n = space.size();
    row.function = spec.family == "random-piecewise" ? spec.family + "-" + std::to_string(spec.seed) : spec.family;
    row.norm = rep.norm;
    row.R = rep.R;
    row.certificate = rep.mode;
  });
  bool certified = true;
  for (std::size_t s = 0; s < spaces.size(); ++s) {
    double mx = 0.0;
    for (std::size_t f = 0; f < family.size(); ++f) {
      const auto& row = res.rows[s * family.size() + f];
      mx = std::max(mx, row.R);
      certified = certified && row.certificate == CertificateMode::Certified;
    }
    res.max_ratio.push_back({config.sizes[s], mx});
  }
  Verdict v = spread_verdict("weak_type", res.max_ratio, 4.0);
  v.passed = v.passed && certified;
  res.verdicts.push_back(std::move(v));
  return res;
}

// ------------------------------------------------------------- subadditivity

SubadditivityResult run_subadditivity(const ExperimentConfig& config) {
  SubadditivityResult res;
  for (Flavor fl : {Flavor::Besov, Flavor::TriebelLizorkin}) {
    SubadditivityConfig sc;
    sc.trials = config.trials;
    sc.seed = config.seed;
    sc.flavor = fl;
    sc.s = config.params.s;
    auto rep = r_subadditivity_check(sc);
    std::size_t flagged = 0;
    for (const auto& r : rep.rows) flagged += r.flagged ? 1 : 0;
    Verdict v;
    v.name = "subadditivity/" + to_string(fl);
    v.passed = rep.passed;
    v.detail = "max ratio/bound=" + format_number(rep.max_ratio_over_bound) +
               (fl == Flavor::TriebelLizorkin ? " flagged=" + std::to_string(flagged) : "");
    res.verdicts.push_back(std::move(v));
    res.reports.push_back(std::move(rep));
  }
  return res;
}

// ------------------------------------------------------------------- tables

Table to_table(const ConvergenceResult& r, bool timing) {
  Table t;
  t.header = {"mode", "gamma", "i", "error_norm", "lp_part", "seminorm_part", "certificate"};
  if (timing) t.header.push_back("wall_time");
  for (const auto& row : r.rows) {
    t.rows.push_back({to_string(row.mode), row.mode == SmoothingMode::Median ? format_number(row.gamma) : "",
                      std::to_string(row.i), format_number(row.error_norm), format_number(row.lp_part),
                      format_number(row.seminorm_part), to_string(row.certificate)});
    if (timing) t.rows.back().push_back(format_number(row.wall_time));
  }
  return t;
}

Table to_table(const CounterexampleResult& r, bool timing) {
  Table t;
  t.header = {"norm", "mode", "p", "i", "seminorm", "bound", "certificate"};
  if (timing) t.header.push_back("wall_time");
  for (const auto& row : r.rows) {
    t.rows.push_back({row.norm, to_string(row.mode), format_number(row.p), std::to_string(row.i),
                      format_number(row.seminorm), row.bound > 0.0 ? format_number(row.bound) : "",
                      to_string(row.certificate)});
    if (timing) t.rows.back().push_back(format_number(row.wall_time));
  }
  return t;
}

Table to_table(const StabilityResult& r) {
  Table t;
  t.header = {"n", "function", "norm_u", "norm_maximal", "ratio", "certificate"};
  for (const auto& row : r.rows) {
    t.rows.push_back({std::to_string(row.n), std::to_string(row.function), format_number(row.norm_u),
                      format_number(row.norm_maximal), format_number(row.ratio), to_string(row.certificate)});
  }
  return t;
}

Table to_table(const WeakTypeResult& r) {
  Table t;
  t.header = {"n", "function", "norm", "R", "certificate"};
  for (const auto& row : r.rows) {
    t.rows.push_back({std::to_string(row.n), row.function, format_number(row.norm), format_number(row.R),
                      to_string(row.certificate)});
  }
  return t;
}

Table to_table(const SubadditivityReport& r) {
  Table t;
  t.header = {"flavor", "trial", "n", "sets", "p", "q", "union_capacity", "sum_capacity_r", "ratio", "bound",
              "within", "flagged"};
  for (const auto& row : r.rows) {
    t.rows.push_back({to_string(row.params.flavor), std::to_string(row.trial), std::to_string(row.n),
                      std::to_string(row.sets), format_number(row.params.p), format_number(row.params.q),
                      format_number(row.union_capacity), format_number(row.sum_capacity_r),
                      format_number(row.ratio), format_number(row.bound), yes_no(row.within),
                      yes_no(row.flagged)});
  }
  return t;
}

Table to_table(const SubadditivityResult& r) {
  Table t;
  for (const auto& rep : r.reports) {
    Table part = to_table(rep);
    t.header = part.header;
    t.rows.insert(t.rows.end(), part.rows.begin(), part.rows.end());
  }
  if (t.header.empty()) t = to_table(SubadditivityReport{});
  return t;
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
  ExperimentOutput out;
  const auto& e = config.experiment;
  if (config.gammas.empty()) throw std::invalid_argument("at least one gamma is required");
  if (e == "convergence") {
    auto r = run_convergence(config);
    out.table = to_table(r, config.timing);
    out.verdicts = std::move(r.verdicts);
  } else if (e == "counterexample") {
    auto r = run_counterexample(config);
    out.table = to_table(r, config.timing);
    out.verdicts = std::move(r.verdicts);
  } else if (e == "maximal_boundedness") {
    auto r = run_maximal_boundedness(config);
    out.table = to_table(r);
    out.verdicts = std::move(r.verdicts);
  } else if (e == "weak_type") {
    auto r = run_weak_type(config);
    out.table = to_table(r);
    out.verdicts = std::move(r.verdicts);
  } else if (e == "subadditivity") {
    auto r = run_subadditivity(config);
    out.table = to_table(r);
    out.verdicts = std::move(r.verdicts);
  } else {
    throw std::invalid_argument("unknown experiment '" + e + "'");
  }
  return out;
}

}  // namespace hajlasz
