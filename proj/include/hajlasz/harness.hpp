#pragma once
// Experiment orchestration: named function families, experiment configs and
// the five desk-scale experiments, each producing a deterministic CSV table
// plus pass/fail verdicts.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hajlasz/capacity.hpp"
#include "hajlasz/covering.hpp"
#include "hajlasz/norms.hpp"
#include "hajlasz/space.hpp"

namespace hajlasz {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
};

// Shortest round-trip decimal; "inf" for infinities.
std::string format_number(double v);

// linear: x, sin: sin(2 pi x), holder: x^beta, spike: 1 at the middle point,
// random-piecewise: continuous piecewise-linear through `knots` equispaced
// values drawn from U(-1, 1), constant: 1. The coordinate x is the first
// coordinate of the space's points, or i/(n-1) for explicit metrics.
struct FunctionSpec {
  std::string family = "sin";
  double beta = 0.5;
  std::size_t knots = 8;
  std::uint64_t seed = 1;
};

FunctionOnSpace make_function(const MetricMeasureSpace& space, const FunctionSpec& spec);

enum class SmoothingMode { Median, Mean };
std::string to_string(SmoothingMode m);

struct ExperimentConfig {
  std::string experiment = "convergence";
  GeneratorSpec space{Grid1d{1024}};
  std::optional<std::string> space_file;
  FunctionSpec function;
  NormParams params{0.5, 2.0, 2.0, Flavor::Besov};
  std::vector<double> gammas{0.5};
  std::vector<int> scales;                 // i, with ball radius 2^-i
  std::vector<SmoothingMode> modes{SmoothingMode::Median};
  std::vector<double> p_values{1.0, 2.0};  // counterexample
  std::vector<std::size_t> sizes;          // grid sizes for the stability experiments
  std::size_t functions = 20;              // maximal_boundedness family size
  std::size_t trials = 200;                // subadditivity
  std::uint64_t seed = 1;
  bool contrast = true;                    // counterexample Besov contrast run
  std::string out;
  bool timing = false;
};

// Defaults for a named experiment, matching the acceptance settings.
ExperimentConfig default_config(const std::string& experiment);
// Keys override default_config(json["experiment"]); unknown keys are errors.
ExperimentConfig config_from_json_text(const std::string& text);

struct Verdict {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct ConvergenceRow {
  SmoothingMode mode = SmoothingMode::Median;
  double gamma = 0.5;
  int i = 0;
  double error_norm = 0.0;  // lp_part + seminorm_part
  double lp_part = 0.0;
  double seminorm_part = 0.0;
  CertificateMode certificate = CertificateMode::Certified;
  double wall_time = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::vector<int> skipped_scales;  // finer than 8 x grid spacing
  std::vector<Verdict> verdicts;
};

ConvergenceResult run_convergence(const ExperimentConfig& config);

struct CounterexampleRow {
  std::string norm;  // "hajlasz" or "besov-contrast"
  SmoothingMode mode = SmoothingMode::Median;
  double p = 1.0;
  int i = 0;
  double seminorm = 0.0;
  double bound = 0.0;  // 0 for contrast rows
  CertificateMode certificate = CertificateMode::Certified;
  double wall_time = 0.0;
};

struct CounterexampleResult {
  std::vector<CounterexampleRow> rows;
  std::vector<Verdict> verdicts;
};

// Covering {B(j 2^-i, 2^-i)} of [0,1] with tents equal to 1 on
// B(j 2^-i, 2^-i-2) and vanishing 2^-i-1 further out.
PartitionOfUnity counterexample_partition(const MetricMeasureSpace& space, int i);

CounterexampleResult run_counterexample(const ExperimentConfig& config);

struct MaximalRow {
  std::size_t n = 0;
  std::size_t function = 0;
  double norm_u = 0.0;
  double norm_maximal = 0.0;
  double ratio = 0.0;
  CertificateMode certificate = CertificateMode::Certified;
};

struct StabilityResult {
  std::vector<MaximalRow> rows;
  std::vector<std::pair<std::size_t, double>> max_ratio;  // per n
  std::vector<Verdict> verdicts;
};

StabilityResult run_maximal_boundedness(const ExperimentConfig& config);

struct WeakTypeExperimentRow {
  std::size_t n = 0;
  std::string function;
  double norm = 0.0;
  double R = 0.0;
  CertificateMode certificate = CertificateMode::Certified;
};

struct WeakTypeResult {
  std::vector<WeakTypeExperimentRow> rows;
  std::vector<std::pair<std::size_t, double>> max_ratio;  // per n
  std::vector<Verdict> verdicts;
};

WeakTypeResult run_weak_type(const ExperimentConfig& config);

struct SubadditivityResult {
  std::vector<SubadditivityReport> reports;  // Besov, then Triebel-Lizorkin
  std::vector<Verdict> verdicts;
};

SubadditivityResult run_subadditivity(const ExperimentConfig& config);

struct ExperimentOutput {
  Table table;
  std::vector<Verdict> verdicts;

  bool passed() const;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

Table to_table(const ConvergenceResult& r, bool timing);
Table to_table(const CounterexampleResult& r, bool timing);
Table to_table(const StabilityResult& r);
Table to_table(const WeakTypeResult& r);
Table to_table(const SubadditivityResult& r);
Table to_table(const SubadditivityReport& r);

}  // namespace hajlasz
