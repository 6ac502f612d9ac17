#pragma once
// Finite metric measure spaces: a point set with a distance matrix and point
// masses, plus balls, doubling estimates, generators and JSON I/O.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hajlasz {

class MetricMeasureSpace {
 public:
  // dist is row-major n x n. Shapes and finiteness are checked here; the
  // metric axioms are checked by validate().
  MetricMeasureSpace(std::vector<double> dist, std::vector<double> mass,
                     std::vector<std::string> labels = {});

  std::size_t size() const { return n_; }
  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {dist_.data() + i * n_, n_}; }
  std::span<const double> distances() const { return dist_; }
  double mass(std::size_t i) const { return mass_[i]; }
  std::span<const double> masses() const { return mass_; }
  double total_mass() const { return total_mass_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double diameter() const { return diameter_; }
  // Smallest positive off-diagonal distance; 0 for a single point.
  double min_positive_distance() const { return min_positive_; }

  // Coordinates the space was generated from (empty for explicit metrics).
  const std::vector<std::vector<double>>& points() const { return points_; }
  // "explicit", "euclidean" or "snowflake".
  const std::string& metric_kind() const { return metric_kind_; }
  double snowflake_alpha() const { return alpha_; }

  MetricMeasureSpace with_points(std::vector<std::vector<double>> points, std::string kind,
                                 double alpha) &&;

 private:
  std::size_t n_;
  std::vector<double> dist_;
  std::vector<double> mass_;
  std::vector<std::string> labels_;
  double total_mass_ = 0.0;
  double diameter_ = 0.0;
  double min_positive_ = 0.0;
  std::vector<std::vector<double>> points_;
  std::string metric_kind_ = "explicit";
  double alpha_ = 1.0;
};

// Sorted index set into a space together with its cached mass.
struct WeightedSubset {
  std::vector<std::size_t> indices;
  double total_mass = 0.0;

  std::size_t size() const { return indices.size(); }
  bool contains(std::size_t i) const;
};

// Sorts and deduplicates; throws on empty or out-of-range input.
WeightedSubset make_subset(const MetricMeasureSpace& space, std::vector<std::size_t> indices);
WeightedSubset whole_space(const MetricMeasureSpace& space);

// A real function on the points of a space; all values finite.
class FunctionOnSpace {
 public:
  FunctionOnSpace() = default;
  explicit FunctionOnSpace(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& vec() const { return values_; }

 private:
  std::vector<double> values_;
};

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::string witness;  // first violation, empty when passed
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  bool ok() const;
  const InvariantCheck* find(const std::string& name) const;
};

// Checks zero diagonal, symmetry, positivity, triangle inequality and mass
// positivity. The triangle inequality, up to a relative 1e-12 for rounding, is
// exhaustive for n <= 512 and sampled on 10 n^2 random triples above that.
ValidationReport validate(const MetricMeasureSpace& space);

// {y : d(center, y) < r}. Throws for r <= 0.
WeightedSubset ball(const MetricMeasureSpace& space, std::size_t center, double r);
double ball_mass(const MetricMeasureSpace& space, std::size_t center, double r);

// Distinct distances from `center`, ascending, starting with 0. Each entry
// d_j stands for the closed ball {y : d(center,y) <= d_j}; these are exactly
// the distinct open balls centred at `center`.
std::vector<double> distinct_radii(const MetricMeasureSpace& space, std::size_t center);

// Dyadic scales 2^-k, k_min <= k <= k_max, with 2^-k_max >= (min positive
// distance)/2 and 2^-k_min <= 2 diameter. Outside this range coverings
// degenerate to singletons or a single ball.
struct ScaleRange {
  int k_min = 0;
  int k_max = 0;

  std::size_t count() const { return static_cast<std::size_t>(k_max - k_min + 1); }
  static double radius(int k);
};

ScaleRange scale_range(const MetricMeasureSpace& space);

struct DoublingSample {
  std::size_t center = 0;
  double radius = 0.0;
  double ratio = 1.0;
};

struct DoublingReport {
  double c_d = 1.0;
  double Q = 0.0;
  bool full_sweep = true;
  std::vector<DoublingSample> samples;
};

struct DoublingOptions {
  std::size_t sample_budget = 100000;
  bool force_full_sweep = false;
  std::uint64_t seed = 1;
};

DoublingReport estimate_doubling(const MetricMeasureSpace& space, DoublingOptions options = {});
void write_doubling_csv(std::ostream& out, const DoublingReport& report);

struct Grid1d {
  std::size_t n;
};
struct Grid2d {
  std::size_t n;  // n x n points
};
struct RandomPoints {
  std::size_t n;
  std::size_t dim;
  std::uint64_t seed;
};
struct GeneratorSpec;
// d -> d^alpha applied to another generator's metric, alpha in (0, 1].
struct Snowflake {
  std::shared_ptr<const GeneratorSpec> base;
  double alpha;
};
struct GeneratorSpec {
  std::variant<Grid1d, Grid2d, RandomPoints, Snowflake> kind;
};

MetricMeasureSpace generate(const GeneratorSpec& spec);
MetricMeasureSpace snowflake(const MetricMeasureSpace& base, double alpha);
// Euclidean distances between coordinate vectors; mass per point.
MetricMeasureSpace euclidean_space(std::vector<std::vector<double>> points,
                                   std::vector<double> mass);

struct SpheresRadius {
  double r = 0.0;
  std::size_t satisfied = 0;
  std::size_t total = 0;
  double fraction() const { return total == 0 ? 1.0 : double(satisfied) / double(total); }
};

struct SpheresReport {
  std::vector<SpheresRadius> radii;
  double min_fraction = 1.0;
  double overall_fraction = 1.0;
};

// Annulus test {y : |d(x,y) - r| <= tolerance r} for every point x and every
// dyadic radius 2^-k of the space's scale ladder with r_lo <= r <= min(r_hi,
// diameter). min_fraction is the worst per-radius fraction of centres.
SpheresReport nonempty_spheres_check(const MetricMeasureSpace& space, double tolerance,
                                     double r_lo = 0.0,
                                     double r_hi = std::numeric_limits<double>::infinity());

// JSON space file.
MetricMeasureSpace load_space(const std::string& path);
MetricMeasureSpace space_from_json_text(const std::string& text);
std::string space_to_json_text(const MetricMeasureSpace& space);
void save_space(const std::string& path, const MetricMeasureSpace& space);

}  // namespace hajlasz
