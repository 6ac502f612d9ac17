#include "hajlasz/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hajlasz/kernels.hpp"

namespace hajlasz {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Uniform double in [0,1) from the top 53 bits; identical on every platform.
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> euclidean_matrix(const std::vector<std::vector<double>>& pts) {
  const std::size_t n = pts.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v;
      if (pts[i].size() == 1) {
        v = std::fabs(pts[i][0] - pts[j][0]);
      } else {
        double acc = 0.0;
        for (std::size_t c = 0; c < pts[i].size(); ++c) {
          const double diff = pts[i][c] - pts[j][c];
          acc += diff * diff;
        }
        v = std::sqrt(acc);
      }
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  return d;
}

void apply_snowflake(std::vector<double>& d, double alpha) {
  for (double& v : d) {
    if (v > 0.0) v = std::pow(v, alpha);
  }
}

}  // namespace

MetricMeasureSpace::MetricMeasureSpace(std::vector<double> dist, std::vector<double> mass,
                                       std::vector<std::string> labels)
    : n_(mass.size()), dist_(std::move(dist)), mass_(std::move(mass)), labels_(std::move(labels)) {
  if (n_ == 0) throw std::invalid_argument("metric measure space needs at least one point");
  if (dist_.size() != n_ * n_) {
    throw std::invalid_argument("distance matrix must be n x n with n = " + std::to_string(n_));
  }
  if (!labels_.empty() && labels_.size() != n_) {
    throw std::invalid_argument("labels must have one entry per point");
  }
  for (double v : dist_) {
    if (!std::isfinite(v)) throw std::invalid_argument("distance matrix has a non-finite entry");
  }
  for (double m : mass_) {
    if (!std::isfinite(m)) throw std::invalid_argument("mass vector has a non-finite entry");
  }
  total_mass_ = std::accumulate(mass_.begin(), mass_.end(), 0.0);
  min_positive_ = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = dist_[i * n_ + j];
      diameter_ = std::max(diameter_, v);
      if (i != j && v > 0.0 && (min_positive_ == 0.0 || v < min_positive_)) min_positive_ = v;
    }
  }
}

MetricMeasureSpace MetricMeasureSpace::with_points(std::vector<std::vector<double>> points,
                                                   std::string kind, double alpha) && {
  points_ = std::move(points);
  metric_kind_ = std::move(kind);
  alpha_ = alpha;
  return std::move(*this);
}

bool WeightedSubset::contains(std::size_t i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

WeightedSubset make_subset(const MetricMeasureSpace& space, std::vector<std::size_t> indices) {
  if (indices.empty()) throw std::invalid_argument("subset must be nonempty");
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (indices.back() >= space.size()) {
    throw std::invalid_argument("subset index " + std::to_string(indices.back()) +
                                " out of range");
  }
  double total = 0.0;
  for (std::size_t i : indices) total += space.mass(i);
  return {std::move(indices), total};
}

WeightedSubset whole_space(const MetricMeasureSpace& space) {
  std::vector<std::size_t> all(space.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return make_subset(space, std::move(all));
}

FunctionOnSpace::FunctionOnSpace(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::invalid_argument("function value at point " + std::to_string(i) +
                                  " is not finite");
    }
  }
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const InvariantCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ValidationReport validate(const MetricMeasureSpace& space) {
  const std::size_t n = space.size();
  ValidationReport report;
  InvariantCheck diag{"zero_diagonal", true, {}}, sym{"symmetry", true, {}}, pos{"positivity", true, {}},
      tri{"triangle_inequality", true, {}}, mass{"mass_positivity", true, {}};

  for (std::size_t i = 0; i < n && diag.passed; ++i) {
    if (space.distance(i, i) != 0.0) {
      diag.passed = false;
      diag.witness = "d(" + std::to_string(i) + "," + std::to_string(i) +
                     ") = " + fmt_double(space.distance(i, i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (sym.passed && space.distance(i, j) != space.distance(j, i)) {
        sym.passed = false;
        sym.witness = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
      if (pos.passed && !(space.distance(i, j) > 0.0 && space.distance(j, i) > 0.0)) {
        pos.passed = false;
        pos.witness = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  }

  auto check_triple = [&](std::size_t i, std::size_t j, std::size_t k) {
    // collinear points computed through sqrt can overshoot by an ulp or two
    if (space.distance(i, k) > (space.distance(i, j) + space.distance(j, k)) * (1.0 + 1e-12)) {
      tri.passed = false;
      tri.witness = "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                    std::to_string(k) + "): " + fmt_double(space.distance(i, k)) + " > " +
                    fmt_double(space.distance(i, j)) + " + " + fmt_double(space.distance(j, k));
    }
  };
  if (n <= 512) {
    for (std::size_t i = 0; i < n && tri.passed; ++i) {
      for (std::size_t j = 0; j < n && tri.passed; ++j) {
        for (std::size_t k = 0; k < n && tri.passed; ++k) check_triple(i, j, k);
      }
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    const std::size_t trials = 10 * n * n;
    for (std::size_t t = 0; t < trials && tri.passed; ++t) {
      check_triple(rng() % n, rng() % n, rng() % n);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!(space.mass(i) > 0.0)) {
      mass.passed = false;
      mass.witness = "index " + std::to_string(i);
      break;
    }
  }
  report.checks = {diag, sym, pos, tri, mass};
  return report;
}

WeightedSubset ball(const MetricMeasureSpace& space, std::size_t center, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (center >= space.size()) throw std::invalid_argument("ball center out of range");
  WeightedSubset out;
  const auto row = space.row(center);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] < r) {
      out.indices.push_back(j);
      out.total_mass += space.mass(j);
    }
  }
  return out;
}

double ball_mass(const MetricMeasureSpace& space, std::size_t center, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  return kernels::masked_sum(space.row(center), space.masses(), r);
}

std::vector<double> distinct_radii(const MetricMeasureSpace& space, std::size_t center) {
  const auto row = space.row(center);
  std::vector<double> radii(row.begin(), row.end());
  radii.push_back(0.0);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

double ScaleRange::radius(int k) { return std::ldexp(1.0, -k); }

ScaleRange scale_range(const MetricMeasureSpace& space) {
  if (space.size() < 2 || space.min_positive_distance() <= 0.0) return {0, 0};
  // largest k with 2^-k >= dmin/2, smallest k with 2^-k <= 2 diam
  int k_max = static_cast<int>(std::floor(std::log2(2.0 / space.min_positive_distance())));
  while (ScaleRange::radius(k_max) < space.min_positive_distance() / 2.0) --k_max;
  while (ScaleRange::radius(k_max + 1) >= space.min_positive_distance() / 2.0) ++k_max;
  int k_min = static_cast<int>(std::ceil(-std::log2(2.0 * space.diameter())));
  while (ScaleRange::radius(k_min) > 2.0 * space.diameter()) ++k_min;
  while (ScaleRange::radius(k_min - 1) <= 2.0 * space.diameter()) --k_min;
  return {k_min, std::max(k_min, k_max)};
}

DoublingReport estimate_doubling(const MetricMeasureSpace& space, DoublingOptions options) {
  if (options.sample_budget == 0) throw std::invalid_argument("sample_budget must be >= 1");
  const std::size_t n = space.size();
  DoublingReport report;

  std::vector<std::vector<double>> radii(n);
  std::size_t total_pairs = 0;
  for (std::size_t x = 0; x < n; ++x) {
    radii[x] = distinct_radii(space, x);
    radii[x].erase(radii[x].begin());  // drop 0
    total_pairs += radii[x].size();
  }
  report.full_sweep = options.force_full_sweep || total_pairs <= 100000;

  auto record = [&](std::size_t x, double r, double ratio) {
    report.samples.push_back({x, r, ratio});
    report.c_d = std::max(report.c_d, ratio);
  };

  if (report.full_sweep) {
    std::vector<std::pair<double, double>> sorted(n);
    std::vector<double> dist_sorted(n), prefix(n + 1);
    for (std::size_t x = 0; x < n; ++x) {
      const auto row = space.row(x);
      for (std::size_t j = 0; j < n; ++j) sorted[j] = {row[j], space.mass(j)};
      std::sort(sorted.begin(), sorted.end());
      prefix[0] = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        dist_sorted[j] = sorted[j].first;
        prefix[j + 1] = prefix[j] + sorted[j].second;
      }
      auto open_ball = [&](double r) {
        auto it = std::lower_bound(dist_sorted.begin(), dist_sorted.end(), r);
        return prefix[static_cast<std::size_t>(it - dist_sorted.begin())];
      };
      for (double r : radii[x]) record(x, r, open_ball(2.0 * r) / open_ball(r));
    }
  } else {
    std::mt19937_64 rng(options.seed);
    for (std::size_t t = 0; t < options.sample_budget; ++t) {
      const std::size_t x = rng() % n;
      if (radii[x].empty()) continue;
      const double r = radii[x][rng() % radii[x].size()];
      record(x, r, ball_mass(space, x, 2.0 * r) / ball_mass(space, x, r));
    }
  }
  report.Q = std::log2(report.c_d);
  return report;
}

void write_doubling_csv(std::ostream& out, const DoublingReport& report) {
  out << "center,radius,ratio\n";
  out.precision(17);
  for (const auto& s : report.samples) out << s.center << ',' << s.radius << ',' << s.ratio << '\n';
}

MetricMeasureSpace euclidean_space(std::vector<std::vector<double>> points,
                                   std::vector<double> mass) {
  if (points.size() != mass.size()) throw std::invalid_argument("points and mass differ in size");
  for (const auto& p : points) {
    if (p.empty() || p.size() != points.front().size()) {
      throw std::invalid_argument("points must share a positive dimension");
    }
  }
  auto dist = euclidean_matrix(points);
  return MetricMeasureSpace(std::move(dist), std::move(mass))
      .with_points(std::move(points), "euclidean", 1.0);
}

MetricMeasureSpace snowflake(const MetricMeasureSpace& base, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("snowflake alpha must be in (0,1]");
  std::vector<double> dist(base.distances().begin(), base.distances().end());
  apply_snowflake(dist, alpha);
  std::vector<double> mass(base.masses().begin(), base.masses().end());
  MetricMeasureSpace out(std::move(dist), std::move(mass), base.labels());
  if (!base.points().empty()) {
    const double a = base.metric_kind() == "snowflake" ? base.snowflake_alpha() * alpha : alpha;
    return std::move(out).with_points(base.points(), "snowflake", a);
  }
  return out;
}

MetricMeasureSpace generate(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& kind) -> MetricMeasureSpace {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Grid1d>) {
          if (kind.n < 2) throw std::invalid_argument("grid1d needs n >= 2");
          std::vector<std::vector<double>> pts(kind.n);
          for (std::size_t j = 0; j < kind.n; ++j) {
            pts[j] = {static_cast<double>(j) / static_cast<double>(kind.n - 1)};
          }
          return euclidean_space(std::move(pts),
                                 std::vector<double>(kind.n, 1.0 / static_cast<double>(kind.n)));
        } else if constexpr (std::is_same_v<T, Grid2d>) {
          if (kind.n < 2) throw std::invalid_argument("grid2d needs n >= 2");
          std::vector<std::vector<double>> pts;
          const double h = 1.0 / static_cast<double>(kind.n - 1);
          for (std::size_t i = 0; i < kind.n; ++i) {
            for (std::size_t j = 0; j < kind.n; ++j) {
              pts.push_back({static_cast<double>(i) * h, static_cast<double>(j) * h});
            }
          }
          const double m = 1.0 / static_cast<double>(kind.n * kind.n);
          return euclidean_space(std::move(pts), std::vector<double>(kind.n * kind.n, m));
        } else if constexpr (std::is_same_v<T, RandomPoints>) {
          if (kind.n < 2) throw std::invalid_argument("random_points needs n >= 2");
          if (kind.dim < 1) throw std::invalid_argument("random_points needs dim >= 1");
          std::mt19937_64 rng(kind.seed);
          std::vector<std::vector<double>> pts(kind.n, std::vector<double>(kind.dim));
          for (auto& p : pts) {
            for (double& c : p) c = unit_double(rng);
          }
          return euclidean_space(std::move(pts),
                                 std::vector<double>(kind.n, 1.0 / static_cast<double>(kind.n)));
        } else {
          if (!kind.base) throw std::invalid_argument("snowflake needs a base generator");
          return snowflake(generate(*kind.base), kind.alpha);
        }
      },
      spec.kind);
}

SpheresReport nonempty_spheres_check(const MetricMeasureSpace& space, double tolerance,
                                     double r_lo, double r_hi) {
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw std::invalid_argument("tolerance must lie in (0,1)");
  }
  SpheresReport report;
  const ScaleRange range = scale_range(space);
  std::size_t sat_all = 0, total_all = 0;
  for (int k = range.k_max; k >= range.k_min; --k) {
    const double r = ScaleRange::radius(k);
    if (r < r_lo || r > r_hi || r > space.diameter()) continue;
    SpheresRadius entry{r, 0, space.size()};
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (kernels::count_in_range(space.row(x), r - tolerance * r, r + tolerance * r) > 0) {
        ++entry.satisfied;
      }
    }
    sat_all += entry.satisfied;
    total_all += entry.total;
    report.min_fraction = std::min(report.min_fraction, entry.fraction());
    report.radii.push_back(entry);
  }
  report.overall_fraction = total_all == 0 ? 1.0 : double(sat_all) / double(total_all);
  return report;
}

MetricMeasureSpace space_from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::size_t n = j.at("n").get<std::size_t>();
  std::vector<double> mass = j.at("mass").get<std::vector<double>>();
  if (mass.size() != n) throw std::invalid_argument("space file: mass must have n entries");
  const std::string metric = j.value("metric", std::string("explicit"));
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();

  std::vector<std::vector<double>> points;
  if (j.contains("points")) points = j.at("points").get<std::vector<std::vector<double>>>();

  auto finish = [&](MetricMeasureSpace space) {
    const auto report = validate(space);
    for (const auto& c : report.checks) {
      if (!c.passed) throw std::invalid_argument("space file fails " + c.name + " " + c.witness);
    }
    return space;
  };

  if (metric == "explicit") {
    if (!j.contains("dist")) throw std::invalid_argument("explicit metric requires \"dist\"");
    std::vector<double> dist;
    const auto& d = j.at("dist");
    if (d.size() == n && n > 0 && d.at(0).is_array()) {
      for (const auto& row : d) {
        auto r = row.get<std::vector<double>>();
        dist.insert(dist.end(), r.begin(), r.end());
      }
    } else {
      dist = d.get<std::vector<double>>();
    }
    MetricMeasureSpace space(std::move(dist), std::move(mass), std::move(labels));
    if (!points.empty()) space = std::move(space).with_points(std::move(points), "explicit", 1.0);
    return finish(std::move(space));
  }
  if (metric != "euclidean" && metric != "snowflake") {
    throw std::invalid_argument("unknown metric kind: " + metric);
  }
  if (points.size() != n) throw std::invalid_argument("space file: points must have n entries");
  auto dist = euclidean_matrix(points);
  double alpha = 1.0;
  if (metric == "snowflake") {
    alpha = j.value("alpha", 1.0);
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
    apply_snowflake(dist, alpha);
  }
  MetricMeasureSpace space(std::move(dist), std::move(mass), std::move(labels));
  return finish(std::move(space).with_points(std::move(points), metric, alpha));
}

MetricMeasureSpace load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open space file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return space_from_json_text(ss.str());
}

std::string space_to_json_text(const MetricMeasureSpace& space) {
  nlohmann::json j;
  j["n"] = space.size();
  j["mass"] = std::vector<double>(space.masses().begin(), space.masses().end());
  if (!space.labels().empty()) j["labels"] = space.labels();
  if (!space.points().empty() && space.metric_kind() != "explicit") {
    j["metric"] = space.metric_kind();
    j["points"] = space.points();
    if (space.metric_kind() == "snowflake") j["alpha"] = space.snowflake_alpha();
  } else {
    j["metric"] = "explicit";
    j["dist"] = std::vector<double>(space.distances().begin(), space.distances().end());
  }
  return j.dump();
}

void save_space(const std::string& path, const MetricMeasureSpace& space) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write space file " + path);
  out << space_to_json_text(space) << '\n';
}

}  // namespace hajlasz
