#include "hajlasz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "hajlasz/convex.hpp"
#include "hajlasz/kernels.hpp"
#include "hajlasz/parallel.hpp"

namespace hajlasz {

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::Besov:
      return "besov";
    case Flavor::TriebelLizorkin:
      return "tl";
    case Flavor::Hajlasz:
      return "hajlasz";
  }
  return "?";
}

Flavor parse_flavor(const std::string& name) {
  if (name == "besov" || name == "B") return Flavor::Besov;
  if (name == "tl" || name == "triebel-lizorkin" || name == "TL" || name == "M") {
    return Flavor::TriebelLizorkin;
  }
  if (name == "hajlasz" || name == "H") return Flavor::Hajlasz;
  throw std::invalid_argument("unknown flavor '" + name + "' (besov, tl, hajlasz)");
}

std::string to_string(CertificateMode m) {
  return m == CertificateMode::Certified ? "certified" : "upper_bound_only";
}

NormParams::NormParams(double s_, double p_, double q_, Flavor f)
    : s(s_), p(p_), q(f == Flavor::Hajlasz ? kInf : q_), flavor(f) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in (0, 1]");
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("p must be a positive real");
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive or infinite");
}

bool NormParams::certified() const {
  if (p < 1.0) return false;
  return flavor == Flavor::Besov || q >= 1.0;
}

int band_index(double d) {
  int e = 0;
  std::frexp(d, &e);  // d = m 2^e, 1/2 <= m < 1
  return -e;
}

std::vector<PairBand> pair_bands(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                 double s) {
  if (u.size() != space.size()) throw std::invalid_argument("function size does not match space");
  std::map<int, PairBand> by_k;
  const std::size_t n = space.size();
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double d = space.distance(x, y);
      const int k = band_index(d);
      const double ds = s == 1.0 ? d : std::pow(d, s);
      auto& band = by_k[k];
      band.k = k;
      band.pairs.push_back({x, y, std::fabs(u[x] - u[y]) / ds});
    }
  }
  std::vector<PairBand> out;
  for (auto& [k, band] : by_k) out.push_back(std::move(band));
  return out;
}

FractionalGradient::FractionalGradient(ScaleRange range, std::size_t n)
    : scales(range), g(range.count(), std::vector<double>(n, 0.0)) {}

bool is_feasible(const FractionalGradient& gradient, const std::vector<PairBand>& bands) {
  for (const auto& band : bands) {
    if (band.k < gradient.scales.k_min || band.k > gradient.scales.k_max) {
      bool all_zero = true;
      for (const auto& pr : band.pairs) all_zero = all_zero && pr.c <= 1e-9;
      if (!all_zero) return false;
      continue;
    }
    const auto& g = gradient.at(band.k);
    for (const auto& pr : band.pairs) {
      if (g[pr.x] < 0.0 || g[pr.y] < 0.0) return false;
      if (g[pr.x] + g[pr.y] < pr.c - 1e-9) return false;
    }
  }
  return true;
}

FractionalGradient canonical_gradient(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                      double s) {
  FractionalGradient grad(scale_range(space), space.size());
  for (const auto& band : pair_bands(space, u, s)) {
    auto& g = grad.at(band.k);
    for (const auto& pr : band.pairs) {
      g[pr.x] = std::max(g[pr.x], pr.c / 2.0);
      g[pr.y] = std::max(g[pr.y], pr.c / 2.0);
    }
  }
  return grad;
}

namespace {

double lp_of(const std::vector<double>& v, const MetricMeasureSpace& space, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::fabs(a));
    return m;
  }
  if (p == 2.0) return std::sqrt(kernels::weighted_sq_sum(space.masses(), v));
  double acc = 0.0;
  for (std::size_t x = 0; x < v.size(); ++x) acc += space.mass(x) * std::pow(std::fabs(v[x]), p);
  return std::pow(acc, 1.0 / p);
}

double lq_of(const std::vector<double>& v, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::fabs(a));
    return m;
  }
  double acc = 0.0;
  for (double a : v) acc += std::pow(std::fabs(a), q);
  return std::pow(acc, 1.0 / q);
}

}  // namespace

double aggregate_norm(const FractionalGradient& gradient, const NormParams& params,
                      const MetricMeasureSpace& space) {
  const std::size_t n = space.size();
  if (params.flavor == Flavor::Besov) {
    std::vector<double> per_band;
    for (const auto& g : gradient.g) per_band.push_back(lp_of(g, space, params.p));
    return lq_of(per_band, params.q);
  }
  const double q = params.flavor == Flavor::Hajlasz ? kInf : params.q;
  std::vector<double> pointwise(n, 0.0), column(gradient.g.size());
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t b = 0; b < gradient.g.size(); ++b) column[b] = gradient.g[b][x];
    pointwise[x] = lq_of(column, q);
  }
  return lp_of(pointwise, space, params.p);
}

double lp_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u, double p) {
  return lp_of(u.vec(), space, p);
}

namespace {

struct BandData {
  int k;
  std::vector<PairConstraint> pairs;  // c > 0 only
};

std::vector<BandData> positive_bands(const std::vector<PairBand>& bands) {
  std::vector<BandData> out;
  for (const auto& b : bands) {
    BandData d{b.k, {}};
    for (const auto& pr : b.pairs) {
      if (pr.c > 0.0) d.pairs.push_back(pr);
    }
    if (!d.pairs.empty()) out.push_back(std::move(d));
  }
  return out;
}

// Variables g_b(x) for every band b and every point x with a positive
// constraint in b, optionally followed by epigraph variables t_x >= g_b(x).
struct GradProgram {
  convex::Problem pb;
  std::vector<std::vector<long>> var_of;  // [band][point] -> variable or -1
  std::vector<long> epi_of;               // [point] -> variable or -1
  std::vector<int> var_band;              // -1 for epigraph variables
  std::vector<std::size_t> var_point;
  std::vector<double> anchor;
  std::vector<std::size_t> init_rows;
};

constexpr std::size_t kAllRowsBelow = 4000;
constexpr std::size_t kPartnersPerPoint = 3;

GradProgram build_program(const std::vector<const BandData*>& bands, std::size_t n,
                          bool epigraph) {
  GradProgram gp;
  gp.var_of.assign(bands.size(), std::vector<long>(n, -1));
  gp.epi_of.assign(n, -1);
  std::vector<std::vector<double>> canon(bands.size(), std::vector<double>(n, 0.0));
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (const auto& pr : bands[b]->pairs) {
      for (std::size_t x : {pr.x, pr.y}) {
        if (gp.var_of[b][x] < 0) {
          gp.var_of[b][x] = static_cast<long>(gp.var_band.size());
          gp.var_band.push_back(static_cast<int>(b));
          gp.var_point.push_back(x);
        }
        canon[b][x] = std::max(canon[b][x], pr.c / 2.0);
      }
    }
  }
  if (epigraph) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t b = 0; b < bands.size() && gp.epi_of[x] < 0; ++b) {
        if (gp.var_of[b][x] >= 0) {
          gp.epi_of[x] = static_cast<long>(gp.var_band.size());
          gp.var_band.push_back(-1);
          gp.var_point.push_back(x);
        }
      }
    }
  }
  const std::size_t N = gp.var_band.size();
  gp.pb.num_vars = N;
  gp.anchor.assign(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    if (gp.var_band[j] >= 0) gp.anchor[j] = 1.01 * canon[gp.var_band[j]][gp.var_point[j]];
  }
  for (std::size_t j = 0; j < N; ++j) {
    if (gp.var_band[j] < 0) {
      double mx = 0.0;
      for (std::size_t b = 0; b < bands.size(); ++b) {
        const long v = gp.var_of[b][gp.var_point[j]];
        if (v >= 0) mx = std::max(mx, gp.anchor[static_cast<std::size_t>(v)]);
      }
      gp.anchor[j] = 1.01 * mx;
    }
  }

  std::size_t total_pairs = 0;
  for (const auto* band : bands) total_pairs += band->pairs.size();
  const bool all_rows = total_pairs <= kAllRowsBelow;

  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto& pairs = bands[b]->pairs;
    std::vector<std::vector<std::pair<double, std::size_t>>> partners(n);
    for (const auto& pr : pairs) {
      const std::size_t row = gp.pb.rows.size();
      gp.pb.rows.add({{static_cast<std::size_t>(gp.var_of[b][pr.x]), 1.0},
                      {static_cast<std::size_t>(gp.var_of[b][pr.y]), 1.0}},
                     pr.c);
      if (!all_rows) {
        partners[pr.x].push_back({pr.c, row});
        partners[pr.y].push_back({pr.c, row});
      }
    }
    if (!all_rows) {
      for (auto& list : partners) {
        const std::size_t keep = std::min(kPartnersPerPoint, list.size());
        std::partial_sort(list.begin(), list.begin() + static_cast<long>(keep), list.end(),
                          std::greater<>());
        for (std::size_t i = 0; i < keep; ++i) gp.init_rows.push_back(list[i].second);
      }
    }
  }
  if (epigraph) {
    for (std::size_t b = 0; b < bands.size(); ++b) {
      for (std::size_t x = 0; x < n; ++x) {
        if (gp.var_of[b][x] < 0) continue;
        if (!all_rows) gp.init_rows.push_back(gp.pb.rows.size());
        gp.pb.rows.add({{static_cast<std::size_t>(gp.epi_of[x]), 1.0},
                        {static_cast<std::size_t>(gp.var_of[b][x]), -1.0}},
                       0.0);
      }
    }
  }
  if (all_rows) gp.init_rows.clear();
  return gp;
}

// sum over chosen variables of coef_j z_j^p
void set_power_sum(GradProgram& gp, const std::vector<double>& coef, double p) {
  convex::Expr e;
  std::vector<convex::Expr::Child> children;
  for (std::size_t j = 0; j < coef.size(); ++j) {
    if (coef[j] == 0.0) continue;
    children.push_back({e.var(j), coef[j], p});
  }
  e.node(1.0, 1.0, std::move(children));
  gp.pb.objective = std::move(e);
}

// sum_x m_x (sum_b g_b(x)^q)^{p/q}
void set_tl_objective(GradProgram& gp, const MetricMeasureSpace& space, double p, double q) {
  convex::Expr e;
  std::vector<convex::Expr::Child> points;
  for (std::size_t x = 0; x < space.size(); ++x) {
    std::vector<convex::Expr::Child> leaves;
    for (std::size_t b = 0; b < gp.var_of.size(); ++b) {
      if (gp.var_of[b][x] >= 0) {
        leaves.push_back({e.var(static_cast<std::size_t>(gp.var_of[b][x])), 1.0, q});
      }
    }
    if (leaves.empty()) continue;
    points.push_back({e.node(space.mass(x), p / q, std::move(leaves)), 1.0, 1.0});
  }
  e.node(1.0, 1.0, std::move(points));
  gp.pb.objective = std::move(e);
}

// sum_b (sum_x m_x g_b(x)^p)^{q/p}
void set_besov_joint_objective(GradProgram& gp, const MetricMeasureSpace& space, double p,
                               double q) {
  convex::Expr e;
  std::vector<convex::Expr::Child> bands;
  for (std::size_t b = 0; b < gp.var_of.size(); ++b) {
    std::vector<convex::Expr::Child> leaves;
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (gp.var_of[b][x] >= 0) {
        leaves.push_back({e.var(static_cast<std::size_t>(gp.var_of[b][x])), space.mass(x), p});
      }
    }
    bands.push_back({e.node(1.0, q / p, std::move(leaves)), 1.0, 1.0});
  }
  e.node(1.0, 1.0, std::move(bands));
  gp.pb.objective = std::move(e);
}

std::vector<double> mass_coefficients(const GradProgram& gp, const MetricMeasureSpace& space,
                                      bool epigraph_only) {
  std::vector<double> coef(gp.var_band.size(), 0.0);
  for (std::size_t j = 0; j < coef.size(); ++j) {
    const bool is_epi = gp.var_band[j] < 0;
    if (is_epi == epigraph_only) coef[j] = space.mass(gp.var_point[j]);
  }
  return coef;
}

convex::Options solver_options() {
  convex::Options opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-300;
  return opt;
}

// minimise sum_j coef_j z_j^p over the program's rows; every coefficient must be positive
convex::Result solve_power_sum(const GradProgram& gp, const std::vector<double>& coef, double p) {
  convex::SeparableProblem sp;
  sp.num_vars = gp.pb.num_vars;
  sp.weight = coef;
  sp.p = p;
  sp.rows = gp.pb.rows;
  return convex::solve_separable(sp, gp.anchor, gp.init_rows, solver_options());
}

void absorb(SolveCertificate& cert, const convex::Result& r) {
  const double rel = r.gap / std::max(std::fabs(r.objective), 1e-300);
  cert.residual = std::max(cert.residual, rel);
  cert.newton_steps += r.newton_steps;
  cert.rounds = std::max(cert.rounds, r.rounds);
  if (!r.converged) cert.residual = kInf;
}

// Writes the band variables of z into `out` at the given band indices.
void scatter(const GradProgram& gp, const std::vector<double>& z, const std::vector<int>& band_k,
             FractionalGradient& out) {
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (gp.var_band[j] < 0) continue;
    out.at(band_k[static_cast<std::size_t>(gp.var_band[j])])[gp.var_point[j]] = z[j];
  }
}

MinNormResult zero_result(const MetricMeasureSpace& space, const char* method) {
  MinNormResult res;
  res.gradient = FractionalGradient(scale_range(space), space.size());
  res.certificate.method = method;
  return res;
}

// Solves per band: minimise sum_x m_x g^p (p >= 1).
MinNormResult solve_besov(const MetricMeasureSpace& space, const std::vector<BandData>& bands,
                          const NormParams& params) {
  MinNormResult res = zero_result(space, "interior-point/per-band");
  std::vector<convex::Result> results(bands.size());
  std::vector<GradProgram> programs(bands.size());
  parallel_for(bands.size(), [&](std::size_t b) {
    programs[b] = build_program({&bands[b]}, space.size(), false);
    results[b] = solve_power_sum(programs[b], mass_coefficients(programs[b], space, false), params.p);
  });
  for (std::size_t b = 0; b < bands.size(); ++b) {
    scatter(programs[b], results[b].z, {bands[b].k}, res.gradient);
    absorb(res.certificate, results[b]);
  }
  return res;
}

std::vector<int> band_ks(const std::vector<BandData>& bands) {
  std::vector<int> ks;
  for (const auto& b : bands) ks.push_back(b.k);
  return ks;
}

std::vector<const BandData*> pointers(const std::vector<BandData>& bands) {
  std::vector<const BandData*> out;
  for (const auto& b : bands) out.push_back(&b);
  return out;
}

MinNormResult solve_tl(const MetricMeasureSpace& space, const std::vector<BandData>& bands,
                       const NormParams& params) {
  const bool epi = std::isinf(params.q);
  MinNormResult res = zero_result(space, epi ? "barrier/epigraph" : "barrier/joint");
  GradProgram gp = build_program(pointers(bands), space.size(), epi);
  if (epi) {
    set_power_sum(gp, mass_coefficients(gp, space, true), params.p);
  } else {
    set_tl_objective(gp, space, params.p, params.q);
  }
  const auto r = convex::solve(gp.pb, gp.anchor, gp.init_rows, solver_options());
  scatter(gp, r.z, band_ks(bands), res.gradient);
  absorb(res.certificate, r);
  return res;
}

MinNormResult solve_hajlasz(const MetricMeasureSpace& space, const std::vector<PairBand>& all,
                            const std::vector<BandData>& bands, const NormParams& params) {
  MinNormResult res = zero_result(space, "interior-point/single-gradient");
  BandData merged{0, {}};
  for (const auto& b : bands) merged.pairs.insert(merged.pairs.end(), b.pairs.begin(), b.pairs.end());
  GradProgram gp = build_program({&merged}, space.size(), false);
  const auto r = solve_power_sum(gp, mass_coefficients(gp, space, false), params.p);
  absorb(res.certificate, r);
  std::vector<double> g(space.size(), 0.0);
  for (std::size_t j = 0; j < r.z.size(); ++j) g[gp.var_point[j]] = r.z[j];
  for (const auto& b : all) res.gradient.at(b.k) = g;
  return res;
}

MinNormResult keep_better(MinNormResult solved, const MetricMeasureSpace& space,
                          const FunctionOnSpace& u, const NormParams& params) {
  solved.seminorm = aggregate_norm(solved.gradient, params, space);
  FractionalGradient canon = canonical_gradient(space, u, params.s);
  const double cv = aggregate_norm(canon, params, space);
  if (cv < solved.seminorm) {
    solved.gradient = std::move(canon);
    solved.seminorm = cv;
  }
  return solved;
}

}  // namespace

MinNormResult min_norm_gradient(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                const NormParams& params) {
  if (!params.certified()) return heuristic_min_norm(space, u, params);
  const auto all = pair_bands(space, u, params.s);
  const auto bands = positive_bands(all);
  if (bands.empty()) return zero_result(space, "constant");
  MinNormResult res;
  switch (params.flavor) {
    case Flavor::Besov:
      res = solve_besov(space, bands, params);
      break;
    case Flavor::TriebelLizorkin:
      res = solve_tl(space, bands, params);
      break;
    case Flavor::Hajlasz:
      res = solve_hajlasz(space, all, bands, params);
      break;
  }
  return keep_better(std::move(res), space, u, params);
}

MinNormResult besov_joint_seminorm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                   const NormParams& params) {
  if (params.flavor != Flavor::Besov || params.p < 1.0 || params.q < 1.0 || std::isinf(params.q)) {
    throw std::invalid_argument("joint Besov solve needs p >= 1 and 1 <= q < infinity");
  }
  const auto bands = positive_bands(pair_bands(space, u, params.s));
  if (bands.empty()) return zero_result(space, "constant");
  MinNormResult res = zero_result(space, "barrier/joint");
  GradProgram gp = build_program(pointers(bands), space.size(), false);
  set_besov_joint_objective(gp, space, params.p, params.q);
  const auto r = convex::solve(gp.pb, gp.anchor, gp.init_rows, solver_options());
  scatter(gp, r.z, band_ks(bands), res.gradient);
  absorb(res.certificate, r);
  res.seminorm = aggregate_norm(res.gradient, params, space);
  return res;
}

namespace {

// Successive linear approximation of a separable-by-point objective from a
// feasible start. weights(z) returns the linearisation; value(z) the exact
// objective.
template <class Weights, class Value>
std::pair<std::vector<double>, double> sla(const GradProgram& gp, std::vector<double> z,
                                           Weights&& weights, Value&& value,
                                           SolveCertificate& cert) {
  double best = value(z);
  std::vector<double> best_z = z;
  for (int it = 0; it < 60; ++it) {
    GradProgram lp = gp;
    set_power_sum(lp, weights(z), 1.0);
    const auto r = convex::solve(lp.pb, lp.anchor, lp.init_rows, solver_options());
    cert.newton_steps += r.newton_steps;
    z = r.z;
    const double v = value(z);
    if (!(v < best * (1.0 - 1e-10))) break;
    best = v;
    best_z = z;
  }
  return {best_z, best};
}

}  // namespace

MinNormResult heuristic_min_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                 const NormParams& params, std::size_t random_starts,
                                 std::uint64_t seed) {
  const auto all = pair_bands(space, u, params.s);
  const auto bands = positive_bands(all);
  if (bands.empty()) {
    auto res = zero_result(space, "constant");
    res.certificate.mode = CertificateMode::UpperBoundOnly;
    return res;
  }
  const double p = params.p, q = params.q;
  double cmax = 0.0;
  for (const auto& b : bands) {
    for (const auto& pr : b.pairs) cmax = std::max(cmax, pr.c);
  }
  const double eps = 1e-9 * cmax;

  // convex surrogate: the same problem with exponents raised to 1
  NormParams surrogate_params = params;
  surrogate_params.p = std::max(p, 1.0);
  if (params.flavor == Flavor::TriebelLizorkin) surrogate_params.q = std::max(q, 1.0);
  const FractionalGradient surrogate = min_norm_gradient(space, u, surrogate_params).gradient;
  const FractionalGradient canon = canonical_gradient(space, u, params.s);

  MinNormResult res = zero_result(space, "sla/multistart");
  res.certificate.mode = CertificateMode::UpperBoundOnly;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  // One program per group of coupled variables: each band for Besov, all
  // bands jointly otherwise.
  std::vector<std::vector<const BandData*>> groups;
  BandData merged{0, {}};
  if (params.flavor == Flavor::Besov) {
    for (const auto& b : bands) groups.push_back({&b});
  } else if (params.flavor == Flavor::Hajlasz) {
    for (const auto& b : bands) merged.pairs.insert(merged.pairs.end(), b.pairs.begin(), b.pairs.end());
    groups.push_back({&merged});
  } else {
    groups.push_back(pointers(bands));
  }
  const bool epi = params.flavor == Flavor::TriebelLizorkin && std::isinf(q);

  for (const auto& group : groups) {
    GradProgram gp = build_program(group, space.size(), epi);
    const std::size_t N = gp.var_band.size();
    std::vector<int> ks;
    for (const auto* b : group) ks.push_back(b->k);
    // band of a variable as a scale index of the full gradient
    auto k_of = [&](std::size_t j) {
      return params.flavor == Flavor::Hajlasz ? bands.front().k : ks[gp.var_band[j]];
    };

    auto start_from = [&](const FractionalGradient& g) {
      std::vector<double> z(N, 0.0);
      for (std::size_t j = 0; j < N; ++j) {
        if (gp.var_band[j] >= 0) {
          if (params.flavor == Flavor::Hajlasz) {
            double mx = 0.0;
            for (const auto& v : g.g) mx = std::max(mx, v[gp.var_point[j]]);
            z[j] = mx;
          } else {
            z[j] = g.at(k_of(j))[gp.var_point[j]];
          }
        }
      }
      for (std::size_t j = 0; j < N; ++j) {
        if (gp.var_band[j] < 0) {
          for (std::size_t b = 0; b < gp.var_of.size(); ++b) {
            const long v = gp.var_of[b][gp.var_point[j]];
            if (v >= 0) z[j] = std::max(z[j], z[static_cast<std::size_t>(v)]);
          }
        }
      }
      return z;
    };

    auto value = [&](const std::vector<double>& z) {
      double acc = 0.0;
      if (epi) {
        std::vector<double> sup(space.size(), 0.0);
        for (std::size_t j = 0; j < N; ++j) {
          if (gp.var_band[j] >= 0) sup[gp.var_point[j]] = std::max(sup[gp.var_point[j]], z[j]);
        }
        for (std::size_t x = 0; x < sup.size(); ++x) acc += space.mass(x) * std::pow(sup[x], p);
      } else if (params.flavor == Flavor::TriebelLizorkin) {
        std::vector<double> inner(space.size(), 0.0);
        for (std::size_t j = 0; j < N; ++j) inner[gp.var_point[j]] += std::pow(z[j], q);
        for (std::size_t x = 0; x < inner.size(); ++x) {
          acc += space.mass(x) * std::pow(inner[x], p / q);
        }
      } else {
        for (std::size_t j = 0; j < N; ++j) acc += space.mass(gp.var_point[j]) * std::pow(z[j], p);
      }
      return acc;
    };

    auto weights = [&](const std::vector<double>& z) {
      std::vector<double> w(N, 0.0);
      if (epi) {
        for (std::size_t j = 0; j < N; ++j) {
          if (gp.var_band[j] < 0) w[j] = space.mass(gp.var_point[j]) * p * std::pow(z[j] + eps, p - 1.0);
        }
      } else if (params.flavor == Flavor::TriebelLizorkin) {
        std::vector<double> inner(space.size(), 0.0);
        for (std::size_t j = 0; j < N; ++j) inner[gp.var_point[j]] += std::pow(z[j] + eps, q);
        for (std::size_t j = 0; j < N; ++j) {
          const std::size_t x = gp.var_point[j];
          w[j] = space.mass(x) * p * std::pow(inner[x], p / q - 1.0) * std::pow(z[j] + eps, q - 1.0);
        }
      } else {
        for (std::size_t j = 0; j < N; ++j) {
          w[j] = space.mass(gp.var_point[j]) * p * std::pow(z[j] + eps, p - 1.0);
        }
      }
      return w;
    };

    std::vector<std::vector<double>> starts{start_from(canon), start_from(surrogate)};
    for (std::size_t r = 0; r < random_starts; ++r) {
      auto z = start_from(canon);
      for (double& v : z) v *= 1.0 + 2.0 * uniform();
      starts.push_back(std::move(z));
    }
    std::vector<double> best_z;
    double best = kInf;
    for (auto& z0 : starts) {
      auto [z, v] = sla(gp, z0, weights, value, res.certificate);
      if (v < best) {
        best = v;
        best_z = std::move(z);
      }
    }
    for (std::size_t j = 0; j < N; ++j) {
      if (gp.var_band[j] < 0) continue;
      if (params.flavor == Flavor::Hajlasz) {
        for (const auto& b : all) res.gradient.at(b.k)[gp.var_point[j]] = best_z[j];
      } else {
        res.gradient.at(k_of(j))[gp.var_point[j]] = best_z[j];
      }
    }
  }
  res.seminorm = aggregate_norm(res.gradient, params, space);
  const double cv = aggregate_norm(canon, params, space);
  if (cv < res.seminorm) {
    res.gradient = canon;
    res.seminorm = cv;
  }
  res.certificate.residual = kInf;
  return res;
}

NormReport full_norm_report(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                            const NormParams& params) {
  NormReport rep;
  rep.lp = lp_norm(space, u, params.p);
  const auto r = min_norm_gradient(space, u, params);
  rep.seminorm = r.seminorm;
  rep.certificate = r.certificate;
  rep.total = rep.lp + rep.seminorm;
  return rep;
}

double full_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                 const NormParams& params) {
  return full_norm_report(space, u, params).total;
}

}  // namespace hajlasz
