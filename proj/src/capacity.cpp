#include "hajlasz/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "hajlasz/convex.hpp"
#include "hajlasz/oracle.hpp"
#include "hajlasz/smoothing.hpp"

namespace hajlasz {

CapacityProblem::CapacityProblem(const MetricMeasureSpace& s, WeightedSubset e, NormParams p)
    : space(&s), E(std::move(e)), params(p) {
  if (E.indices.empty()) throw std::invalid_argument("capacity of an empty set");
  if (E.indices.back() >= s.size()) throw std::invalid_argument("capacity set index out of range");
}

namespace {

// Variable layout shared by the barrier solve and the oracle:
//   u_x for x outside E, g_b(x) per group b and touched point, then the
//   epigraph variables (t_x for TL q = inf, one T for Besov q = inf).
struct CapLayout {
  std::size_t n = 0;
  std::vector<bool> in_E;
  std::vector<long> u_var;                 // [point]
  std::vector<int> group_k;                // scale index of each group
  std::vector<std::vector<long>> g_var;    // [group][point]
  std::vector<long> t_var;                 // [point], TL q = inf
  long T_var = -1;                         // Besov q = inf
  std::vector<std::size_t> var_point;
  std::vector<int> var_group;              // -1 for u and epigraph variables
  double mass_E = 0.0;

  struct Pair {
    std::size_t x, y;
    std::size_t group;
    double kappa;  // 1/d^s
  };
  std::vector<Pair> pairs;
  std::size_t num_vars() const { return var_point.size(); }
};

CapLayout make_layout(const CapacityProblem& pb) {
  const auto& space = *pb.space;
  const auto& params = pb.params;
  CapLayout L;
  L.n = space.size();
  L.in_E.assign(L.n, false);
  for (std::size_t x : pb.E.indices) {
    L.in_E[x] = true;
    L.mass_E += space.mass(x);
  }
  L.u_var.assign(L.n, -1);
  for (std::size_t x = 0; x < L.n; ++x) {
    if (!L.in_E[x]) {
      L.u_var[x] = static_cast<long>(L.num_vars());
      L.var_point.push_back(x);
      L.var_group.push_back(-1);
    }
  }
  std::map<int, std::size_t> group_of_k;
  for (std::size_t x = 0; x < L.n; ++x) {
    for (std::size_t y = x + 1; y < L.n; ++y) {
      if (L.in_E[x] && L.in_E[y]) continue;
      const double d = space.distance(x, y);
      const int k = params.flavor == Flavor::Hajlasz ? 0 : band_index(d);
      auto it = group_of_k.find(k);
      if (it == group_of_k.end()) it = group_of_k.emplace(k, group_of_k.size()).first;
      L.pairs.push_back({x, y, it->second, 1.0 / (params.s == 1.0 ? d : std::pow(d, params.s))});
    }
  }
  L.group_k.resize(group_of_k.size());
  for (const auto& [k, g] : group_of_k) L.group_k[g] = k;
  L.g_var.assign(group_of_k.size(), std::vector<long>(L.n, -1));
  for (const auto& pr : L.pairs) {
    for (std::size_t x : {pr.x, pr.y}) {
      if (L.g_var[pr.group][x] < 0) {
        L.g_var[pr.group][x] = static_cast<long>(L.num_vars());
        L.var_point.push_back(x);
        L.var_group.push_back(static_cast<int>(pr.group));
      }
    }
  }
  L.t_var.assign(L.n, -1);
  if (params.flavor == Flavor::TriebelLizorkin && std::isinf(params.q)) {
    for (std::size_t x = 0; x < L.n; ++x) {
      for (const auto& gv : L.g_var) {
        if (gv[x] >= 0) {
          L.t_var[x] = static_cast<long>(L.num_vars());
          L.var_point.push_back(x);
          L.var_group.push_back(-1);
          break;
        }
      }
    }
  }
  if (params.flavor == Flavor::Besov && std::isinf(params.q)) {
    L.T_var = static_cast<long>(L.num_vars());
    L.var_point.push_back(0);
    L.var_group.push_back(-1);
  }
  return L;
}

using Terms = std::vector<std::pair<std::size_t, double>>;

// Both sides of |u(x) - u(y)| <= d^s (g(x) + g(y)) as rows a.z >= b.
template <class AddRow>
void pair_rows(const CapLayout& L, AddRow&& add) {
  for (const auto& pr : L.pairs) {
    for (double sign : {1.0, -1.0}) {
      // g_x + g_y - sign kappa (u_x - u_y) >= 0
      Terms t{{static_cast<std::size_t>(L.g_var[pr.group][pr.x]), 1.0},
              {static_cast<std::size_t>(L.g_var[pr.group][pr.y]), 1.0}};
      double rhs = 0.0;
      if (L.in_E[pr.x]) {
        rhs += sign * pr.kappa;
      } else {
        t.push_back({static_cast<std::size_t>(L.u_var[pr.x]), -sign * pr.kappa});
      }
      if (L.in_E[pr.y]) {
        rhs -= sign * pr.kappa;
      } else {
        t.push_back({static_cast<std::size_t>(L.u_var[pr.y]), sign * pr.kappa});
      }
      add(t, rhs);
    }
  }
}

template <class AddRow>
void epigraph_rows(const CapLayout& L, const MetricMeasureSpace& space, const NormParams& params,
                   AddRow&& add) {
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.t_var[x] < 0) continue;
    for (const auto& gv : L.g_var) {
      if (gv[x] >= 0) {
        add(Terms{{static_cast<std::size_t>(L.t_var[x]), 1.0}, {static_cast<std::size_t>(gv[x]), -1.0}},
            0.0);
      }
    }
  }
  if (L.T_var >= 0 && params.p == 1.0) {
    for (const auto& gv : L.g_var) {
      Terms t{{static_cast<std::size_t>(L.T_var), 1.0}};
      for (std::size_t x = 0; x < L.n; ++x) {
        if (gv[x] >= 0) t.push_back({static_cast<std::size_t>(gv[x]), -space.mass(x)});
      }
      add(t, 0.0);
    }
  }
}

CapacityResult whole_space_result(const CapacityProblem& pb) {
  CapacityResult res;
  res.value = pb.space->total_mass();
  res.u = FunctionOnSpace(std::vector<double>(pb.space->size(), 1.0));
  res.gradient = FractionalGradient(scale_range(*pb.space), pb.space->size());
  res.certificate.method = "constant";
  return res;
}

FunctionOnSpace read_u(const CapLayout& L, const std::vector<double>& z) {
  std::vector<double> u(L.n, 1.0);
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.u_var[x] >= 0) u[x] = std::clamp(z[static_cast<std::size_t>(L.u_var[x])], 0.0, 1.0);
  }
  return FunctionOnSpace(std::move(u));
}

CapacityResult certified_capacity(const CapacityProblem& pb) {
  const auto& space = *pb.space;
  const auto& params = pb.params;
  const double p = params.p, q = params.q;
  CapLayout L = make_layout(pb);
  const std::size_t N = L.num_vars();

  convex::Problem prob;
  prob.num_vars = N;
  prob.upper.assign(N, kInf);
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.u_var[x] >= 0) prob.upper[static_cast<std::size_t>(L.u_var[x])] = 1.0;
  }
  auto add_row = [&](const Terms& t, double rhs) { prob.rows.add(t, rhs); };
  pair_rows(L, add_row);
  epigraph_rows(L, space, params, add_row);

  // objective ||u||_Lp + N(g)
  convex::Expr e;
  std::vector<convex::Expr::Child> lp_terms;
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.u_var[x] >= 0) lp_terms.push_back({e.var(static_cast<std::size_t>(L.u_var[x])), space.mass(x), p});
  }
  lp_terms.push_back({e.constant(L.mass_E), 1.0, 1.0});
  const int a_node = e.node(1.0, 1.0 / p, std::move(lp_terms));

  auto band_norm_p = [&](convex::Expr& ex, std::size_t b) {  // sum_x m g_b^p
    std::vector<convex::Expr::Child> leaves;
    for (std::size_t x = 0; x < L.n; ++x) {
      if (L.g_var[b][x] >= 0) leaves.push_back({ex.var(static_cast<std::size_t>(L.g_var[b][x])), space.mass(x), p});
    }
    return leaves;
  };

  int n_node = -1;
  if (params.flavor == Flavor::Besov && !std::isinf(q)) {
    std::vector<convex::Expr::Child> bands;
    for (std::size_t b = 0; b < L.g_var.size(); ++b) {
      bands.push_back({e.node(1.0, q / p, band_norm_p(e, b)), 1.0, 1.0});
    }
    n_node = e.node(1.0, 1.0 / q, std::move(bands));
  } else if (params.flavor == Flavor::Besov) {
    n_node = e.node(1.0, 1.0, {{e.var(static_cast<std::size_t>(L.T_var)), 1.0, 1.0}});
    if (p != 1.0) {
      for (std::size_t b = 0; b < L.g_var.size(); ++b) {
        convex::NonlinearConstraint nl;
        nl.epigraph = static_cast<std::size_t>(L.T_var);
        nl.f.node(1.0, 1.0 / p, band_norm_p(nl.f, b));
        prob.nonlinear.push_back(std::move(nl));
      }
    }
  } else if (params.flavor == Flavor::TriebelLizorkin && !std::isinf(q)) {
    std::vector<convex::Expr::Child> points;
    for (std::size_t x = 0; x < L.n; ++x) {
      std::vector<convex::Expr::Child> leaves;
      for (const auto& gv : L.g_var) {
        if (gv[x] >= 0) leaves.push_back({e.var(static_cast<std::size_t>(gv[x])), 1.0, q});
      }
      if (!leaves.empty()) points.push_back({e.node(space.mass(x), p / q, std::move(leaves)), 1.0, 1.0});
    }
    n_node = e.node(1.0, 1.0 / p, std::move(points));
  } else {
    std::vector<convex::Expr::Child> leaves;
    for (std::size_t x = 0; x < L.n; ++x) {
      const long v = params.flavor == Flavor::Hajlasz ? L.g_var[0][x] : L.t_var[x];
      if (v >= 0) leaves.push_back({e.var(static_cast<std::size_t>(v)), space.mass(x), p});
    }
    n_node = e.node(1.0, 1.0 / p, std::move(leaves));
  }
  e.node(1.0, 1.0, {{a_node, 1.0, 1.0}, {n_node, 1.0, 1.0}});
  prob.objective = std::move(e);

  // strictly feasible anchor: u = 1/2 off E, gradients above the half split
  std::vector<double> anchor(N, 0.0);
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.u_var[x] >= 0) anchor[static_cast<std::size_t>(L.u_var[x])] = 0.5;
  }
  double cmax = 0.0;
  for (const auto& pr : L.pairs) {
    const double ux = L.in_E[pr.x] ? 1.0 : 0.5, uy = L.in_E[pr.y] ? 1.0 : 0.5;
    const double c = pr.kappa * std::fabs(ux - uy);
    cmax = std::max(cmax, c);
    for (std::size_t x : {pr.x, pr.y}) {
      auto& a = anchor[static_cast<std::size_t>(L.g_var[pr.group][x])];
      a = std::max(a, 0.5 * c);
    }
  }
  const double delta = 0.01 * (1.0 + cmax);
  for (std::size_t j = 0; j < N; ++j) {
    if (L.var_group[j] >= 0) anchor[j] = 1.01 * anchor[j] + delta;
  }
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.t_var[x] < 0) continue;
    double mx = 0.0;
    for (const auto& gv : L.g_var) {
      if (gv[x] >= 0) mx = std::max(mx, anchor[static_cast<std::size_t>(gv[x])]);
    }
    anchor[static_cast<std::size_t>(L.t_var[x])] = 1.01 * mx + delta;
  }
  if (L.T_var >= 0) {
    double mx = 0.0;
    for (std::size_t b = 0; b < L.g_var.size(); ++b) {
      double acc = 0.0;
      for (std::size_t x = 0; x < L.n; ++x) {
        if (L.g_var[b][x] >= 0) acc += space.mass(x) * std::pow(anchor[static_cast<std::size_t>(L.g_var[b][x])], p);
      }
      mx = std::max(mx, std::pow(acc, 1.0 / p));
    }
    anchor[static_cast<std::size_t>(L.T_var)] = 1.01 * mx + delta;
  }

  convex::Options opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-300;
  const auto r = convex::solve(prob, anchor, {}, opt);

  CapacityResult res;
  res.u = read_u(L, r.z);
  res.gradient = FractionalGradient(scale_range(space), L.n);
  for (std::size_t j = 0; j < N; ++j) {
    if (L.var_group[j] < 0) continue;
    const std::size_t x = L.var_point[j];
    if (params.flavor == Flavor::Hajlasz) {
      for (auto& g : res.gradient.g) g[x] = r.z[j];
    } else {
      res.gradient.at(L.group_k[static_cast<std::size_t>(L.var_group[j])])[x] = r.z[j];
    }
  }
  res.value = std::pow(std::max(r.objective, 0.0), p);
  res.certificate.method = "barrier/joint";
  res.certificate.residual = r.converged ? r.gap / std::max(r.objective, 1e-300) : kInf;
  res.certificate.newton_steps = r.newton_steps;
  res.certificate.rounds = r.rounds;
  return res;
}

}  // namespace

CapacityResult capacity(const CapacityProblem& problem) {
  if (problem.E.size() == problem.space->size()) return whole_space_result(problem);
  const auto& params = problem.params;
  if (params.certified()) return certified_capacity(problem);

  // Minimiser of the convex surrogate, then the exact norm of that u.
  NormParams surrogate = params;
  surrogate.p = std::max(params.p, 1.0);
  surrogate.q = std::max(params.q, 1.0);
  CapacityProblem sp(*problem.space, problem.E, surrogate);
  CapacityResult res = certified_capacity(sp);
  const auto rep = full_norm_report(*problem.space, res.u, params);
  res.value = std::pow(rep.total, params.p);
  res.gradient = min_norm_gradient(*problem.space, res.u, params).gradient;
  res.certificate.mode = CertificateMode::UpperBoundOnly;
  res.certificate.method = "surrogate+sla";
  res.certificate.residual = kInf;
  return res;
}

bool capacity_oracle_admissible(const NormParams& params) {
  const double p = params.p, q = params.q;
  if (p != 1.0 && p != 2.0) return false;
  if (q != 1.0 && q != 2.0 && !std::isinf(q)) return false;
  if (p == 2.0 && params.flavor == Flavor::Besov && q != 2.0) return false;
  if (p == 1.0 && params.flavor == Flavor::TriebelLizorkin && q == 2.0) return false;
  return true;
}

namespace {

// z'Qz + l'z + c
struct Quad {
  std::vector<double> Q, l;
  double c = 0.0;
  std::size_t n;
  explicit Quad(std::size_t dim) : Q(dim * dim, 0.0), l(dim, 0.0), n(dim) {}
  void outer(const std::vector<std::pair<std::size_t, double>>& a) {
    for (const auto& [i, ai] : a) {
      for (const auto& [j, aj] : a) Q[i * n + j] += ai * aj;
    }
  }
};

}  // namespace

double capacity_oracle(const CapacityProblem& problem) {
  const auto& space = *problem.space;
  const auto& params = problem.params;
  if (space.size() > 10) throw std::invalid_argument("capacity_oracle is limited to n <= 10");
  if (!capacity_oracle_admissible(params)) {
    throw std::invalid_argument("capacity_oracle: A^2 or N^2 is not quadratic for these parameters");
  }
  if (problem.E.size() == space.size()) return space.total_mass();
  const double p = params.p;
  CapLayout L = make_layout(problem);
  const std::size_t N = L.num_vars();

  oracle::QuadraticProgram base(N);
  auto add_row = [&](const Terms& t, double rhs) { base.add_row(t, rhs); };
  pair_rows(L, add_row);
  epigraph_rows(L, space, params, add_row);
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.u_var[x] >= 0) base.add_row({{static_cast<std::size_t>(L.u_var[x]), -1.0}}, -1.0);
  }

  Quad A2(N), N2(N);
  std::vector<std::pair<std::size_t, double>> a;
  for (std::size_t x = 0; x < L.n; ++x) {
    if (L.u_var[x] >= 0) a.push_back({static_cast<std::size_t>(L.u_var[x]), space.mass(x)});
  }
  if (p == 1.0) {
    A2.outer(a);
    for (const auto& [i, ai] : a) A2.l[i] += 2.0 * L.mass_E * ai;
    A2.c = L.mass_E * L.mass_E;
  } else {
    for (const auto& [i, ai] : a) A2.Q[i * N + i] += ai;
    A2.c = L.mass_E;
  }

  auto band_mass = [&](std::size_t b) {
    std::vector<std::pair<std::size_t, double>> v;
    for (std::size_t x = 0; x < L.n; ++x) {
      if (L.g_var[b][x] >= 0) v.push_back({static_cast<std::size_t>(L.g_var[b][x]), space.mass(x)});
    }
    return v;
  };
  const bool tl = params.flavor == Flavor::TriebelLizorkin;
  const bool inf_q = std::isinf(params.q);
  if (p == 1.0) {
    std::vector<std::pair<std::size_t, double>> lin;
    if (params.flavor == Flavor::Besov && inf_q) {
      lin.push_back({static_cast<std::size_t>(L.T_var), 1.0});
    } else if (tl && inf_q) {
      for (std::size_t x = 0; x < L.n; ++x) {
        if (L.t_var[x] >= 0) lin.push_back({static_cast<std::size_t>(L.t_var[x]), space.mass(x)});
      }
    } else if (params.flavor == Flavor::Besov && params.q == 2.0) {
      for (std::size_t b = 0; b < L.g_var.size(); ++b) N2.outer(band_mass(b));
    } else {
      for (std::size_t b = 0; b < L.g_var.size(); ++b) {
        auto v = band_mass(b);
        lin.insert(lin.end(), v.begin(), v.end());
      }
    }
    if (!lin.empty()) N2.outer(lin);
  } else if (tl && inf_q) {
    for (std::size_t x = 0; x < L.n; ++x) {
      if (L.t_var[x] >= 0) {
        const auto v = static_cast<std::size_t>(L.t_var[x]);
        N2.Q[v * N + v] += space.mass(x);
      }
    }
  } else if (tl && params.q == 1.0) {
    for (std::size_t x = 0; x < L.n; ++x) {
      std::vector<std::pair<std::size_t, double>> ones;
      for (const auto& gv : L.g_var) {
        if (gv[x] >= 0) ones.push_back({static_cast<std::size_t>(gv[x]), 1.0});
      }
      for (const auto& [i, ai] : ones) {
        for (const auto& [j, aj] : ones) N2.Q[i * N + j] += space.mass(x) * ai * aj;
      }
    }
  } else {
    for (std::size_t b = 0; b < L.g_var.size(); ++b) {
      for (const auto& [v, m] : band_mass(b)) N2.Q[v * N + v] += m;
    }
  }

  auto V = [&](double theta) {
    oracle::QuadraticProgram qp = base;
    const double wa = 1.0 / theta, wn = 1.0 / (1.0 - theta);
    for (std::size_t k = 0; k < N * N; ++k) qp.H[k] = 2.0 * (wa * A2.Q[k] + wn * N2.Q[k]);
    for (std::size_t k = 0; k < N; ++k) qp.f[k] = wa * A2.l[k] + wn * N2.l[k];
    qp.c0 = wa * A2.c + wn * N2.c;
    return oracle::solve_lemke(qp).value;
  };

  // V is convex in theta; golden-section search
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-9, hi = 1.0 - 1e-9;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = V(x1), f2 = V(x2);
  while (hi - lo > 1e-7) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = V(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = V(x2);
    }
  }
  const double best = std::min(f1, f2);
  return std::pow(std::max(best, 0.0), p / 2.0);
}

SubadditivityRow subadditivity_ratio(const MetricMeasureSpace& space,
                                     const std::vector<WeightedSubset>& family,
                                     const NormParams& params) {
  if (family.empty()) throw std::invalid_argument("empty family");
  SubadditivityRow row;
  row.n = space.size();
  row.sets = family.size();
  row.params = params;
  const double r = std::min(1.0, params.q / params.p);
  std::vector<std::size_t> all;
  for (const auto& E : family) {
    all.insert(all.end(), E.indices.begin(), E.indices.end());
    row.sum_capacity_r += std::pow(capacity(CapacityProblem(space, E, params)).value, r);
  }
  row.union_capacity = capacity(CapacityProblem(space, make_subset(space, all), params)).value;
  row.ratio = std::pow(row.union_capacity, r) / row.sum_capacity_r;
  row.bound = std::pow(2.0, params.p * r + 1.0);
  const bool over = row.ratio > row.bound * (1.0 + 1e-9);
  if (params.flavor == Flavor::Besov) {
    row.within = !over;
  } else {
    row.flagged = over;
    row.within = row.ratio <= 2.0 * row.bound * (1.0 + 1e-9);
  }
  return row;
}

SubadditivityReport r_subadditivity_check(const SubadditivityConfig& config) {
  if (config.n_min < 2 || config.n_max < config.n_min) {
    throw std::invalid_argument("subadditivity needs 2 <= n_min <= n_max");
  }
  SubadditivityReport rep;
  std::mt19937_64 rng(config.seed);
  const double exps[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::size_t n = config.n_min + rng() % (config.n_max - config.n_min + 1);
    const auto space = generate({RandomPoints{n, 2, config.seed * 1000003 + t}});
    const NormParams params(config.s, exps[t % 4][0], exps[t % 4][1], config.flavor);
    const std::size_t sets = 2 + rng() % 3;
    std::vector<WeightedSubset> family;
    for (std::size_t i = 0; i < sets; ++i) {
      const std::size_t size = 1 + rng() % std::max<std::size_t>(1, n / 2);
      std::vector<std::size_t> idx(n);
      for (std::size_t j = 0; j < n; ++j) idx[j] = j;
      for (std::size_t j = 0; j < size; ++j) std::swap(idx[j], idx[j + rng() % (n - j)]);
      idx.resize(size);
      family.push_back(make_subset(space, idx));
    }
    auto row = subadditivity_ratio(space, family, params);
    row.trial = t;
    rep.max_ratio_over_bound = std::max(rep.max_ratio_over_bound, row.ratio / row.bound);
    rep.passed = rep.passed && row.within;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

WeakTypeReport weak_type_ratio(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                               const NormParams& params, GammaParam gamma) {
  WeakTypeReport rep;
  const auto norm = full_norm_report(space, u, params);
  rep.norm = norm.total;
  if (!(rep.norm > 0.0)) throw std::invalid_argument("weak-type ratio needs a function of positive norm");
  if (norm.certificate.mode != CertificateMode::Certified) rep.mode = CertificateMode::UpperBoundOnly;
  const FunctionOnSpace M = median_maximal(space, u, gamma);
  std::vector<double> levels(M.vec());
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  // {M > lambda} is constant for lambda in [a, b) between consecutive levels,
  // so the supremum over that interval is approached as lambda -> b.
  for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
    const double a = levels[j], b = levels[j + 1];
    std::vector<std::size_t> idx;
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (M[x] > a) idx.push_back(x);
    }
    const auto cap = capacity(CapacityProblem(space, make_subset(space, idx), params));
    if (cap.certificate.mode != CertificateMode::Certified) rep.mode = CertificateMode::UpperBoundOnly;
    WeakTypeRow row{b, cap.value, std::pow(b, params.p) * cap.value / std::pow(rep.norm, params.p)};
    rep.R = std::max(rep.R, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace hajlasz
