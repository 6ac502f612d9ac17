#include "hajlasz/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Dense>

namespace hajlasz::oracle {

QuadraticProgram::QuadraticProgram(std::size_t num_vars)
    : n(num_vars), H(num_vars * num_vars, 0.0), f(num_vars, 0.0) {}

std::size_t QuadraticProgram::add_row(const std::vector<std::pair<std::size_t, double>>& terms,
                                      double rhs) {
  const std::size_t r = b.size();
  A.resize(A.size() + n, 0.0);
  for (const auto& [j, a] : terms) A[r * n + j] += a;
  b.push_back(rhs);
  return r;
}

double QuadraticProgram::objective(const std::vector<double>& z) const {
  long double acc = c0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<long double>(f[i]) * z[i];
    long double row = 0.0L;
    for (std::size_t j = 0; j < n; ++j) row += static_cast<long double>(H[i * n + j]) * z[j];
    acc += 0.5L * row * z[i];
  }
  return static_cast<double>(acc);
}

bool QuadraticProgram::feasible(const std::vector<double>& z, double tol) const {
  for (std::size_t j = 0; j < n; ++j) {
    if (z[j] < -tol) return false;
  }
  for (std::size_t r = 0; r < rows(); ++r) {
    long double acc = 0.0L;
    for (std::size_t j = 0; j < n; ++j) acc += static_cast<long double>(A[r * n + j]) * z[j];
    if (acc < b[r] - tol * (1.0 + std::fabs(b[r]))) return false;
  }
  return true;
}

QpSolution solve_lemke(const QuadraticProgram& qp) {
  using LD = long double;
  const std::size_t n = qp.n, m = qp.rows(), N = n + m;
  const std::size_t cols = 2 * N + 2, z0 = 2 * N, rhs = 2 * N + 1;
  std::vector<LD> T(N * cols, 0.0L);
  auto at = [&](std::size_t i, std::size_t j) -> LD& { return T[i * cols + j]; };

  // w = M z + q with M = [[H, -A'], [A, 0]], q = [f; -b]
  for (std::size_t i = 0; i < N; ++i) {
    at(i, i) = 1.0L;
    at(i, z0) = -1.0L;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) at(i, N + j) = -static_cast<LD>(qp.H[i * n + j]);
    for (std::size_t r = 0; r < m; ++r) at(i, N + n + r) = static_cast<LD>(qp.A[r * n + i]);
    at(i, rhs) = qp.f[i];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) at(n + r, N + j) = -static_cast<LD>(qp.A[r * n + j]);
    at(n + r, rhs) = -static_cast<LD>(qp.b[r]);
  }

  std::vector<std::size_t> basis(N);
  for (std::size_t i = 0; i < N; ++i) basis[i] = i;

  QpSolution sol;
  auto extract = [&] {
    std::vector<double> z(n, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      if (basis[i] >= N && basis[i] < N + n) z[basis[i] - N] = static_cast<double>(at(i, rhs));
    }
    for (double& v : z) v = std::max(v, 0.0);
    sol.z = std::move(z);
    sol.value = qp.objective(sol.z);
    return sol;
  };

  auto pivot = [&](std::size_t r, std::size_t c) {
    const LD p = at(r, c);
    for (std::size_t j = 0; j < cols; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i < N; ++i) {
      if (i == r) continue;
      const LD factor = at(i, c);
      if (factor == 0.0L) continue;
      for (std::size_t j = 0; j < cols; ++j) at(i, j) -= factor * at(r, j);
      at(i, c) = 0.0L;
    }
    ++sol.pivots;
  };

  std::size_t r0 = 0;
  for (std::size_t i = 1; i < N; ++i) {
    if (at(i, rhs) < at(r0, rhs)) r0 = i;
  }
  if (at(r0, rhs) >= 0.0L) return extract();

  pivot(r0, z0);
  std::size_t leaving = basis[r0];
  basis[r0] = z0;
  const std::size_t max_pivots = 200 * N + 1000;

  while (sol.pivots < max_pivots) {
    const std::size_t enter = leaving < N ? leaving + N : leaving - N;
    LD colmax = 0.0L;
    for (std::size_t i = 0; i < N; ++i) colmax = std::max(colmax, std::fabs(at(i, enter)));
    const LD tol = 1e-13L * std::max<LD>(1.0L, colmax);
    std::vector<std::size_t> cand;
    for (std::size_t i = 0; i < N; ++i) {
      if (at(i, enter) > tol) cand.push_back(i);
    }
    if (cand.empty()) throw std::runtime_error("Lemke ray termination: problem infeasible or unbounded");

    // lexicographic minimum of (rhs, w-columns) / pivot column
    auto ratio = [&](std::size_t i, std::size_t col) { return at(i, col) / at(i, enter); };
    auto filter = [&](std::size_t col) {
      LD best = std::numeric_limits<LD>::infinity();
      for (std::size_t i : cand) best = std::min(best, ratio(i, col));
      const LD slack = 1e-15L * std::max<LD>(1.0L, std::fabs(best));
      std::vector<std::size_t> keep;
      for (std::size_t i : cand) {
        if (ratio(i, col) <= best + slack) keep.push_back(i);
      }
      cand.swap(keep);
    };
    filter(rhs);
    std::size_t r = cand.front();
    bool z0_row = false;
    for (std::size_t i : cand) {
      if (basis[i] == z0) {
        r = i;
        z0_row = true;
      }
    }
    if (!z0_row) {
      for (std::size_t col = 0; col < N && cand.size() > 1; ++col) filter(col);
      r = cand.front();
    }
    leaving = basis[r];
    pivot(r, enter);
    basis[r] = enter;
    if (leaving == z0) return extract();
  }
  throw std::runtime_error("Lemke pivot limit reached");
}

QpSolution solve_enumeration(const QuadraticProgram& qp) {
  const std::size_t n = qp.n, m = qp.rows(), total = n + m;
  if (total > 18) throw std::invalid_argument("enumeration limited to n + rows <= 18");
  QpSolution best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    const auto active = static_cast<std::size_t>(std::popcount(mask));
    if (active > n) continue;
    std::vector<std::size_t> rows, pins;
    for (std::size_t i = 0; i < total; ++i) {
      if (mask & (1u << i)) (i < m ? rows : pins).push_back(i < m ? i : i - m);
    }
    const std::size_t K = n + rows.size() + pins.size();
    Eigen::MatrixXd Kmat = Eigen::MatrixXd::Zero(static_cast<long>(K), static_cast<long>(K));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(K));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) Kmat(static_cast<long>(i), static_cast<long>(j)) = qp.H[i * n + j];
      rhs(static_cast<long>(i)) = -qp.f[i];
    }
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const long c = static_cast<long>(n + a);
      for (std::size_t j = 0; j < n; ++j) {
        Kmat(static_cast<long>(j), c) = -qp.A[rows[a] * n + j];
        Kmat(c, static_cast<long>(j)) = qp.A[rows[a] * n + j];
      }
      rhs(c) = qp.b[rows[a]];
    }
    for (std::size_t a = 0; a < pins.size(); ++a) {
      const long c = static_cast<long>(n + rows.size() + a);
      Kmat(static_cast<long>(pins[a]), c) = -1.0;
      Kmat(c, static_cast<long>(pins[a])) = 1.0;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Kmat);
    Eigen::VectorXd x = qr.solve(rhs);
    if (!x.allFinite() || (Kmat * x - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
    bool dual_ok = true;
    for (std::size_t a = n; a < K; ++a) dual_ok = dual_ok && x(static_cast<long>(a)) >= -1e-9;
    if (!dual_ok) continue;
    std::vector<double> z(x.data(), x.data() + n);
    if (!qp.feasible(z, 1e-9)) continue;
    for (double& v : z) v = std::max(v, 0.0);
    const double val = qp.objective(z);
    if (val < best.value) {
      best.value = val;
      best.z = std::move(z);
    }
    ++best.pivots;
  }
  if (best.z.empty()) throw std::runtime_error("enumeration found no KKT point");
  return best;
}

std::vector<std::vector<double>> enumerate_vertices(const QuadraticProgram& qp) {
  const std::size_t n = qp.n, m = qp.rows(), total = n + m;
  if (total > 24) throw std::invalid_argument("vertex enumeration limited to n + rows <= 24");
  std::vector<std::vector<double>> out;
  for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n) continue;
    Eigen::MatrixXd S(static_cast<long>(n), static_cast<long>(n));
    Eigen::VectorXd rhs(static_cast<long>(n));
    long r = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (!(mask & (1u << i))) continue;
      if (i < m) {
        for (std::size_t j = 0; j < n; ++j) S(r, static_cast<long>(j)) = qp.A[i * n + j];
        rhs(r) = qp.b[i];
      } else {
        S.row(r).setZero();
        S(r, static_cast<long>(i - m)) = 1.0;
        rhs(r) = 0.0;
      }
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (lu.rank() < static_cast<long>(n)) continue;
    Eigen::VectorXd x = lu.solve(rhs);
    std::vector<double> z(x.data(), x.data() + n);
    if (!qp.feasible(z, 1e-10)) continue;
    for (double& v : z) v = std::max(v, 0.0);
    bool seen = false;
    for (const auto& v : out) {
      double diff = 0.0;
      for (std::size_t j = 0; j < n; ++j) diff = std::max(diff, std::fabs(v[j] - z[j]));
      seen = seen || diff < 1e-12;
    }
    if (!seen) out.push_back(std::move(z));
  }
  return out;
}

}  // namespace hajlasz::oracle

namespace hajlasz {

namespace {

using oracle::QuadraticProgram;

struct Band {
  int k;
  std::vector<PairConstraint> pairs;  // c > 0
};

std::vector<Band> positive(const std::vector<PairBand>& all) {
  std::vector<Band> out;
  for (const auto& b : all) {
    Band d{b.k, {}};
    for (const auto& pr : b.pairs) {
      if (pr.c > 0.0) d.pairs.push_back(pr);
    }
    if (!d.pairs.empty()) out.push_back(std::move(d));
  }
  return out;
}

// g_b(x) variables for the points each band touches, then epigraph t_x.
struct Layout {
  std::vector<std::vector<long>> var;  // [band][point]
  std::vector<long> epi;
  std::vector<std::size_t> point;      // per variable
  std::vector<int> band;               // per variable, -1 = epigraph
  std::size_t size() const { return point.size(); }
};

Layout layout(const std::vector<const Band*>& bands, std::size_t n, bool epigraph) {
  Layout L;
  L.var.assign(bands.size(), std::vector<long>(n, -1));
  L.epi.assign(n, -1);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (const auto& pr : bands[b]->pairs) {
      for (std::size_t x : {pr.x, pr.y}) {
        if (L.var[b][x] < 0) {
          L.var[b][x] = static_cast<long>(L.size());
          L.point.push_back(x);
          L.band.push_back(static_cast<int>(b));
        }
      }
    }
  }
  if (epigraph) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t b = 0; b < bands.size(); ++b) {
        if (L.var[b][x] >= 0) {
          L.epi[x] = static_cast<long>(L.size());
          L.point.push_back(x);
          L.band.push_back(-1);
          break;
        }
      }
    }
  }
  return L;
}

void add_pair_rows(QuadraticProgram& qp, const Layout& L, const std::vector<const Band*>& bands) {
  for (std::size_t b = 0; b < bands.size(); ++b) {
    for (const auto& pr : bands[b]->pairs) {
      qp.add_row({{static_cast<std::size_t>(L.var[b][pr.x]), 1.0},
                  {static_cast<std::size_t>(L.var[b][pr.y]), 1.0}},
                 pr.c);
    }
  }
}

void add_epigraph_rows(QuadraticProgram& qp, const Layout& L) {
  for (std::size_t j = 0; j < L.size(); ++j) {
    if (L.band[j] < 0) continue;
    qp.add_row({{static_cast<std::size_t>(L.epi[L.point[j]]), 1.0}, {j, -1.0}}, 0.0);
  }
}

// sum_j m_{point(j)} z_j^p over the selected variables, p in {1, 2}
void set_mass_objective(QuadraticProgram& qp, const Layout& L, const MetricMeasureSpace& space,
                        double p, bool epigraph_vars) {
  for (std::size_t j = 0; j < L.size(); ++j) {
    if ((L.band[j] < 0) != epigraph_vars) continue;
    const double m = space.mass(L.point[j]);
    if (p == 1.0) {
      qp.f[j] = m;
    } else {
      qp.h(j, j) = 2.0 * m;
    }
  }
}

double solve_qp(const QuadraticProgram& qp, OracleMethod method) {
  return method == OracleMethod::Pivoting ? oracle::solve_lemke(qp).value
                                          : oracle::solve_enumeration(qp).value;
}

double lq(const std::vector<double>& v, double q) {
  if (std::isinf(q)) return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double a : v) acc += std::pow(a, q);
  return std::pow(acc, 1.0 / q);
}

// Kelley cutting planes for sum_x m_x ||(g_b(x))_b||_2 (p = 1, q = 2).
double kelley_tl12(const MetricMeasureSpace& space, const std::vector<const Band*>& bands) {
  const std::size_t n = space.size();
  Layout L = layout(bands, n, true);  // epigraph slots hold r_x
  QuadraticProgram qp(L.size());
  add_pair_rows(qp, L, bands);
  set_mass_objective(qp, L, space, 1.0, true);
  add_epigraph_rows(qp, L);  // r_x >= g_b(x): cuts along coordinate axes

  double ub = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 400; ++it) {
    const auto sol = oracle::solve_lemke(qp);
    const double lb = sol.value;
    double val = 0.0;
    std::vector<std::pair<std::size_t, std::vector<std::pair<std::size_t, double>>>> cuts;
    for (std::size_t x = 0; x < n; ++x) {
      if (L.epi[x] < 0) continue;
      double norm2 = 0.0;
      std::vector<std::pair<std::size_t, double>> comps;
      for (std::size_t b = 0; b < bands.size(); ++b) {
        const long v = L.var[b][x];
        if (v < 0) continue;
        const double g = sol.z[static_cast<std::size_t>(v)];
        norm2 += g * g;
        comps.push_back({static_cast<std::size_t>(v), g});
      }
      const double norm = std::sqrt(norm2);
      val += space.mass(x) * norm;
      const double r = sol.z[static_cast<std::size_t>(L.epi[x])];
      if (norm > r * (1.0 + 1e-12) + 1e-15) {
        std::vector<std::pair<std::size_t, double>> terms{{static_cast<std::size_t>(L.epi[x]), 1.0}};
        for (const auto& [v, g] : comps) terms.push_back({v, -g / norm});
        cuts.push_back({x, std::move(terms)});
      }
    }
    ub = std::min(ub, val);
    if (ub - lb <= 1e-9 * ub || cuts.empty()) return ub;
    for (auto& [x, terms] : cuts) qp.add_row(terms, 0.0);
  }
  return ub;
}

}  // namespace

OracleResult oracle_min_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                             const NormParams& params, OracleMethod method) {
  const std::size_t n = space.size();
  if (n > 12) throw std::invalid_argument("oracle_min_norm is limited to n <= 12");
  if (params.p != 1.0 && params.p != 2.0) throw std::invalid_argument("oracle needs p in {1, 2}");
  if (params.q != 1.0 && params.q != 2.0 && !std::isinf(params.q)) {
    throw std::invalid_argument("oracle needs q in {1, 2, inf}");
  }
  OracleResult res;
  res.method = method == OracleMethod::Pivoting ? "lemke" : "enumeration";
  const auto bands = positive(pair_bands(space, u, params.s));
  if (bands.empty()) return res;
  const double p = params.p;

  switch (params.flavor) {
    case Flavor::Besov: {
      std::vector<double> per_band;
      for (const auto& band : bands) {
        const std::vector<const Band*> one{&band};
        Layout L = layout(one, n, false);
        QuadraticProgram qp(L.size());
        add_pair_rows(qp, L, one);
        set_mass_objective(qp, L, space, p, false);
        per_band.push_back(std::pow(solve_qp(qp, method), 1.0 / p));
      }
      res.seminorm = lq(per_band, params.q);
      return res;
    }
    case Flavor::Hajlasz: {
      Band merged{0, {}};
      for (const auto& b : bands) merged.pairs.insert(merged.pairs.end(), b.pairs.begin(), b.pairs.end());
      const std::vector<const Band*> one{&merged};
      Layout L = layout(one, n, false);
      QuadraticProgram qp(L.size());
      add_pair_rows(qp, L, one);
      set_mass_objective(qp, L, space, p, false);
      res.seminorm = std::pow(solve_qp(qp, method), 1.0 / p);
      return res;
    }
    case Flavor::TriebelLizorkin:
      break;
  }

  std::vector<const Band*> all;
  for (const auto& b : bands) all.push_back(&b);
  const double q = params.q;
  if (p == 1.0 && q == 2.0) {
    if (method != OracleMethod::Pivoting) {
      throw std::invalid_argument("Triebel-Lizorkin (1,2) oracle needs pivoting");
    }
    res.method = "kelley+lemke";
    res.seminorm = kelley_tl12(space, all);
    return res;
  }
  const bool epi = std::isinf(q);
  Layout L = layout(all, n, epi);
  QuadraticProgram qp(L.size());
  add_pair_rows(qp, L, all);
  if (epi) {
    add_epigraph_rows(qp, L);
    set_mass_objective(qp, L, space, p, true);
  } else if (p == q) {
    set_mass_objective(qp, L, space, p, false);
  } else {
    // p = 2, q = 1: sum_x m_x (sum_b g_b(x))^2
    for (std::size_t i = 0; i < L.size(); ++i) {
      for (std::size_t j = 0; j < L.size(); ++j) {
        if (L.point[i] == L.point[j]) qp.h(i, j) = 2.0 * space.mass(L.point[i]);
      }
    }
  }
  res.seminorm = std::pow(solve_qp(qp, method), 1.0 / p);
  return res;
}

double vertex_min_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                       const NormParams& params) {
  const std::size_t n = space.size();
  if (n > 6) throw std::invalid_argument("vertex_min_norm is limited to n <= 6");
  if (params.flavor == Flavor::TriebelLizorkin) {
    throw std::invalid_argument("vertex_min_norm supports the Besov and Hajlasz flavors");
  }
  const auto bands = positive(pair_bands(space, u, params.s));
  if (bands.empty()) return 0.0;
  auto best_power_sum = [&](const std::vector<const Band*>& group) {
    Layout L = layout(group, n, false);
    QuadraticProgram qp(L.size());
    add_pair_rows(qp, L, group);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : oracle::enumerate_vertices(qp)) {
      double acc = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) acc += space.mass(L.point[j]) * std::pow(z[j], params.p);
      best = std::min(best, acc);
    }
    return best;
  };
  if (params.flavor == Flavor::Hajlasz) {
    Band merged{0, {}};
    for (const auto& b : bands) merged.pairs.insert(merged.pairs.end(), b.pairs.begin(), b.pairs.end());
    return std::pow(best_power_sum({&merged}), 1.0 / params.p);
  }
  std::vector<double> per_band;
  for (const auto& b : bands) per_band.push_back(std::pow(best_power_sum({&b}), 1.0 / params.p));
  return lq(per_band, params.q);
}

}  // namespace hajlasz
