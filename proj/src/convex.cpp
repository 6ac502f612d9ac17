#include "hajlasz/convex.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace hajlasz::convex {

namespace {

using Triplets = std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>>;
using SparseVec = std::vector<std::pair<std::size_t, double>>;

double power(double v, double a) {
  if (a == 1.0) return v;
  if (a == 2.0) return v * v;
  if (a == 0.0) return 1.0;
  if (a == -1.0) return 1.0 / v;
  if (a == 0.5) return std::sqrt(v);
  return std::pow(v, a);
}

void push_lower(Triplets& out, std::size_t r, std::size_t c, double v) {
  out.push_back({{std::max(r, c), std::min(r, c)}, v});
}

// lower triangle of alpha * J J^T
void emit_outer(Triplets& out, const SparseVec& J, double alpha) {
  for (std::size_t p = 0; p < J.size(); ++p) {
    for (std::size_t q = 0; q <= p; ++q) {
      double v = alpha * J[p].second * J[q].second;
      if (p != q && J[p].first == J[q].first) v *= 2.0;
      push_lower(out, J[p].first, J[q].first, v);
    }
  }
}

}  // namespace

int Expr::var(std::size_t index) {
  Node n;
  n.kind = Kind::Var;
  n.index = index;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

int Expr::constant(double value) {
  Node n;
  n.kind = Kind::Const;
  n.value = value;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

int Expr::node(double weight, double outer, std::vector<Child> children) {
  for (const auto& c : children) {
    if (c.id < 0 || static_cast<std::size_t>(c.id) >= nodes_.size()) {
      throw std::invalid_argument("expression child must be created before its parent");
    }
  }
  Node n;
  n.kind = Kind::Sum;
  n.weight = weight;
  n.outer = outer;
  n.children = std::move(children);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

double Expr::value(const std::vector<double>& z) const { return evaluate(z, nullptr, nullptr); }

double Expr::evaluate(const std::vector<double>& z, std::vector<double>* grad, Triplets* hess,
                      double scale) const {
  const std::size_t N = nodes_.size();
  if (N == 0) return 0.0;
  std::vector<double> val(N), sum(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const Node& nd = nodes_[i];
    switch (nd.kind) {
      case Kind::Var:
        val[i] = z[nd.index];
        break;
      case Kind::Const:
        val[i] = nd.value;
        break;
      case Kind::Sum: {
        double S = 0.0;
        for (const auto& c : nd.children) S += c.coef * power(val[c.id], c.power);
        sum[i] = S;
        val[i] = nd.weight * power(S, nd.outer);
        break;
      }
    }
  }
  if (grad == nullptr && hess == nullptr) return val.back();

  // adjoints: d root / d node
  std::vector<double> adj(N, 0.0);
  adj[N - 1] = 1.0;
  for (std::size_t i = N; i-- > 0;) {
    const Node& nd = nodes_[i];
    if (adj[i] == 0.0) continue;
    if (nd.kind == Kind::Var) {
      if (grad != nullptr) (*grad)[nd.index] += scale * adj[i];
    } else if (nd.kind == Kind::Sum) {
      const double dS = nd.weight * nd.outer * power(sum[i], nd.outer - 1.0);
      for (const auto& c : nd.children) {
        adj[c.id] += adj[i] * dS * c.coef * c.power * power(val[c.id], c.power - 1.0);
      }
    }
  }
  if (hess == nullptr) return val.back();

  // forward sparse gradients of every node that is some node's child
  std::vector<SparseVec> sg(N);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const Node& nd = nodes_[i];
    if (nd.kind == Kind::Var) {
      sg[i] = {{nd.index, 1.0}};
    } else if (nd.kind == Kind::Sum) {
      const double dS = nd.weight * nd.outer * power(sum[i], nd.outer - 1.0);
      for (const auto& c : nd.children) {
        const double f = dS * c.coef * c.power * power(val[c.id], c.power - 1.0);
        for (const auto& [j, g] : sg[c.id]) sg[i].push_back({j, f * g});
      }
    }
  }

  for (std::size_t i = 0; i < N; ++i) {
    const Node& nd = nodes_[i];
    if (nd.kind != Kind::Sum || adj[i] == 0.0) continue;
    const double S = sum[i];
    const double alpha =
        scale * adj[i] * nd.weight * nd.outer * (nd.outer - 1.0) * power(S, nd.outer - 2.0);
    if (alpha != 0.0) {
      SparseVec J;
      for (const auto& c : nd.children) {
        const double u = c.coef * c.power * power(val[c.id], c.power - 1.0);
        for (const auto& [j, g] : sg[c.id]) J.push_back({j, u * g});
      }
      emit_outer(*hess, J, alpha);
    }
    const double beta = scale * adj[i] * nd.weight * nd.outer * power(S, nd.outer - 1.0);
    for (const auto& c : nd.children) {
      if (c.power == 1.0 || c.power == 0.0) continue;
      const double g = beta * c.coef * c.power * (c.power - 1.0) * power(val[c.id], c.power - 2.0);
      if (g != 0.0) emit_outer(*hess, sg[c.id], g);
    }
  }
  return val.back();
}

void LinearRows::add(std::initializer_list<std::pair<std::size_t, double>> terms, double b) {
  for (const auto& [j, a] : terms) {
    col.push_back(j);
    val.push_back(a);
  }
  ptr.push_back(col.size());
  rhs.push_back(b);
}

void LinearRows::add(const std::vector<std::pair<std::size_t, double>>& terms, double b) {
  for (const auto& [j, a] : terms) {
    col.push_back(j);
    val.push_back(a);
  }
  ptr.push_back(col.size());
  rhs.push_back(b);
}

double LinearRows::slack(std::size_t row, const std::vector<double>& z) const {
  double acc = 0.0;
  for (std::size_t p = ptr[row]; p < ptr[row + 1]; ++p) acc += val[p] * z[col[p]];
  return acc - rhs[row];
}

namespace {

class Barrier {
 public:
  Barrier(const Problem& pb, const std::vector<std::size_t>& active)
      : pb_(pb), active_(active), N_(pb.num_vars) {}

  bool has_upper(std::size_t j) const {
    return !pb_.upper.empty() && std::isfinite(pb_.upper[j]);
  }

  std::size_t barrier_terms() const {
    std::size_t m = N_ + active_.size() + pb_.nonlinear.size();
    for (std::size_t j = 0; j < N_; ++j) m += has_upper(j) ? 1 : 0;
    return m;
  }

  // t f(z) + barrier(z); +inf outside the domain
  double value(const std::vector<double>& z, double t, double* f_out = nullptr) const {
    double phi = 0.0;
    for (std::size_t j = 0; j < N_; ++j) {
      if (!(z[j] > 0.0)) return inf();
      phi -= std::log(z[j]);
      if (has_upper(j)) {
        const double s = pb_.upper[j] - z[j];
        if (!(s > 0.0)) return inf();
        phi -= std::log(s);
      }
    }
    for (std::size_t r : active_) {
      const double s = pb_.rows.slack(r, z);
      if (!(s > 0.0)) return inf();
      phi -= std::log(s);
    }
    for (const auto& nl : pb_.nonlinear) {
      const double s = z[nl.epigraph] - nl.f.value(z);
      if (!(s > 0.0)) return inf();
      phi -= std::log(s);
    }
    const double f = pb_.objective.value(z);
    if (!std::isfinite(f)) return inf();
    if (f_out != nullptr) *f_out = f;
    return t * f + phi;
  }

  // gradient and Hessian (lower triangle) of t f + barrier
  double derivatives(const std::vector<double>& z, double t, std::vector<double>& grad,
                     Triplets& hess) const {
    grad.assign(N_, 0.0);
    hess.clear();
    const double f = pb_.objective.evaluate(z, &grad, &hess, t);
    for (std::size_t j = 0; j < N_; ++j) {
      double h = 1.0 / (z[j] * z[j]);
      grad[j] -= 1.0 / z[j];
      if (has_upper(j)) {
        const double s = pb_.upper[j] - z[j];
        grad[j] += 1.0 / s;
        h += 1.0 / (s * s);
      }
      hess.push_back({{j, j}, h});
    }
    const auto& rows = pb_.rows;
    for (std::size_t r : active_) {
      const double s = rows.slack(r, z);
      const double inv = 1.0 / s;
      SparseVec a;
      for (std::size_t p = rows.ptr[r]; p < rows.ptr[r + 1]; ++p) {
        grad[rows.col[p]] -= rows.val[p] * inv;
        a.push_back({rows.col[p], rows.val[p]});
      }
      emit_outer(hess, a, inv * inv);
    }
    for (const auto& nl : pb_.nonlinear) {
      std::vector<double> g(N_, 0.0);
      Triplets h;
      const double s = z[nl.epigraph] - nl.f.evaluate(z, &g, &h);
      g[nl.epigraph] -= 1.0;
      const double inv = 1.0 / s;
      SparseVec a;
      for (std::size_t j = 0; j < N_; ++j) {
        if (g[j] != 0.0) {
          grad[j] += g[j] * inv;
          a.push_back({j, g[j]});
        }
      }
      for (auto& e : h) hess.push_back({e.first, e.second * inv});
      emit_outer(hess, a, inv * inv);
    }
    return f;
  }

  // largest step in (0, 1] keeping the linear parts strictly feasible
  double max_step(const std::vector<double>& z, const std::vector<double>& dz) const {
    double smax = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < N_; ++j) {
      if (dz[j] < 0.0) smax = std::min(smax, -z[j] / dz[j]);
      if (has_upper(j) && dz[j] > 0.0) smax = std::min(smax, (pb_.upper[j] - z[j]) / dz[j]);
    }
    const auto& rows = pb_.rows;
    for (std::size_t r : active_) {
      double ad = 0.0;
      for (std::size_t p = rows.ptr[r]; p < rows.ptr[r + 1]; ++p) ad += rows.val[p] * dz[rows.col[p]];
      if (ad < 0.0) smax = std::min(smax, -rows.slack(r, z) / ad);
    }
    return std::min(1.0, 0.99 * smax);
  }

  static double inf() { return std::numeric_limits<double>::infinity(); }

 private:
  const Problem& pb_;
  const std::vector<std::size_t>& active_;
  std::size_t N_;
};

bool newton_direction(std::size_t N, const Triplets& trip, const std::vector<double>& grad,
                      std::vector<double>& dz) {
  std::vector<Eigen::Triplet<double>> et;
  et.reserve(trip.size());
  double max_diag = 0.0;
  for (const auto& e : trip) {
    et.emplace_back(static_cast<int>(e.first.first), static_cast<int>(e.first.second), e.second);
    if (e.first.first == e.first.second) max_diag = std::max(max_diag, std::fabs(e.second));
  }
  Eigen::SparseMatrix<double> H(static_cast<int>(N), static_cast<int>(N));
  H.setFromTriplets(et.begin(), et.end());
  Eigen::VectorXd rhs(static_cast<int>(N));
  for (std::size_t j = 0; j < N; ++j) rhs[static_cast<int>(j)] = -grad[j];

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  double reg = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::SparseMatrix<double> M = H;
    if (reg > 0.0) {
      for (int j = 0; j < M.rows(); ++j) M.coeffRef(j, j) += reg;
    }
    ldlt.compute(M);
    if (ldlt.info() == Eigen::Success) {
      bool positive = true;
      const auto& D = ldlt.vectorD();
      for (int j = 0; j < D.size(); ++j) positive = positive && D[j] > 0.0;
      if (positive) {
        Eigen::VectorXd x = ldlt.solve(rhs);
        if (ldlt.info() == Eigen::Success && x.allFinite()) {
          dz.assign(x.data(), x.data() + x.size());
          return true;
        }
      }
    }
    reg = reg == 0.0 ? 1e-14 * std::max(max_diag, 1.0) : reg * 100.0;
  }
  return false;
}

}  // namespace

Result solve(const Problem& pb, const std::vector<double>& anchor,
             std::vector<std::size_t> initial_rows, const Options& opt) {
  const std::size_t N = pb.num_vars;
  if (anchor.size() != N) throw std::invalid_argument("anchor has the wrong dimension");
  if (!pb.upper.empty() && pb.upper.size() != N) {
    throw std::invalid_argument("upper bounds must have one entry per variable");
  }
  std::vector<char> is_active(pb.rows.size(), 0);
  std::vector<std::size_t> active;
  if (initial_rows.empty()) {
    active.resize(pb.rows.size());
    for (std::size_t r = 0; r < active.size(); ++r) active[r] = r;
  } else {
    std::sort(initial_rows.begin(), initial_rows.end());
    initial_rows.erase(std::unique(initial_rows.begin(), initial_rows.end()), initial_rows.end());
    active = std::move(initial_rows);
  }
  for (std::size_t r : active) is_active[r] = 1;

  Barrier barrier(pb, active);
  if (!std::isfinite(barrier.value(anchor, 1.0))) {
    throw std::invalid_argument("barrier solve needs a strictly feasible anchor");
  }
  for (std::size_t r = 0; r < pb.rows.size(); ++r) {
    if (!(pb.rows.slack(r, anchor) > 0.0)) {
      throw std::invalid_argument("anchor violates linear row " + std::to_string(r));
    }
  }

  Result res;
  std::vector<double> z = anchor, grad, dz, trial(N);
  Triplets trip;

  for (std::size_t round = 0; round < opt.max_rounds; ++round) {
    res.rounds = round + 1;
    const double m = static_cast<double>(barrier.barrier_terms());
    double f = pb.objective.value(z);
    const double gap0 = round == 0 ? std::fabs(f) : 1e-3 * std::fabs(f);
    double t = m / std::max(gap0, opt.abs_tol);

    // m/t bounds objective - optimum only at a centred point
    bool centered = false;
    for (;;) {
      centered = false;
      for (std::size_t it = 0; it < opt.max_newton; ++it) {
        f = barrier.derivatives(z, t, grad, trip);
        ++res.newton_steps;
        if (!newton_direction(N, trip, grad, dz)) break;
        double lambda2 = 0.0;
        for (std::size_t j = 0; j < N; ++j) lambda2 -= grad[j] * dz[j];
        const double phi0 = barrier.value(z, t);
        // below this the decrement is rounding noise in phi
        const double noise = 1e-13 * (std::fabs(phi0) + m);
        if (!(lambda2 > std::max(1e-11, noise))) {
          centered = true;
          break;
        }
        double s = barrier.max_step(z, dz);
        bool accepted = false;
        while (s > 1e-14) {
          for (std::size_t j = 0; j < N; ++j) trial[j] = z[j] + s * dz[j];
          const double phi = barrier.value(trial, t);
          // inside the quadratic-convergence region the full step is taken
          if (std::isfinite(phi) && (lambda2 < 0.0625 || phi <= phi0 - 0.25 * s * lambda2)) {
            accepted = true;
            break;
          }
          s *= 0.5;
        }
        if (!accepted) break;
        const bool stalled = lambda2 < 0.0625 && !(barrier.value(trial, t) < phi0);
        z.swap(trial);
        if (stalled) {
          centered = true;
          break;
        }
      }
      if (!centered) break;
      f = pb.objective.value(z);
      if (m / t <= std::max(opt.rel_tol * std::fabs(f), opt.abs_tol)) break;
      t *= opt.mu;
    }
    res.gap = centered ? m / t : std::numeric_limits<double>::infinity();

    std::vector<std::size_t> violated;
    for (std::size_t r = 0; r < pb.rows.size(); ++r) {
      if (!is_active[r] && pb.rows.slack(r, z) < 0.0) violated.push_back(r);
    }
    if (violated.empty()) {
      res.converged = centered;
      break;
    }
    // pull back toward the anchor until every new row has a margin
    double theta = 0.0;
    for (std::size_t r : violated) {
      const double sa = pb.rows.slack(r, anchor);
      const double sz = pb.rows.slack(r, z);
      theta = std::max(theta, (0.05 * sa - sz) / (sa - sz));
    }
    theta = std::min(theta, 1.0);
    for (std::size_t j = 0; j < N; ++j) z[j] = (1.0 - theta) * z[j] + theta * anchor[j];
    for (std::size_t r : violated) {
      is_active[r] = 1;
      active.push_back(r);
    }
  }
  res.active_rows = active.size();
  res.objective = pb.objective.value(z);
  res.z = std::move(z);
  return res;
}

}  // namespace hajlasz::convex

namespace hajlasz::convex {

namespace {

// diag(d) + A_S' diag(w) A_S over the active rows S; dense once the pattern
// fills about a tenth of the matrix.
class NormalEquations {
 public:
  NormalEquations(const LinearRows& rows, const std::vector<std::size_t>& active, std::size_t n)
      : rows_(rows), active_(active), n_(n) {
    double cells = static_cast<double>(n);
    for (std::size_t r : active) {
      const double len = static_cast<double>(rows.ptr[r + 1] - rows.ptr[r]);
      cells += len * (len - 1.0) / 2.0;
    }
    dense_ = cells > 0.05 * static_cast<double>(n) * static_cast<double>(n);
  }

  bool factor(const std::vector<double>& d, const std::vector<double>& w) {
    double max_diag = 1.0;
    for (double v : d) max_diag = std::max(max_diag, std::fabs(v));
    double reg = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (dense_ ? factor_dense(d, w, reg) : factor_sparse(d, w, reg)) return true;
      reg = reg == 0.0 ? 1e-14 * max_diag : reg * 100.0;
    }
    return false;
  }

  void solve(const std::vector<double>& rhs, std::vector<double>& x) const {
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(n_));
    const Eigen::VectorXd sol = dense_ ? Eigen::VectorXd(llt_.solve(b)) : Eigen::VectorXd(ldlt_.solve(b));
    x.assign(sol.data(), sol.data() + sol.size());
  }

 private:
  template <class Add>
  void assemble(const std::vector<double>& d, const std::vector<double>& w, double reg, Add&& add) const {
    for (std::size_t j = 0; j < n_; ++j) add(j, j, d[j] + reg);
    for (std::size_t k = 0; k < active_.size(); ++k) {
      const std::size_t r = active_[k];
      for (std::size_t p = rows_.ptr[r]; p < rows_.ptr[r + 1]; ++p) {
        for (std::size_t q = rows_.ptr[r]; q < rows_.ptr[r + 1]; ++q) {
          if (rows_.col[p] >= rows_.col[q]) add(rows_.col[p], rows_.col[q], w[k] * rows_.val[p] * rows_.val[q]);
        }
      }
    }
  }

  bool factor_dense(const std::vector<double>& d, const std::vector<double>& w, double reg) {
    const auto n = static_cast<Eigen::Index>(n_);
    dense_m_.setZero(n, n);
    assemble(d, w, reg, [&](std::size_t i, std::size_t j, double v) {
      dense_m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += v;
    });
    llt_.compute(dense_m_);
    return llt_.info() == Eigen::Success;
  }

  bool factor_sparse(const std::vector<double>& d, const std::vector<double>& w, double reg) {
    trip_.clear();
    assemble(d, w, reg, [&](std::size_t i, std::size_t j, double v) {
      trip_.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
    });
    sparse_m_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    sparse_m_.setFromTriplets(trip_.begin(), trip_.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(sparse_m_);
      analyzed_ = true;
    }
    ldlt_.factorize(sparse_m_);
    if (ldlt_.info() != Eigen::Success) return false;
    const auto& D = ldlt_.vectorD();
    for (Eigen::Index j = 0; j < D.size(); ++j) {
      if (!(D[j] > 0.0)) return false;
    }
    return true;
  }

  const LinearRows& rows_;
  const std::vector<std::size_t>& active_;
  std::size_t n_;
  bool dense_ = false;
  Eigen::MatrixXd dense_m_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::vector<Eigen::Triplet<double>> trip_;
  Eigen::SparseMatrix<double> sparse_m_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  bool analyzed_ = false;
};

// Largest alpha in (0, 1] with v + alpha dv >= (1 - fraction) v, scaled by
// the fraction-to-boundary rule.
double step_to_boundary(const std::vector<double>& v, const std::vector<double>& dv, double fraction) {
  double a = 1.0 / fraction;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  }
  return std::min(1.0, fraction * a);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// max over theta >= 0 of L(theta lambda), L the Lagrangian dual of the
// relaxation with the active rows only (a lower bound on the full optimum).
double separable_dual_bound(const SeparableProblem& pb, const std::vector<std::size_t>& active,
                            const std::vector<double>& lam) {
  const auto& rows = pb.rows;
  std::vector<double> c(pb.num_vars, 0.0);
  double B = 0.0;
  for (std::size_t k = 0; k < active.size(); ++k) {
    const std::size_t r = active[k];
    B += rows.rhs[r] * lam[k];
    for (std::size_t p = rows.ptr[r]; p < rows.ptr[r + 1]; ++p) c[rows.col[p]] += rows.val[p] * lam[k];
  }
  if (!(B > 0.0)) return 0.0;
  if (pb.p == 1.0) {
    // inf_z (w - theta c) z over z >= 0 is finite only for theta c <= w
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] > 0.0) theta = std::min(theta, pb.weight[j] / c[j]);
    }
    return std::isfinite(theta) ? theta * B : 0.0;
  }
  // inf_z w z^p - c z = -(p-1) w (c/(w p))^{p'} for c > 0, homogeneous of degree p'
  const double p = pb.p, pc = p / (p - 1.0);
  double C = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] > 0.0) C += (p - 1.0) * pb.weight[j] * std::pow(c[j] / (pb.weight[j] * p), pc);
  }
  if (!(C > 0.0)) return 0.0;
  const double theta = std::pow(B / (pc * C), 1.0 / (pc - 1.0));
  return theta * B - std::pow(theta, pc) * C;
}

}  // namespace

Result solve_separable(const SeparableProblem& pb, const std::vector<double>& anchor,
                       std::vector<std::size_t> initial_rows, const Options& opt) {
  const std::size_t N = pb.num_vars;
  const auto& rows = pb.rows;
  if (anchor.size() != N || pb.weight.size() != N) {
    throw std::invalid_argument("anchor and weights need one entry per variable");
  }
  if (!(pb.p >= 1.0)) throw std::invalid_argument("separable solve needs p >= 1");
  double top = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    if (!(pb.weight[j] > 0.0)) throw std::invalid_argument("separable solve needs positive weights");
    if (!(anchor[j] >= 0.0)) throw std::invalid_argument("separable solve needs a nonnegative anchor");
    top = std::max(top, anchor[j]);
  }
  // the interior needs z > 0; zero entries are lifted slightly
  std::vector<double> start(anchor);
  for (auto& v : start) {
    if (v == 0.0) v = 1e-6 * (top > 0.0 ? top : 1.0);
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!(rows.slack(r, start) > 0.0)) {
      throw std::invalid_argument("anchor violates linear row " + std::to_string(r));
    }
  }
  std::vector<char> is_active(rows.size(), 0);
  std::vector<std::size_t> active;
  if (initial_rows.empty()) {
    active.resize(rows.size());
    for (std::size_t r = 0; r < active.size(); ++r) active[r] = r;
  } else {
    std::sort(initial_rows.begin(), initial_rows.end());
    initial_rows.erase(std::unique(initial_rows.begin(), initial_rows.end()), initial_rows.end());
    active = std::move(initial_rows);
  }
  for (std::size_t r : active) is_active[r] = 1;

  const double p = pb.p;
  auto objective = [&](const std::vector<double>& z) {
    double f = 0.0;
    for (std::size_t j = 0; j < N; ++j) f += pb.weight[j] * power(z[j], p);
    return f;
  };
  auto row_apply = [&](const std::vector<double>& dz, std::vector<double>& out) {
    out.resize(active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t r = active[k];
      double acc = 0.0;
      for (std::size_t q = rows.ptr[r]; q < rows.ptr[r + 1]; ++q) acc += rows.val[q] * dz[rows.col[q]];
      out[k] = acc;
    }
  };
  auto add_transpose = [&](const std::vector<double>& y, std::vector<double>& out) {
    for (std::size_t k = 0; k < active.size(); ++k) {
      const std::size_t r = active[k];
      for (std::size_t q = rows.ptr[r]; q < rows.ptr[r + 1]; ++q) out[rows.col[q]] += rows.val[q] * y[k];
    }
  };

  Result res;
  std::vector<double> z = start;
  double gap = std::numeric_limits<double>::infinity();

  for (std::size_t round = 0; round < opt.max_rounds; ++round) {
    res.rounds = round + 1;
    const std::size_t M = active.size();
    const double terms = static_cast<double>(M + N);
    std::vector<double> s(M), lam(M), nu(N);
    for (std::size_t k = 0; k < M; ++k) s[k] = rows.slack(active[k], z);
    const double mu0 = std::max(objective(z), 1e-300) / terms;
    for (std::size_t k = 0; k < M; ++k) lam[k] = mu0 / s[k];
    for (std::size_t j = 0; j < N; ++j) nu[j] = mu0 / z[j];

    NormalEquations normal(rows, active, N);
    std::vector<double> grad(N), diag(N), rw(M), rp(M), rhs(N), tmp(M);
    std::vector<double> dz, ds(M), dl(M), dn(N), dz_aff, ds_aff(M), dl_aff(M), dn_aff(N);
    std::vector<double> best_z = z;
    gap = std::numeric_limits<double>::infinity();

    for (std::size_t it = 0; it < opt.max_newton; ++it) {
      double f = 0.0;
      bool feasible = true;
      for (std::size_t k = 0; k < M && feasible; ++k) feasible = rows.slack(active[k], z) >= 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        f += pb.weight[j] * power(z[j], p);
        grad[j] = pb.weight[j] * p * power(z[j], p - 1.0);
        const double h = p == 1.0 ? 0.0 : pb.weight[j] * p * (p - 1.0) * power(z[j], p - 2.0);
        diag[j] = h + nu[j] / z[j];
      }
      if (feasible) {
        const double g = f - separable_dual_bound(pb, active, lam);
        if (g < gap) {
          gap = g;
          best_z = z;
        }
        if (gap <= std::max(opt.rel_tol * std::fabs(f), opt.abs_tol)) break;
      }
      const double mu = (dot(s, lam) + dot(z, nu)) / terms;
      for (std::size_t k = 0; k < M; ++k) {
        rp[k] = rows.slack(active[k], z) - s[k];
        rw[k] = lam[k] / s[k];
      }
      if (!normal.factor(diag, rw)) break;
      ++res.newton_steps;

      // predictor: complementarity target 0
      rhs.assign(N, 0.0);
      for (std::size_t k = 0; k < M; ++k) tmp[k] = -rw[k] * rp[k];
      add_transpose(tmp, rhs);
      for (std::size_t j = 0; j < N; ++j) rhs[j] -= grad[j];
      normal.solve(rhs, dz_aff);
      row_apply(dz_aff, ds_aff);
      for (std::size_t k = 0; k < M; ++k) {
        ds_aff[k] += rp[k];
        dl_aff[k] = -lam[k] - rw[k] * ds_aff[k];
      }
      for (std::size_t j = 0; j < N; ++j) dn_aff[j] = -nu[j] - nu[j] / z[j] * dz_aff[j];
      const double ap = std::min(step_to_boundary(z, dz_aff, 1.0), step_to_boundary(s, ds_aff, 1.0));
      const double ad = std::min(step_to_boundary(lam, dl_aff, 1.0), step_to_boundary(nu, dn_aff, 1.0));
      double mu_aff = 0.0;
      for (std::size_t k = 0; k < M; ++k) mu_aff += (s[k] + ap * ds_aff[k]) * (lam[k] + ad * dl_aff[k]);
      for (std::size_t j = 0; j < N; ++j) mu_aff += (z[j] + ap * dz_aff[j]) * (nu[j] + ad * dn_aff[j]);
      mu_aff /= terms;
      const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

      // corrector with the second-order term
      rhs.assign(N, 0.0);
      for (std::size_t k = 0; k < M; ++k) {
        const double ts = sigma * mu - ds_aff[k] * dl_aff[k];
        tmp[k] = ts / s[k] - rw[k] * rp[k];
      }
      add_transpose(tmp, rhs);
      for (std::size_t j = 0; j < N; ++j) {
        const double tz = sigma * mu - dz_aff[j] * dn_aff[j];
        rhs[j] += tz / z[j] - grad[j];
      }
      normal.solve(rhs, dz);
      row_apply(dz, ds);
      for (std::size_t k = 0; k < M; ++k) {
        const double ts = sigma * mu - ds_aff[k] * dl_aff[k];
        ds[k] += rp[k];
        dl[k] = ts / s[k] - lam[k] - rw[k] * ds[k];
      }
      for (std::size_t j = 0; j < N; ++j) {
        const double tz = sigma * mu - dz_aff[j] * dn_aff[j];
        dn[j] = tz / z[j] - nu[j] - nu[j] / z[j] * dz[j];
      }
      double a_p = std::min(step_to_boundary(z, dz, 0.995), step_to_boundary(s, ds, 0.995));
      double a_d = std::min(step_to_boundary(lam, dl, 0.995), step_to_boundary(nu, dn, 0.995));
      // a nonlinear objective couples the primal and dual residuals
      if (p != 1.0) a_p = a_d = std::min(a_p, a_d);
      if (!(std::max(a_p, a_d) > 1e-12)) break;
      for (std::size_t j = 0; j < N; ++j) {
        z[j] += a_p * dz[j];
        nu[j] += a_d * dn[j];
      }
      for (std::size_t k = 0; k < M; ++k) {
        s[k] += a_p * ds[k];
        lam[k] += a_d * dl[k];
      }
    }
    z = best_z;
    res.gap = gap;

    std::vector<std::size_t> violated;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!is_active[r] && rows.slack(r, z) < 0.0) violated.push_back(r);
    }
    if (violated.empty()) {
      res.converged = std::isfinite(gap);
      break;
    }
    double theta = 0.0;
    for (std::size_t r : violated) {
      const double sa = rows.slack(r, start);
      const double sz = rows.slack(r, z);
      theta = std::max(theta, (0.05 * sa - sz) / (sa - sz));
    }
    theta = std::min(theta, 1.0);
    for (std::size_t j = 0; j < N; ++j) z[j] = (1.0 - theta) * z[j] + theta * start[j];
    for (std::size_t r : violated) {
      is_active[r] = 1;
      active.push_back(r);
    }
  }
  res.active_rows = active.size();
  res.objective = objective(z);
  res.z = std::move(z);
  return res;
}

}  // namespace hajlasz::convex
