#pragma once
// Primal barrier path-following for smooth convex programs
//
//   minimize f(z)  subject to  A z >= b,  0 <= z <= upper,  z[tau_j] >= F_j(z),
//
// where f and F_j are power-sum expression trees. Linear rows may be
// generated lazily: the solve starts from a subset and adds every violated
// row until the iterate is feasible for all of them.

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

namespace hajlasz::convex {

// Tree of nodes  w * (sum_i c_i * child_i^{a_i})^b  over variable and
// constant leaves. Children must be created before their parent; the last
// node created is the root. Every node has at most one parent.
class Expr {
 public:
  struct Child {
    int id;
    double coef;
    double power;
  };

  int var(std::size_t index);
  int constant(double value);
  int node(double weight, double outer, std::vector<Child> children);

  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return nodes_.size(); }

  double value(const std::vector<double>& z) const;
  // gradient is accumulated into `grad` (dense); Hessian entries (row >= col)
  // scaled by `scale` are appended to `hess`.
  double evaluate(const std::vector<double>& z, std::vector<double>* grad,
                  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>>* hess,
                  double scale = 1.0) const;

 private:
  enum class Kind { Var, Const, Sum };
  struct Node {
    Kind kind;
    std::size_t index = 0;
    double value = 0.0;
    double weight = 1.0;
    double outer = 1.0;
    std::vector<Child> children;
  };
  std::vector<Node> nodes_;
};

struct LinearRows {
  std::vector<std::size_t> ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;
  std::vector<double> rhs;

  std::size_t size() const { return rhs.size(); }
  // sum_j coef_j z[index_j] >= rhs
  void add(std::initializer_list<std::pair<std::size_t, double>> terms, double b);
  void add(const std::vector<std::pair<std::size_t, double>>& terms, double b);
  double slack(std::size_t row, const std::vector<double>& z) const;
};

struct NonlinearConstraint {
  Expr f;
  std::size_t epigraph;  // z[epigraph] >= f(z)
};

struct Problem {
  std::size_t num_vars = 0;
  Expr objective;
  std::vector<double> upper;  // empty, or one entry per variable (+inf = none)
  LinearRows rows;
  std::vector<NonlinearConstraint> nonlinear;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  double mu = 20.0;
  std::size_t max_newton = 400;
  std::size_t max_rounds = 60;
};

struct Result {
  std::vector<double> z;
  double objective = 0.0;
  // bound on objective - optimum; infinite when the final iterate is not
  // certified (for the barrier: not centred)
  double gap = std::numeric_limits<double>::infinity();
  std::size_t newton_steps = 0;
  std::size_t rounds = 0;
  std::size_t active_rows = 0;
  bool converged = false;
};

// `anchor` must be strictly feasible for every row, bound and nonlinear
// constraint. An empty `initial_rows` activates every row.
Result solve(const Problem& problem, const std::vector<double>& anchor,
             std::vector<std::size_t> initial_rows, const Options& options = {});

//   minimize sum_j weight_j z_j^p  subject to  A z >= b,  z >= 0,   p >= 1.
struct SeparableProblem {
  std::size_t num_vars = 0;
  std::vector<double> weight;  // nonnegative
  double p = 1.0;
  LinearRows rows;
};

// Primal-dual interior point (Mehrotra predictor-corrector) with the same
// lazy row activation as solve(). Iterates stay primal feasible, and `gap`
// is objective minus a Lagrangian dual bound, so it is a certified bound on
// objective - optimum. Counts interior-point iterations as newton_steps.
Result solve_separable(const SeparableProblem& problem, const std::vector<double>& anchor,
                       std::vector<std::size_t> initial_rows, const Options& options = {});

}  // namespace hajlasz::convex
