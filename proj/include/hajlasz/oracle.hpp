#pragma once
// Independent exact solvers for small instances, used to verify the barrier
// solver: Lemke complementary pivoting for convex quadratic programs,
// brute-force active-set enumeration, and a Kelley cutting-plane loop for
// the one non-quadratic case.

#include <string>
#include <vector>

#include "hajlasz/norms.hpp"

namespace hajlasz::oracle {

// minimize 1/2 z'Hz + f'z + c0  subject to  A z >= b, z >= 0.
// H must be symmetric positive semidefinite. Dense row-major storage.
struct QuadraticProgram {
  std::size_t n = 0;
  std::vector<double> H;  // n x n
  std::vector<double> f;
  double c0 = 0.0;
  std::vector<double> A;  // rows x n
  std::vector<double> b;

  explicit QuadraticProgram(std::size_t num_vars = 0);
  std::size_t rows() const { return b.size(); }
  // returns the row index
  std::size_t add_row(const std::vector<std::pair<std::size_t, double>>& terms, double rhs);
  double& h(std::size_t i, std::size_t j) { return H[i * n + j]; }
  double objective(const std::vector<double>& z) const;
  bool feasible(const std::vector<double>& z, double tol) const;
};

struct QpSolution {
  std::vector<double> z;
  double value = 0.0;
  std::size_t pivots = 0;
};

// Lemke's method on the KKT complementarity problem with a lexicographic
// ratio test; long double tableau. Throws on ray termination.
QpSolution solve_lemke(const QuadraticProgram& qp);

// Tries every set of active rows and pinned variables of size <= n and keeps
// the best KKT point. Exponential; limited to n + rows <= 18.
QpSolution solve_enumeration(const QuadraticProgram& qp);

// All vertices of {z >= 0, A z >= b}; limited to n + rows <= 24.
std::vector<std::vector<double>> enumerate_vertices(const QuadraticProgram& qp);

}  // namespace hajlasz::oracle

namespace hajlasz {

enum class OracleMethod { Pivoting, Enumeration };

struct OracleResult {
  double seminorm = 0.0;
  std::string method;
};

// Exact seminorm for n <= 12, p in {1,2}, q in {1,2,inf}. Throws
// std::invalid_argument outside that range. Triebel-Lizorkin with p = 1,
// q = 2 is not a QP; it runs cutting planes over Lemke and has no
// enumeration variant.
OracleResult oracle_min_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                             const NormParams& params,
                             OracleMethod method = OracleMethod::Pivoting);

// Best value of the exact objective over the vertices of the constraint
// polyhedron, per band for Besov. This is the global minimum whenever the
// objective is concave (p <= 1, and q <= 1 for Triebel-Lizorkin). n <= 6.
double vertex_min_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                       const NormParams& params);

}  // namespace hajlasz
