#pragma once
// Fractional s-gradients and the Hajlasz-Besov, Hajlasz-Triebel-Lizorkin and
// Hajlasz seminorms as minimum-norm problems over them.

#include <limits>
#include <string>
#include <vector>

#include "hajlasz/space.hpp"

namespace hajlasz {

enum class Flavor { Besov, TriebelLizorkin, Hajlasz };

std::string to_string(Flavor f);
Flavor parse_flavor(const std::string& name);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormParams {
  double s = 1.0;
  double p = 1.0;
  double q = kInf;  // kInf for l^infinity
  Flavor flavor = Flavor::Hajlasz;

  NormParams() = default;
  // Hajlasz forces q = infinity regardless of the q passed.
  NormParams(double s, double p, double q, Flavor flavor);

  // Convex minimum-norm problem. Besov decouples into per-band L^p problems,
  // so it only needs p >= 1; the other flavors also need q >= 1.
  bool certified() const;
};

struct PairConstraint {
  std::size_t x;
  std::size_t y;
  double c;  // |u(x) - u(y)| / d(x,y)^s
};

// All unordered pairs with 2^{-k-1} <= d(x,y) < 2^{-k}.
struct PairBand {
  int k = 0;
  std::vector<PairConstraint> pairs;
};

// Exact dyadic band of a positive distance: 2^{-k-1} <= d < 2^{-k}.
int band_index(double d);

// Nonempty bands in ascending k.
std::vector<PairBand> pair_bands(const MetricMeasureSpace& space, const FunctionOnSpace& u, double s);

// g[k - scales.k_min] is the n-vector g_k.
struct FractionalGradient {
  ScaleRange scales;
  std::vector<std::vector<double>> g;

  FractionalGradient() = default;
  FractionalGradient(ScaleRange range, std::size_t n);

  std::vector<double>& at(int k) { return g.at(static_cast<std::size_t>(k - scales.k_min)); }
  const std::vector<double>& at(int k) const {
    return g.at(static_cast<std::size_t>(k - scales.k_min));
  }
};

// g_k(x) + g_k(y) >= c_xy - 1e-9 for every banded pair.
bool is_feasible(const FractionalGradient& gradient, const std::vector<PairBand>& bands);

// g_k(x) = max over band-k partners y of c_xy / 2.
FractionalGradient canonical_gradient(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                      double s);

double aggregate_norm(const FractionalGradient& gradient, const NormParams& params,
                      const MetricMeasureSpace& space);

// (sum_x m_x |u(x)|^p)^{1/p}
double lp_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u, double p);

enum class CertificateMode { Certified, UpperBoundOnly };
std::string to_string(CertificateMode m);

struct SolveCertificate {
  CertificateMode mode = CertificateMode::Certified;
  std::string method;
  // Certified: bound on (value - optimum)/value of the minimised objective.
  double residual = 0.0;
  std::size_t newton_steps = 0;
  std::size_t rounds = 0;
};

struct MinNormResult {
  FractionalGradient gradient;
  double seminorm = 0.0;
  SolveCertificate certificate;
};

MinNormResult min_norm_gradient(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                const NormParams& params);

// Besov seminorm from one joint solve over all bands, minimising
// sum_k ||g_k||_p^q. Requires p >= 1 and 1 <= q < infinity.
MinNormResult besov_joint_seminorm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                   const NormParams& params);

struct NormReport {
  double lp = 0.0;
  double seminorm = 0.0;
  double total = 0.0;
  SolveCertificate certificate;
};

NormReport full_norm_report(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                            const NormParams& params);
double full_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                 const NormParams& params);

// Minimises the exact objective by linearise-and-solve iterations from
// several starts; the value is an upper bound on the infimum. Used when the
// parameters are not certified, and exposed for testing.
MinNormResult heuristic_min_norm(const MetricMeasureSpace& space, const FunctionOnSpace& u,
                                 const NormParams& params, std::size_t random_starts = 3,
                                 std::uint64_t seed = 1);

}  // namespace hajlasz
