#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace hq::oracle {

using Eigen::Index;

inline constexpr int kMaxEnumerationDim = 12;

// Exact E over all 2^d sign patterns: 2^{-d} sum_eps f(eps). d in [1, 12].
double enumerate_rademacher_expectation(const std::function<double(const Eigen::VectorXd&)>& f,
                                        int d);

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b], split first at every breakpoint
// strictly inside (a, b). The integrand is never evaluated at a piece
// endpoint. Throws QuadratureError if the error estimate does not reach tol.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, double tol = 1e-11);

// E_U g(U) for U ~ Unif[0, 1), with g smooth between the given jump points.
inline double u_average(const std::function<double(double)>& g, std::vector<double> breakpoints,
                        double tol = 1e-10) {
  return integrate_piecewise(g, 0.0, 1.0, std::move(breakpoints), tol);
}

// Values of U in (0, 1) at which the unbiased-mode bucket of t changes, plus
// U = 1/2 where the centroid table switches its anchor.
std::vector<double> unbiased_dither_breakpoints(double t, int buckets);

// Values of U in (0, 1) at which the biased-mode bucket of t changes.
std::vector<double> biased_dither_breakpoints(double t, int buckets);

// Jump points of the unbiased reconstruction map inside (a, b): the edges
// (1 - delta)/2 + m delta of its central-cell tiling.
std::vector<double> reconstruction_map_breakpoints(double a, double b, int buckets);

// Explicit Sylvester-recursion Hadamard matrix scaled to be orthonormal.
// d must be a power of two <= 16.
Eigen::MatrixXd dense_hadamard(Index d);

struct EnumerationReport {
  int d = 0;
  std::string quantity;
  double exact = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  // true: reference is an upper bound and the check is exact <= reference.
  bool is_bound = false;

  bool passes(double tol) const {
    return is_bound ? exact <= reference + tol : abs_error <= tol;
  }
};

// E[X^2 Y^2] by enumeration against 1 + 2<a,b>^2 - 2 sum a_j^2 b_j^2.
EnumerationReport fourth_moment_report(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// E exp(lambda X_a) by enumeration against prod_j cosh(lambda a_j).
EnumerationReport mgf_identity_report(const Eigen::VectorXd& a, double lambda);

// E exp(lambda X_a) against the subgaussian bound exp(lambda^2 / 2).
EnumerationReport mgf_bound_report(const Eigen::VectorXd& a, double lambda);

// E exp(X_a^2 / 3) against sqrt(3).
EnumerationReport square_mgf_bound_report(const Eigen::VectorXd& a);

}  // namespace hq::oracle
