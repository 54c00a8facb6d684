#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace hq {

enum class Mode : std::uint8_t { kBiased = 0, kUnbiased = 1 };

// Companding map used by the scalar quantizer: the CDF of N(0, 3), i.e. the
// normalized cube root of the standard normal density.
double companding_cdf(double t);

// Inverse of companding_cdf, sqrt(3) * Phi^{-1}(p). Throws std::domain_error
// unless p is strictly inside (0, 1).
double companding_quantile(double p);

// Density of N(0, 3).
double companding_density(double t);

// (F^{-1})'(s) = 1 / F'(F^{-1}(s)).
double companding_quantile_slope(double s);

// Reconstruction map for the unbiased quantizer. Its average over any window of
// width 1/(B-1) centred at r equals companding_quantile(r). Built from
// companding_quantile on the central cell ((1-delta)/2, (1+delta)/2] and
// extended outward by midpoint-derivative steps of width delta = 1/(B-1).
// Domain is [-delta/2, 1 + delta/2]; the endpoints take the one-sided limits
// (-inf and +inf). Throws std::domain_error outside the domain.
double unbiased_reconstruction(double r, int buckets);

// Scalar codebook for one (mode, B, U).
struct ScalarCodebook {
  Mode mode = Mode::kUnbiased;
  int buckets = 0;
  double dither = 0.0;
  Eigen::VectorXd recon;  // q_0 < q_1 < ... < q_{B-1}
  Eigen::VectorXd grid;   // biased only: h_0 = 0, ..., h_B = 1
};

// Throws std::invalid_argument for B < 2, B not a power of two, or U outside [0, 1).
ScalarCodebook build_codebook(Mode mode, int buckets, double dither);

// Bucket index of t. Biased: the j with h_j <= F(t) < h_{j+1}. Unbiased:
// floor((B-1) F(t) - U) + 1, clamped to [0, B-1]. Throws on NaN.
int quantize_scalar(double t, const ScalarCodebook& cb);

double reconstruct_scalar(int j, const ScalarCodebook& cb);

inline double quant(double t, const ScalarCodebook& cb) {
  return reconstruct_scalar(quantize_scalar(t, cb), cb);
}

}  // namespace hq
