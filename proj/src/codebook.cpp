#include "hq/codebook.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hq/gaussian.hpp"

namespace hq {
namespace {

constexpr double kSqrt3 = 1.7320508075688772935;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double companding_cdf(double t) {
  if (std::isnan(t)) throw std::domain_error("companding_cdf: NaN input");
  return normal_cdf(t / kSqrt3);
}

double companding_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("companding_quantile: p must lie strictly inside (0, 1)");
  }
  return kSqrt3 * normal_quantile(p);
}

double companding_density(double t) {
  return std::exp(-t * t / 6.0) / std::sqrt(6.0 * std::numbers::pi);
}

double companding_quantile_slope(double s) {
  return 1.0 / companding_density(companding_quantile(s));
}

double unbiased_reconstruction(double r, int buckets) {
  if (buckets < 2) throw std::invalid_argument("unbiased_reconstruction: B must be >= 2");
  const double delta = 1.0 / (buckets - 1);
  if (!(r >= -delta / 2 && r <= 1.0 + delta / 2)) {
    throw std::domain_error("unbiased_reconstruction: r outside [-delta/2, 1 + delta/2]");
  }
  if (r == -delta / 2) return -std::numeric_limits<double>::infinity();
  if (r == 1.0 + delta / 2) return std::numeric_limits<double>::infinity();

  // r = u + k delta with u in the central cell ((1-delta)/2, (1+delta)/2].
  const double lo = (1.0 - delta) / 2;
  long k = static_cast<long>(std::ceil((r - lo) / delta)) - 1;
  double u = r - k * delta;
  // Repair rounding at the half-open cell edges.
  while (u <= lo) {
    --k;
    u = r - k * delta;
  }
  while (u > lo + delta) {
    ++k;
    u = r - k * delta;
  }

  // u == 1 only for B = 2, where the central cell reaches the top of (0, 1].
  double g = u >= 1.0 ? std::numeric_limits<double>::infinity() : companding_quantile(u);
  if (k > 0) {
    for (long j = 0; j < k; ++j) g += delta * companding_quantile_slope(u + (j + 0.5) * delta);
  } else {
    for (long j = k; j < 0; ++j) g -= delta * companding_quantile_slope(u + (j + 0.5) * delta);
  }
  return g;
}

ScalarCodebook build_codebook(Mode mode, int buckets, double dither) {
  if (buckets < 2 || !is_pow2(buckets)) {
    throw std::invalid_argument("build_codebook: B must be a power of two >= 2");
  }
  if (!(dither >= 0.0 && dither < 1.0)) {
    throw std::invalid_argument("build_codebook: dither must lie in [0, 1)");
  }
  ScalarCodebook cb;
  cb.mode = mode;
  cb.buckets = buckets;
  cb.dither = dither;
  cb.recon.resize(buckets);
  const double B = buckets;

  if (mode == Mode::kBiased) {
    cb.grid.resize(buckets + 1);
    cb.grid(0) = 0.0;
    for (int j = 1; j < buckets; ++j) cb.grid(j) = (j + dither) / B;
    cb.grid(buckets) = 1.0;
    for (int j = 0; j < buckets; ++j) {
      cb.recon(j) = companding_quantile(0.5 * (cb.grid(j) + cb.grid(j + 1)));
    }
    return cb;
  }

  // Unbiased: q_j = G((j + U - 1/2) delta). Consecutive centroids differ by
  // delta * (F^{-1})' at their midpoint (j + U) delta, so one sweep outward
  // from the centroid lying in G's central cell fills the table in O(B).
  const double delta = 1.0 / (B - 1);
  if (buckets == 2 && dither == 0.5) {
    // Both centroid arguments sit on G's singular points 0 and 1; take the
    // one-sided limits from inside the central cell.
    cb.recon << -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity();
    return cb;
  }
  const int anchor = dither > 0.5 ? buckets / 2 - 1 : buckets / 2;
  cb.recon(anchor) = companding_quantile((anchor + dither - 0.5) * delta);
  for (int j = anchor; j + 1 < buckets; ++j) {
    cb.recon(j + 1) = cb.recon(j) + delta * companding_quantile_slope((j + dither) * delta);
  }
  for (int j = anchor - 1; j >= 0; --j) {
    const double mid = (j + dither) * delta;
    // mid == 0 only for U = 0, whose bucket 0 is empty; keep the one-sided limit.
    cb.recon(j) = mid > 0.0 ? cb.recon(j + 1) - delta * companding_quantile_slope(mid)
                            : -std::numeric_limits<double>::infinity();
  }
  return cb;
}

int quantize_scalar(double t, const ScalarCodebook& cb) {
  if (std::isnan(t)) throw std::domain_error("quantize_scalar: NaN input");
  const double f = companding_cdf(t);
  const int last = cb.buckets - 1;
  if (cb.mode == Mode::kBiased) {
    double guess = std::floor(cb.buckets * f - cb.dither);
    int j = guess < 0 ? 0 : (guess > last ? last : static_cast<int>(guess));
    // The grid table is authoritative at the boundaries.
    while (j > 0 && f < cb.grid(j)) --j;
    while (j < last && f >= cb.grid(j + 1)) ++j;
    return j;
  }
  const double raw = std::floor(last * f - cb.dither) + 1.0;
  if (raw < 0.0) return 0;
  if (raw > last) return last;
  return static_cast<int>(raw);
}

double reconstruct_scalar(int j, const ScalarCodebook& cb) {
  if (j < 0 || j >= cb.buckets) throw std::out_of_range("reconstruct_scalar: index out of range");
  return cb.recon(j);
}

}  // namespace hq
