#include "hq/residual.hpp"

#include <cmath>
#include <stdexcept>

namespace hq {
namespace {

// Norm slack for the ||r|| <= 2 contract; covers unit inputs within 1e-9.
constexpr double kResidualNormCap = 2.0 + 1e-8;

void check_shape(const ResidualCode& code, Index d) {
  if (code.levels.size() != d || code.signs.size() != d) {
    throw std::invalid_argument("residual code: level/sign length != d");
  }
  if (code.idx_sigma < 0 || code.idx_sigma > kMaxScaleIndex) {
    throw std::invalid_argument("residual code: scale index out of range");
  }
}

}  // namespace

double min_encoded_scale(Index d, int buckets) {
  return 1.0 / (static_cast<double>(d) * static_cast<double>(buckets));
}

int quantize_scale(double s, Index d, int buckets) {
  if (!(s >= 0.0)) throw std::invalid_argument("quantize_scale: scale must be >= 0");
  const double tau = min_encoded_scale(d, buckets);
  if (s < tau) return 0;
  // s / tau is exact (tau is a power of two); start from the binary exponent
  // and settle s <= tau 2^k < 2s explicitly.
  int e = 0;
  std::frexp(s / tau, &e);  // s / tau in [2^{e-1}, 2^e)
  int k = e;
  while (k > 0 && std::ldexp(tau, k - 1) >= s) --k;
  while (std::ldexp(tau, k) < s) ++k;
  const int idx = k + 1;
  if (idx > kMaxScaleIndex) throw std::logic_error("quantize_scale: scale index exceeds one byte");
  return idx;
}

double dequantize_scale(int idx_sigma, Index d, int buckets) {
  if (idx_sigma < 0) throw std::invalid_argument("dequantize_scale: negative index");
  if (idx_sigma == 0) return 0.0;
  return std::ldexp(min_encoded_scale(d, buckets), idx_sigma - 1);
}

int residual_level(double v, double sigma) {
  const double a = std::abs(v);
  if (a <= sigma) return 0;
  int e = 0;
  std::frexp(a / sigma, &e);
  int l = e;
  // Guard: a <= sigma 2^l and a > sigma 2^{l-1}.
  while (l > 0 && a <= std::ldexp(sigma, l - 1)) --l;
  while (a > std::ldexp(sigma, l)) ++l;
  return l;
}

ResidualCode residual_quant_with(const Eigen::Ref<const Eigen::VectorXd>& r, const SignDiagonal& D,
                                 int buckets, CounterRng& sign_bits) {
  const Index d = r.size();
  if (D.size() != d) throw std::invalid_argument("residual_quant: D length mismatch");
  if (!r.allFinite()) throw std::invalid_argument("residual_quant: non-finite residual");
  const double norm = r.norm();
  if (norm > kResidualNormCap) {
    throw std::invalid_argument("residual_quant: ||r|| exceeds 2 (projection contract)");
  }

  ResidualCode code;
  code.seed = D.seed;
  code.vec_counter = D.stream_id;
  code.levels = LevelVector::Zero(d);
  code.signs = SignVector::Zero(d);
  code.idx_sigma = quantize_scale(norm / std::sqrt(static_cast<double>(d)), d, buckets);
  if (code.idx_sigma == 0) return code;

  const double sigma = dequantize_scale(code.idx_sigma, d, buckets);
  const Eigen::VectorXd v = apply_hd(Eigen::VectorXd(r), D);
  for (Index i = 0; i < d; ++i) {
    const int l = residual_level(v(i), sigma);
    if (l > kMaxLevel) throw std::logic_error("residual_quant: level exceeds 64");
    const double radius = std::ldexp(sigma, l);
    const double p_plus = 0.5 * (1.0 + v(i) / radius);
    code.levels(i) = static_cast<std::uint8_t>(l);
    code.signs(i) = sign_bits.uniform() < p_plus ? 1 : -1;
  }
  return code;
}

Eigen::VectorXd residual_dequant_with(const ResidualCode& code, const SignDiagonal& D,
                                      int buckets) {
  const Index d = D.size();
  check_shape(code, d);
  if (code.idx_sigma == 0) return Eigen::VectorXd::Zero(d);
  const double sigma = dequantize_scale(code.idx_sigma, d, buckets);
  Eigen::VectorXd q(d);
  for (Index i = 0; i < d; ++i) {
    if (code.levels(i) > kMaxLevel) throw std::invalid_argument("residual code: level exceeds 64");
    if (code.signs(i) != 1 && code.signs(i) != -1) {
      throw std::invalid_argument("residual code: sign must be +-1");
    }
    q(i) = std::ldexp(sigma, code.levels(i)) * code.signs(i);
  }
  return apply_hd_inverse(q, D);
}

ResidualCode residual_quant(const Eigen::Ref<const Eigen::VectorXd>& r, int buckets,
                            std::uint64_t seed, std::uint64_t vec_counter,
                            const StreamLayout& layout) {
  const SignDiagonal D = sample_signs(seed, vec_counter, r.size(), layout.residual_signs);
  CounterRng bits(seed, vec_counter, layout.residual_bits);
  return residual_quant_with(r, D, buckets, bits);
}

Eigen::VectorXd residual_dequant(const ResidualCode& code, Index d, int buckets,
                                 const StreamLayout& layout) {
  check_shape(code, d);
  if (code.idx_sigma == 0) return Eigen::VectorXd::Zero(d);
  const SignDiagonal D = sample_signs(code.seed, code.vec_counter, d, layout.residual_signs);
  return residual_dequant_with(code, D, buckets);
}

std::int64_t level_bits(const ResidualCode& code) {
  if (code.idx_sigma == 0) return 0;
  return code.levels.cast<std::int64_t>().sum() + code.levels.size();
}

}  // namespace hq
