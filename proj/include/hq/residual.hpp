#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "hq/rng.hpp"
#include "hq/transform.hpp"
#include "hq/vquant.hpp"

namespace hq {

using LevelVector = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>;
using SignVector = Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1>;

inline constexpr int kMaxScaleIndex = 255;
inline constexpr int kMaxLevel = 64;

// Residual-stage code. idx_sigma == 0 marks a negligible residual; levels and
// signs are then all zero.
struct ResidualCode {
  int idx_sigma = 0;
  LevelVector levels;
  SignVector signs;  // +-1, or 0 when idx_sigma == 0
  std::uint64_t seed = 0;
  std::uint64_t vec_counter = 0;

  bool operator==(const ResidualCode&) const = default;
};

// tau_B = 1/(dB), the smallest scale that is encoded. Exact for power-of-two d, B.
double min_encoded_scale(Index d, int buckets);

// 0 if s < tau_B, else ceil(log2(s / tau_B)) + 1. Throws on negative or NaN s.
int quantize_scale(double s, Index d, int buckets);

// 0 for idx 0, else tau_B 2^{idx-1}. For s >= tau_B the round trip gives s <= sigma < 2s.
double dequantize_scale(int idx_sigma, Index d, int buckets);

// Smallest l >= 0 with |v| <= sigma 2^l (sigma > 0).
int residual_level(double v, double sigma);

// Residual quantization with explicit D_res and sign-bit generator. r is in
// padded space; ||r|| must not exceed 2.
ResidualCode residual_quant_with(const Eigen::Ref<const Eigen::VectorXd>& r, const SignDiagonal& D,
                                 int buckets, CounterRng& sign_bits);

Eigen::VectorXd residual_dequant_with(const ResidualCode& code, const SignDiagonal& D, int buckets);

// Streams derived from (seed, vec_counter): D_res from layout.residual_signs,
// sign bits from layout.residual_bits.
ResidualCode residual_quant(const Eigen::Ref<const Eigen::VectorXd>& r, int buckets,
                            std::uint64_t seed, std::uint64_t vec_counter,
                            const StreamLayout& layout = kDefaultLayout);

Eigen::VectorXd residual_dequant(const ResidualCode& code, Index d, int buckets,
                                 const StreamLayout& layout = kDefaultLayout);

// Sum of (l_i + 1), the unary bit count of the levels.
std::int64_t level_bits(const ResidualCode& code);

}  // namespace hq
