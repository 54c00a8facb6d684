#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "hq/codebook.hpp"
#include "hq/transform.hpp"

namespace hq {

using IndexVector = Eigen::Matrix<std::uint16_t, Eigen::Dynamic, 1>;

struct QuantConfig {
  Index d_orig = 0;
  Index d = 0;  // padded dimension, smallest power of two >= d_orig
  int bits = 0;
  Mode mode = Mode::kUnbiased;

  int buckets() const { return 1 << bits; }

  // Throws std::invalid_argument for d_orig < 1 or bits outside [1, 16].
  static QuantConfig make(Index d_orig, int bits, Mode mode = Mode::kUnbiased);
};

// Base-stage code: one b-bit bucket index per padded coordinate plus the norm.
// (D, U) are regenerated from (seed, vec_counter).
struct VectorCode {
  IndexVector idx;
  double norm = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t vec_counter = 0;

  bool operator==(const VectorCode&) const = default;
};

// Which substream each random quantity is drawn from. Only tests deviate from
// the default layout.
struct StreamLayout {
  Stage base_signs = Stage::kBaseSigns;
  Stage dither = Stage::kDither;
  Stage residual_signs = Stage::kResidualSigns;
  Stage residual_bits = Stage::kResidualBits;
};

inline constexpr StreamLayout kDefaultLayout{};

double sample_dither(std::uint64_t seed, std::uint64_t vec_counter,
                     const StreamLayout& layout = kDefaultLayout);

// z = sqrt(d) HD x for a unit, padded x; idx_i = bucket of z_i.
IndexVector quantize_rotated(const Eigen::Ref<const Eigen::VectorXd>& unit_padded,
                             const SignDiagonal& D, const ScalarCodebook& cb);

// D H^T y~ with y~_i = q_{idx_i} / sqrt(d). Throws std::out_of_range for an
// index >= B or one selecting an unreachable bucket (non-finite centroid).
Eigen::VectorXd dequantize_rotated(const IndexVector& idx, const SignDiagonal& D,
                                   const ScalarCodebook& cb);

// Zero-pads x to cfg.d. Throws on a length mismatch.
Eigen::VectorXd pad_to(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg);

VectorCode vector_quant(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg,
                        std::uint64_t seed, std::uint64_t vec_counter,
                        const StreamLayout& layout = kDefaultLayout);

// Returns a vector of length cfg.d_orig.
Eigen::VectorXd vector_dequant(const VectorCode& code, const QuantConfig& cfg,
                               const StreamLayout& layout = kDefaultLayout);

// Padded-space unit reconstruction D H^T y~ (no norm, no truncation).
Eigen::VectorXd vector_dequant_unit_padded(const VectorCode& code, const QuantConfig& cfg,
                                           const StreamLayout& layout = kDefaultLayout);

}  // namespace hq
