#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "hq/residual.hpp"
#include "hq/vquant.hpp"

namespace hq {

// Base dithered code plus residual code; the unit of serialization.
struct TwoStageCode {
  VectorCode base;
  ResidualCode residual;
  QuantConfig cfg;

  bool operator==(const TwoStageCode& o) const {
    return base == o.base && residual == o.residual && cfg.d_orig == o.cfg.d_orig &&
           cfg.d == o.cfg.d && cfg.bits == o.cfg.bits && cfg.mode == o.cfg.mode;
  }
};

// v if ||v|| <= 1, else v / ||v||.
Eigen::VectorXd project_unit_ball(const Eigen::Ref<const Eigen::VectorXd>& v);

// Encodes a unit vector (| ||x|| - 1 | <= 1e-9, otherwise std::invalid_argument).
// The residual r = x - Pi(x~) lives in padded space.
TwoStageCode quantize_two_stage(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg,
                                std::uint64_t seed, std::uint64_t vec_counter,
                                const StreamLayout& layout = kDefaultLayout);

// Encodes an arbitrary finite vector: the direction goes through
// quantize_two_stage and base.norm is overwritten with ||x||. The zero vector
// yields an all-zero code with norm 0.
TwoStageCode quantize_scaled(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg,
                             std::uint64_t seed, std::uint64_t vec_counter);

// x^ = norm * (Pi(x~) + r^), truncated to d_orig.
Eigen::VectorXd dequantize_two_stage(const TwoStageCode& code,
                                     const StreamLayout& layout = kDefaultLayout);

// <y, dequantize_two_stage(code)> without materializing x^: y is pushed
// through H D_base and H D_res once each and dotted against the stored codes.
double estimate_inner_product(const TwoStageCode& code, const Eigen::Ref<const Eigen::VectorXd>& y,
                              const StreamLayout& layout = kDefaultLayout);

}  // namespace hq
