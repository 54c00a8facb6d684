#include "hq/twostage.hpp"

#include <cmath>
#include <stdexcept>

namespace hq {
namespace {

constexpr double kUnitTolerance = 1e-9;

void check_code(const TwoStageCode& code) {
  const QuantConfig& cfg = code.cfg;
  if (cfg.d != next_power_of_two(cfg.d_orig) || cfg.d_orig < 1) {
    throw std::invalid_argument("two-stage code: inconsistent dimensions");
  }
  if (code.base.idx.size() != cfg.d) throw std::invalid_argument("two-stage code: bad index count");
  if (code.residual.levels.size() != cfg.d || code.residual.signs.size() != cfg.d) {
    throw std::invalid_argument("two-stage code: bad residual length");
  }
  if (code.residual.seed != code.base.seed || code.residual.vec_counter != code.base.vec_counter) {
    throw std::invalid_argument("two-stage code: stages must share seed and vec_counter");
  }
}

}  // namespace

Eigen::VectorXd project_unit_ball(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double n = v.norm();
  if (n <= 1.0) return v;
  return v / n;
}

TwoStageCode quantize_two_stage(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg,
                                std::uint64_t seed, std::uint64_t vec_counter,
                                const StreamLayout& layout) {
  if (!x.allFinite()) throw std::invalid_argument("quantize_two_stage: non-finite input");
  if (std::abs(x.norm() - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("quantize_two_stage: input must be a unit vector");
  }
  TwoStageCode code;
  code.cfg = cfg;
  code.base = vector_quant(x, cfg, seed, vec_counter, layout);

  const Eigen::VectorXd base_hat =
      project_unit_ball(vector_dequant_unit_padded(code.base, cfg, layout));
  const Eigen::VectorXd r = pad_to(x, cfg) / code.base.norm - base_hat;
  code.residual = residual_quant(r, cfg.buckets(), seed, vec_counter, layout);
  return code;
}

TwoStageCode quantize_scaled(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg,
                             std::uint64_t seed, std::uint64_t vec_counter) {
  if (!x.allFinite()) throw std::invalid_argument("quantize: non-finite input");
  if (x.size() != cfg.d_orig) throw std::invalid_argument("quantize: length != configured dimension");
  const double norm = x.norm();
  if (!std::isfinite(norm)) throw std::invalid_argument("quantize: norm overflows");
  if (norm == 0.0) {
    TwoStageCode code;
    code.cfg = cfg;
    code.base.idx = IndexVector::Zero(cfg.d);
    code.base.seed = code.residual.seed = seed;
    code.base.vec_counter = code.residual.vec_counter = vec_counter;
    code.residual.levels = LevelVector::Zero(cfg.d);
    code.residual.signs = SignVector::Zero(cfg.d);
    return code;
  }
  TwoStageCode code = quantize_two_stage(x / norm, cfg, seed, vec_counter);
  code.base.norm = norm;
  return code;
}

Eigen::VectorXd dequantize_two_stage(const TwoStageCode& code, const StreamLayout& layout) {
  check_code(code);
  const QuantConfig& cfg = code.cfg;
  if (code.base.norm == 0.0) return Eigen::VectorXd::Zero(cfg.d_orig);
  Eigen::VectorXd x_hat = project_unit_ball(vector_dequant_unit_padded(code.base, cfg, layout));
  x_hat += residual_dequant(code.residual, cfg.d, cfg.buckets(), layout);
  return code.base.norm * x_hat.head(cfg.d_orig);
}

double estimate_inner_product(const TwoStageCode& code, const Eigen::Ref<const Eigen::VectorXd>& y,
                              const StreamLayout& layout) {
  check_code(code);
  const QuantConfig& cfg = code.cfg;
  if (y.size() != cfg.d_orig) throw std::invalid_argument("estimate_inner_product: length mismatch");
  if (code.base.norm == 0.0) return 0.0;
  const Eigen::VectorXd y_pad = pad_to(y, cfg);

  // <y, D H^T y~> = <H D y, y~>, and ||D H^T y~|| = ||y~||.
  const SignDiagonal d_base = sample_signs(code.base.seed, code.base.vec_counter, cfg.d,
                                           layout.base_signs);
  const ScalarCodebook cb = build_codebook(
      cfg.mode, cfg.buckets(), sample_dither(code.base.seed, code.base.vec_counter, layout));
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.d));
  Eigen::VectorXd y_tilde(cfg.d);
  for (Index i = 0; i < cfg.d; ++i) {
    if (code.base.idx(i) >= cfg.buckets()) throw std::out_of_range("index >= B");
    const double q = cb.recon(code.base.idx(i));
    if (!std::isfinite(q)) throw std::out_of_range("index selects an empty bucket");
    y_tilde(i) = q * scale;
  }
  const double base_norm = y_tilde.norm();
  double base_part = apply_hd(y_pad, d_base).dot(y_tilde);
  if (base_norm > 1.0) base_part /= base_norm;

  double residual_part = 0.0;
  const ResidualCode& res = code.residual;
  if (res.idx_sigma > 0) {
    const SignDiagonal d_res = sample_signs(res.seed, res.vec_counter, cfg.d, layout.residual_signs);
    const double sigma = dequantize_scale(res.idx_sigma, cfg.d, cfg.buckets());
    const Eigen::VectorXd u = apply_hd(y_pad, d_res);
    for (Index i = 0; i < cfg.d; ++i) {
      residual_part += u(i) * std::ldexp(sigma, res.levels(i)) * res.signs(i);
    }
  }
  return code.base.norm * (base_part + residual_part);
}

}  // namespace hq
