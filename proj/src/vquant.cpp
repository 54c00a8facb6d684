#include "hq/vquant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hq {
namespace {

void require_finite(const Eigen::Ref<const Eigen::VectorXd>& x, const char* what) {
  if (!x.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

void check_code(const VectorCode& code, const QuantConfig& cfg) {
  if (code.idx.size() != cfg.d) throw std::invalid_argument("vector_dequant: index count != d");
  if (!(code.norm >= 0.0) || !std::isfinite(code.norm)) {
    throw std::invalid_argument("vector_dequant: norm must be finite and >= 0");
  }
}

}  // namespace

QuantConfig QuantConfig::make(Index d_orig, int bits, Mode mode) {
  if (d_orig < 1) throw std::invalid_argument("QuantConfig: dimension must be >= 1");
  if (bits < 1 || bits > 16) throw std::invalid_argument("QuantConfig: bits must be in [1, 16]");
  return QuantConfig{d_orig, next_power_of_two(d_orig), bits, mode};
}

double sample_dither(std::uint64_t seed, std::uint64_t vec_counter, const StreamLayout& layout) {
  return CounterRng(seed, vec_counter, layout.dither).uniform();
}

IndexVector quantize_rotated(const Eigen::Ref<const Eigen::VectorXd>& unit_padded,
                             const SignDiagonal& D, const ScalarCodebook& cb) {
  Eigen::VectorXd z = apply_hd(Eigen::VectorXd(unit_padded), D);
  z *= std::sqrt(static_cast<double>(z.size()));
  IndexVector idx(z.size());
  for (Index i = 0; i < z.size(); ++i) idx(i) = static_cast<std::uint16_t>(quantize_scalar(z(i), cb));
  return idx;
}

Eigen::VectorXd dequantize_rotated(const IndexVector& idx, const SignDiagonal& D,
                                   const ScalarCodebook& cb) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(idx.size()));
  Eigen::VectorXd y(idx.size());
  for (Index i = 0; i < idx.size(); ++i) {
    const double q = reconstruct_scalar(idx(i), cb);
    if (!std::isfinite(q)) throw std::out_of_range("dequantize: index selects an empty bucket");
    y(i) = q * scale;
  }
  return apply_hd_inverse(y, D);
}

Eigen::VectorXd pad_to(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg) {
  if (x.size() != cfg.d_orig) {
    throw std::invalid_argument("input length " + std::to_string(x.size()) +
                                " != configured dimension " + std::to_string(cfg.d_orig));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(cfg.d);
  out.head(cfg.d_orig) = x;
  return out;
}

VectorCode vector_quant(const Eigen::Ref<const Eigen::VectorXd>& x, const QuantConfig& cfg,
                        std::uint64_t seed, std::uint64_t vec_counter, const StreamLayout& layout) {
  require_finite(x, "vector_quant");
  Eigen::VectorXd padded = pad_to(x, cfg);
  VectorCode code;
  code.seed = seed;
  code.vec_counter = vec_counter;
  code.norm = padded.norm();
  if (!std::isfinite(code.norm)) throw std::invalid_argument("vector_quant: norm overflows");
  if (code.norm == 0.0) {
    code.idx = IndexVector::Zero(cfg.d);
    return code;
  }
  padded /= code.norm;
  const SignDiagonal D = sample_signs(seed, vec_counter, cfg.d, layout.base_signs);
  const ScalarCodebook cb =
      build_codebook(cfg.mode, cfg.buckets(), sample_dither(seed, vec_counter, layout));
  code.idx = quantize_rotated(padded, D, cb);
  return code;
}

Eigen::VectorXd vector_dequant_unit_padded(const VectorCode& code, const QuantConfig& cfg,
                                           const StreamLayout& layout) {
  check_code(code, cfg);
  const SignDiagonal D = sample_signs(code.seed, code.vec_counter, cfg.d, layout.base_signs);
  const ScalarCodebook cb =
      build_codebook(cfg.mode, cfg.buckets(), sample_dither(code.seed, code.vec_counter, layout));
  for (Index i = 0; i < code.idx.size(); ++i) {
    if (code.idx(i) >= cfg.buckets()) throw std::out_of_range("vector_dequant: index >= B");
  }
  return dequantize_rotated(code.idx, D, cb);
}

Eigen::VectorXd vector_dequant(const VectorCode& code, const QuantConfig& cfg,
                               const StreamLayout& layout) {
  check_code(code, cfg);
  if (code.norm == 0.0) return Eigen::VectorXd::Zero(cfg.d_orig);
  Eigen::VectorXd full = vector_dequant_unit_padded(code, cfg, layout);
  return code.norm * full.head(cfg.d_orig);
}

}  // namespace hq
