#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "hq/rng.hpp"

namespace hq {

using Eigen::Index;

constexpr bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

// Smallest power of two >= n (n >= 1).
constexpr Index next_power_of_two(Index n) {
  Index p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {
inline void require_power_of_two(Index n, const char* what) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument(std::string(what) + ": length " + std::to_string(n) +
                                " is not a power of two");
  }
}
}  // namespace detail

// In-place orthonormal Walsh-Hadamard transform (Sylvester ordering). The
// butterfly is purely additive; the d^{-1/2} scale is a single final pass.
template <typename Derived>
void fwht_normalized_inplace(Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Index n = v.size();
  detail::require_power_of_two(n, "fwht");
  for (Index h = 1; h < n; h <<= 1) {
    for (Index i = 0; i < n; i += 2 * h) {
      for (Index j = i; j < i + h; ++j) {
        const Scalar a = v(j);
        const Scalar b = v(j + h);
        v(j) = a + b;
        v(j + h) = a - b;
      }
    }
  }
  if (n > 1) v *= Scalar(1) / std::sqrt(static_cast<Scalar>(n));
}

template <typename Derived>
typename Derived::PlainObject fwht_normalized(const Eigen::MatrixBase<Derived>& v) {
  typename Derived::PlainObject out = v;
  fwht_normalized_inplace(out);
  return out;
}

// Random +-1 diagonal D. `signs` stores the diagonal as +-1.0.
struct SignDiagonal {
  Eigen::VectorXd signs;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  Index size() const { return signs.size(); }
};

// Deterministic in (seed, stream_id, stage, d).
SignDiagonal sample_signs(std::uint64_t seed, std::uint64_t stream_id, Index d,
                          Stage stage = Stage::kBaseSigns);

// H (D x).
template <typename Derived>
typename Derived::PlainObject apply_hd(const Eigen::MatrixBase<Derived>& x, const SignDiagonal& D) {
  if (x.size() != D.size()) throw std::invalid_argument("apply_hd: length mismatch");
  typename Derived::PlainObject out =
      x.cwiseProduct(D.signs.template cast<typename Derived::Scalar>());
  fwht_normalized_inplace(out);
  return out;
}

// D (H^T y). Sylvester H is symmetric, so H^T y is the same butterfly.
template <typename Derived>
typename Derived::PlainObject apply_hd_inverse(const Eigen::MatrixBase<Derived>& y,
                                               const SignDiagonal& D) {
  if (y.size() != D.size()) throw std::invalid_argument("apply_hd_inverse: length mismatch");
  typename Derived::PlainObject out = y;
  fwht_normalized_inplace(out);
  out.array() *= D.signs.template cast<typename Derived::Scalar>().array();
  return out;
}

}  // namespace hq
