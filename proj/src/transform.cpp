#include "hq/transform.hpp"

namespace hq {

SignDiagonal sample_signs(std::uint64_t seed, std::uint64_t stream_id, Index d, Stage stage) {
  detail::require_power_of_two(d, "sample_signs");
  SignDiagonal D;
  D.seed = seed;
  D.stream_id = stream_id;
  D.signs.resize(d);
  CounterRng rng(seed, stream_id, stage);
  std::uint64_t word = 0;
  for (Index i = 0; i < d; ++i) {
    if (i % 64 == 0) word = rng();
    D.signs(i) = (word >> (i % 64)) & 1U ? 1.0 : -1.0;
  }
  return D;
}

}  // namespace hq
