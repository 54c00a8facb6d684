#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hq {

// Substream tags. Every random quantity of one encoded vector is drawn from
// its own (seed, vec_counter, stage) stream so the stages stay independent.
enum class Stage : std::uint64_t {
  kBaseSigns = 0,
  kDither = 1,
  kResidualSigns = 2,
  kResidualBits = 3,
  // Used by the benchmark harness to draw inputs; never by the codec.
  kBenchInput = 16,
  kBenchQuery = 17,
};

// Counter-based generator (Philox4x64-10). The key is (seed, stream_id); the
// 256-bit counter holds (block, substream, 0, 0). Output is a pure function of
// (seed, stream_id, substream, position), so any stream can be regenerated
// without replaying others.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  CounterRng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t substream = 0);
  CounterRng(std::uint64_t seed, std::uint64_t stream_id, Stage stage)
      : CounterRng(seed, stream_id, static_cast<std::uint64_t>(stage)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // One Philox4x64-10 block.
  static Block philox(Block counter, Key key);

 private:
  Key key_;
  Block counter_;
  Block buffer_{};
  int pos_ = 4;
};

}  // namespace hq
