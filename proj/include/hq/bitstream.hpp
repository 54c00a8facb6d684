#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hq/twostage.hpp"

namespace hq {

// Wire layout (little-endian throughout):
//   "HQ01" | version u8 | mode u8 | b u8 | idx_sigma u8 | d_orig u32 |
//   seed u64 | vec_counter u64 | norm f64
// followed by a bit stream, least significant bit first:
//   d indices of b bits, then (only if idx_sigma > 0) the levels as unary
//   1^l 0 and d sign bits (1 = +1), zero-padded to a byte boundary.
inline constexpr std::uint8_t kWireVersion = 1;
inline constexpr std::size_t kHeaderBytes = 36;
inline constexpr std::int64_t kHeaderBits = 8 * kHeaderBytes;

enum class CodecErrc {
  kBadMagic,
  kUnsupportedVersion,
  kInvalidHeader,
  kTruncated,
  kNonzeroPadding,
  kTrailingData,
  kIndexOutOfRange,
  kLevelOverrun,
  kFieldOverflow,
};

const char* to_string(CodecErrc e);

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  CodecErrc code() const { return code_; }

 private:
  CodecErrc code_;
};

std::vector<std::uint8_t> encode(const TwoStageCode& code);

TwoStageCode decode(std::span<const std::uint8_t> bytes);

struct RateReport {
  std::int64_t header_bits = 0;
  std::int64_t idx_bits = 0;
  std::int64_t level_bits = 0;
  std::int64_t sign_bits = 0;
  std::int64_t total_bits = 0;

  std::int64_t body_bits() const { return idx_bits + level_bits + sign_bits; }
};

RateReport rate_report(const TwoStageCode& code);

// (3 + 1/(2 ln 2)) d: deterministic cap on level plus sign bits per vector.
double residual_bit_budget(Index d);

}  // namespace hq
