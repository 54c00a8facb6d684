#include "hq/bitstream.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

namespace hq {
namespace {

constexpr std::uint8_t kMagic[4] = {'H', 'Q', '0', '1'};

class BitWriter {
 public:
  void put(std::uint64_t value, int width) {
    for (int k = 0; k < width; ++k) put_bit((value >> k) & 1U);
  }
  void put_bit(bool bit) {
    if (fill_ == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(1U << fill_);
    fill_ = (fill_ + 1) % 8;
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  int fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool get_bit() {
    if (pos_ >= 8 * bytes_.size()) throw CodecError(CodecErrc::kTruncated, "body ends early");
    const bool bit = (bytes_[pos_ / 8] >> (pos_ % 8)) & 1U;
    ++pos_;
    return bit;
  }
  std::uint64_t get(int width) {
    std::uint64_t v = 0;
    for (int k = 0; k < width; ++k) v |= static_cast<std::uint64_t>(get_bit()) << k;
    return v;
  }
  std::size_t position() const { return pos_; }
  std::size_t capacity() const { return 8 * bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * k)));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
  T v = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) v |= static_cast<T>(in[offset + k]) << (8 * k);
  return v;
}

}  // namespace

const char* to_string(CodecErrc e) {
  switch (e) {
    case CodecErrc::kBadMagic: return "bad magic";
    case CodecErrc::kUnsupportedVersion: return "unsupported version";
    case CodecErrc::kInvalidHeader: return "invalid header";
    case CodecErrc::kTruncated: return "truncated stream";
    case CodecErrc::kNonzeroPadding: return "nonzero padding";
    case CodecErrc::kTrailingData: return "trailing data";
    case CodecErrc::kIndexOutOfRange: return "index out of range";
    case CodecErrc::kLevelOverrun: return "level overrun";
    case CodecErrc::kFieldOverflow: return "field overflow";
  }
  return "codec error";
}

std::vector<std::uint8_t> encode(const TwoStageCode& code) {
  const QuantConfig& cfg = code.cfg;
  if (cfg.bits < 1 || cfg.bits > 16) throw CodecError(CodecErrc::kFieldOverflow, "b outside [1, 16]");
  if (cfg.d_orig < 1 || cfg.d_orig > std::numeric_limits<std::uint32_t>::max() ||
      cfg.d != next_power_of_two(cfg.d_orig)) {
    throw CodecError(CodecErrc::kFieldOverflow, "dimension does not fit the header");
  }
  const ResidualCode& res = code.residual;
  if (res.idx_sigma < 0 || res.idx_sigma > kMaxScaleIndex) {
    throw CodecError(CodecErrc::kFieldOverflow, "idx_sigma does not fit one byte");
  }
  if (code.base.idx.size() != cfg.d || res.levels.size() != cfg.d || res.signs.size() != cfg.d) {
    throw CodecError(CodecErrc::kFieldOverflow, "code length != padded dimension");
  }
  if (res.seed != code.base.seed || res.vec_counter != code.base.vec_counter) {
    throw CodecError(CodecErrc::kFieldOverflow, "stages must share seed and vec_counter");
  }

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  out.push_back(kWireVersion);
  out.push_back(static_cast<std::uint8_t>(cfg.mode));
  out.push_back(static_cast<std::uint8_t>(cfg.bits));
  out.push_back(static_cast<std::uint8_t>(res.idx_sigma));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(cfg.d_orig));
  put_le<std::uint64_t>(out, code.base.seed);
  put_le<std::uint64_t>(out, code.base.vec_counter);
  put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(code.base.norm));

  BitWriter body;
  const std::uint64_t limit = std::uint64_t{1} << cfg.bits;
  for (Index i = 0; i < cfg.d; ++i) {
    if (code.base.idx(i) >= limit) throw CodecError(CodecErrc::kIndexOutOfRange, "index >= 2^b");
    body.put(code.base.idx(i), cfg.bits);
  }
  if (res.idx_sigma > 0) {
    for (Index i = 0; i < cfg.d; ++i) {
      if (res.levels(i) > kMaxLevel) throw CodecError(CodecErrc::kLevelOverrun, "level > 64");
      for (int k = 0; k < res.levels(i); ++k) body.put_bit(true);
      body.put_bit(false);
    }
    for (Index i = 0; i < cfg.d; ++i) {
      if (res.signs(i) != 1 && res.signs(i) != -1) {
        throw CodecError(CodecErrc::kFieldOverflow, "sign must be +-1");
      }
      body.put_bit(res.signs(i) == 1);
    }
  }
  const std::vector<std::uint8_t> bits = body.take();
  out.insert(out.end(), bits.begin(), bits.end());
  return out;
}

TwoStageCode decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw CodecError(CodecErrc::kTruncated, "header incomplete");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw CodecError(CodecErrc::kBadMagic, "expected HQ01");
  if (bytes[4] != kWireVersion) throw CodecError(CodecErrc::kUnsupportedVersion, "version byte");
  if (bytes[5] > 1) throw CodecError(CodecErrc::kInvalidHeader, "unknown mode");
  const int bits = bytes[6];
  if (bits < 1 || bits > 16) throw CodecError(CodecErrc::kInvalidHeader, "b outside [1, 16]");
  const int idx_sigma = bytes[7];
  const std::uint32_t d_orig = get_le<std::uint32_t>(bytes, 8);
  if (d_orig == 0) throw CodecError(CodecErrc::kInvalidHeader, "zero dimension");
  const double norm = std::bit_cast<double>(get_le<std::uint64_t>(bytes, 28));
  if (!std::isfinite(norm) || norm < 0.0) throw CodecError(CodecErrc::kInvalidHeader, "bad norm");

  TwoStageCode code;
  code.cfg = QuantConfig::make(d_orig, bits, static_cast<Mode>(bytes[5]));
  const Index d = code.cfg.d;
  const std::span<const std::uint8_t> body_bytes = bytes.subspan(kHeaderBytes);

  // Check the fixed-width part fits before allocating anything sized by d.
  const std::uint64_t min_body = static_cast<std::uint64_t>(d) * bits +
                                 (idx_sigma > 0 ? 2 * static_cast<std::uint64_t>(d) : 0);
  if (8 * static_cast<std::uint64_t>(body_bytes.size()) < min_body) {
    throw CodecError(CodecErrc::kTruncated, "body shorter than its fixed-width fields");
  }

  code.base.seed = code.residual.seed = get_le<std::uint64_t>(bytes, 12);
  code.base.vec_counter = code.residual.vec_counter = get_le<std::uint64_t>(bytes, 20);
  code.base.norm = norm;
  code.residual.idx_sigma = idx_sigma;
  code.base.idx.resize(d);
  code.residual.levels = LevelVector::Zero(d);
  code.residual.signs = SignVector::Zero(d);

  BitReader in(body_bytes);
  for (Index i = 0; i < d; ++i) code.base.idx(i) = static_cast<std::uint16_t>(in.get(bits));
  if (idx_sigma > 0) {
    for (Index i = 0; i < d; ++i) {
      int l = 0;
      while (in.get_bit()) {
        if (++l > kMaxLevel) throw CodecError(CodecErrc::kLevelOverrun, "unary level > 64");
      }
      code.residual.levels(i) = static_cast<std::uint8_t>(l);
    }
    for (Index i = 0; i < d; ++i) code.residual.signs(i) = in.get_bit() ? 1 : -1;
  }

  const std::size_t used_bytes = (in.position() + 7) / 8;
  if (used_bytes < body_bytes.size()) throw CodecError(CodecErrc::kTrailingData, "bytes after body");
  while (in.position() < in.capacity()) {
    if (in.get_bit()) throw CodecError(CodecErrc::kNonzeroPadding, "padding bits must be zero");
  }
  return code;
}

RateReport rate_report(const TwoStageCode& code) {
  RateReport r;
  r.header_bits = kHeaderBits;
  r.idx_bits = static_cast<std::int64_t>(code.cfg.d) * code.cfg.bits;
  if (code.residual.idx_sigma > 0) {
    r.level_bits = level_bits(code.residual);
    r.sign_bits = code.cfg.d;
  }
  r.total_bits = r.header_bits + r.body_bits();
  return r;
}

double residual_bit_budget(Index d) {
  return (3.0 + 1.0 / (2.0 * std::numbers::ln2)) * static_cast<double>(d);
}

}  // namespace hq
