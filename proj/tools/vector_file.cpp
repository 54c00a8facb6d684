#include "vector_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hq::cli {
namespace {

constexpr char kMagic[4] = {'H', 'Q', 'V', 'F'};
constexpr std::size_t kHeader = 16;

template <typename T>
T read_le(const std::vector<char>& buf, std::size_t offset) {
  T v = 0;
  for (std::size_t k = 0; k < sizeof(T); ++k) {
    v |= static_cast<T>(static_cast<unsigned char>(buf[offset + k])) << (8 * k);
  }
  return v;
}

template <typename T>
void write_le(std::ostream& os, T v) {
  for (std::size_t k = 0; k < sizeof(T); ++k) os.put(static_cast<char>((v >> (8 * k)) & 0xFF));
}

VectorSet read_text(std::istream& in, const std::filesystem::path& path) {
  VectorSet set;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<double> values;
    std::string token;
    while (ls >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                 ": not a number: " + token);
      }
      values.push_back(v);
    }
    if (set.vectors.empty()) set.d_orig = static_cast<Eigen::Index>(values.size());
    if (static_cast<Eigen::Index>(values.size()) != set.d_orig) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": inconsistent vector length");
    }
    set.vectors.push_back(Eigen::Map<Eigen::VectorXd>(values.data(), set.d_orig));
  }
  return set;
}

VectorSet read_binary(const std::vector<char>& buf, const std::filesystem::path& path) {
  if (buf.size() < kHeader || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw std::runtime_error(path.string() + ": not an HQVF vector file");
  }
  const auto count = read_le<std::uint64_t>(buf, 4);
  const auto d_orig = read_le<std::uint32_t>(buf, 12);
  if (d_orig == 0) throw std::runtime_error(path.string() + ": zero dimension");
  const std::uint64_t payload = buf.size() - kHeader;
  if (count > payload / 8 / d_orig || payload != count * d_orig * 8) {
    throw std::runtime_error(path.string() + ": size does not match header");
  }
  VectorSet set;
  set.d_orig = d_orig;
  std::size_t off = kHeader;
  for (std::uint64_t n = 0; n < count; ++n) {
    Eigen::VectorXd v(d_orig);
    for (std::uint32_t i = 0; i < d_orig; ++i, off += 8) {
      v(i) = std::bit_cast<double>(read_le<std::uint64_t>(buf, off));
    }
    set.vectors.push_back(std::move(v));
  }
  return set;
}

}  // namespace

VectorSet read_vector_file(const std::filesystem::path& path, bool text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  VectorSet set;
  if (text) {
    set = read_text(in, path);
  } else {
    const std::vector<char> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    set = read_binary(buf, path);
  }
  if (set.vectors.empty() || set.d_orig == 0) throw std::runtime_error(path.string() + ": no vectors");
  for (const auto& v : set.vectors) {
    if (!v.allFinite()) throw std::runtime_error(path.string() + ": non-finite value");
  }
  return set;
}

void write_vector_file(const std::filesystem::path& path, const VectorSet& set, bool text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (text) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& v : set.vectors) {
      for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << v(i);
      out << '\n';
    }
  } else {
    out.write(kMagic, 4);
    write_le<std::uint64_t>(out, set.vectors.size());
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.d_orig));
    for (const auto& v : set.vectors) {
      for (Eigen::Index i = 0; i < v.size(); ++i) write_le(out, std::bit_cast<std::uint64_t>(v(i)));
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace hq::cli
