#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Core>

namespace hq::cli {

// Binary layout: "HQVF" | count u64 | d_orig u32 | count * d_orig f64, all
// little-endian. Text layout: one whitespace-separated vector per line.
struct VectorSet {
  Eigen::Index d_orig = 0;
  std::vector<Eigen::VectorXd> vectors;
};

// Throws std::runtime_error on IO errors, malformed content, non-finite values
// or an empty file.
VectorSet read_vector_file(const std::filesystem::path& path, bool text);

void write_vector_file(const std::filesystem::path& path, const VectorSet& set, bool text);

}  // namespace hq::cli
