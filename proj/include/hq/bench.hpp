#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hq/codebook.hpp"
#include "hq/transform.hpp"

namespace hq::bench {

// pi sqrt(3) / 2, the leading MSE constant at b bits: (pi sqrt(3)/2) 4^{-b}.
inline constexpr double kMseConstant = 2.7206990463513265;
// 13 (pi sqrt(3)/2 + 1), leading inner-product error constant.
inline constexpr double kInnerProductConstant = 13.0 * (kMseConstant + 1.0);

struct ExperimentRow {
  std::string experiment;
  Index d = 0;
  int bits = 0;
  long trials = 0;
  double measured = 0.0;
  double paper_constant = 0.0;
  std::string acceptance;  // human-readable tolerance, e.g. "[2.3, 3.0]"
  bool pass = false;
  double wall_seconds = 0.0;
};

struct Params {
  Index dim = 0;
  int bits = 0;
  long trials = 0;
  std::uint64_t seed = 7;
  Mode mode = Mode::kUnbiased;
};

// HQ_THREADS if set and positive, else hardware concurrency.
int thread_count();

// Random unit vector from the (seed, stream, stage) stream.
Eigen::VectorXd random_unit_vector(Index d, std::uint64_t seed, std::uint64_t stream, Stage stage);

// 4^b mean ||x - x~||^2 over fresh (D, U) for a random unit x and for e_1;
// window [2.3, 3.0].
std::vector<ExperimentRow> run_mse(const Params& p);

// 4^b mean ||x - x~||^2 for b in [lo, hi] at a random unit x. Informational.
std::vector<ExperimentRow> run_mse_trend(Index dim, int lo, int hi, long trials,
                                         std::uint64_t seed, Mode mode);

// Max over coordinates of |mean(x~) - x| in standard errors (<= 5), plus the
// deterministic max_t |E_U quant(t) - t| over a t-grid (<= 1e-6).
std::vector<ExperimentRow> run_unbiased(const Params& p);

// d 4^b mean <y, x^ - x>^2 / ||y||^2 for a fixed unit x; bound 48.4.
std::vector<ExperimentRow> run_inner_product(const Params& p);

// Max serialized non-header bits against d b + ceil(3.7213 d), and the
// level sum against (2 + 1/(2 ln 2)) d.
std::vector<ExperimentRow> run_rate(const Params& p);

// Exhaustive-enumeration lemma checks (abs error <= 1e-12), the
// reconstruction-map cell-average identity and the dense Hadamard check.
std::vector<ExperimentRow> run_oracle(std::uint64_t seed);

// Deterministic CSV (no timing column).
void write_csv(std::ostream& os, const std::vector<ExperimentRow>& rows);

}  // namespace hq::bench
