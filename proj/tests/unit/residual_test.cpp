#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hq/oracle.hpp"
#include "hq/residual.hpp"

namespace {

using hq::Index;

Eigen::VectorXd random_vector(Index d, std::mt19937_64& gen) {
  std::normal_distribution<double> n;
  Eigen::VectorXd v(d);
  for (Index i = 0; i < d; ++i) v(i) = n(gen);
  return v;
}

Eigen::VectorXd random_with_norm(Index d, double norm, std::mt19937_64& gen) {
  return norm * random_vector(d, gen).normalized();
}

}  // namespace

TEST(ScaleQuant, Examples) {
  EXPECT_EQ(hq::min_encoded_scale(4, 4), 1.0 / 16);
  EXPECT_EQ(hq::quantize_scale(0.01, 4, 4), 0);
  EXPECT_EQ(hq::quantize_scale(0.3, 4, 4), 4);
  EXPECT_EQ(hq::dequantize_scale(4, 4, 4), 0.5);
  EXPECT_EQ(hq::quantize_scale(1.0 / 16, 4, 4), 1);
  EXPECT_EQ(hq::dequantize_scale(1, 4, 4), 1.0 / 16);
  EXPECT_EQ(hq::dequantize_scale(0, 4, 4), 0.0);
  EXPECT_EQ(hq::quantize_scale(0.0, 4, 4), 0);
  EXPECT_THROW(hq::quantize_scale(-1e-3, 4, 4), std::invalid_argument);
  EXPECT_THROW(hq::quantize_scale(std::nan(""), 4, 4), std::invalid_argument);
  EXPECT_THROW(hq::dequantize_scale(-1, 4, 4), std::invalid_argument);
}

TEST(ScaleQuant, RoundTripBracketsScale) {
  std::mt19937_64 gen(1);
  for (Index d : {4, 64, 1024}) {
    for (int B : {2, 16, 256}) {
      const double tau = hq::min_encoded_scale(d, B);
      const double hi = 2.0 / std::sqrt(static_cast<double>(d));
      std::uniform_real_distribution<double> u(std::log2(tau), std::log2(hi));
      for (int i = 0; i < 1000; ++i) {
        const double s = std::exp2(u(gen));
        const double sigma = hq::dequantize_scale(hq::quantize_scale(s, d, B), d, B);
        EXPECT_LE(s, sigma);
        EXPECT_LT(sigma, 2 * s);
      }
      // Exact powers of two map to themselves.
      for (int k = 0; k < 10; ++k) {
        const double s = std::ldexp(tau, k);
        EXPECT_EQ(hq::dequantize_scale(hq::quantize_scale(s, d, B), d, B), s);
        const double below = std::nextafter(s, 0.0), above = std::nextafter(s, INFINITY);
        EXPECT_EQ(hq::dequantize_scale(hq::quantize_scale(below, d, B), d, B), k == 0 ? 0.0 : s);
        EXPECT_EQ(hq::dequantize_scale(hq::quantize_scale(above, d, B), d, B), 2 * s);
      }
    }
  }
}

TEST(ResidualLevel, Examples) {
  EXPECT_EQ(hq::residual_level(0.7, 0.5), 1);
  EXPECT_EQ(hq::residual_level(-0.7, 0.5), 1);
  EXPECT_EQ(hq::residual_level(0.0, 0.5), 0);
  EXPECT_EQ(hq::residual_level(0.5, 0.5), 0);
  EXPECT_EQ(hq::residual_level(1.0, 0.5), 1);
  EXPECT_EQ(hq::residual_level(std::nextafter(1.0, 2.0), 0.5), 2);
  EXPECT_EQ(hq::residual_level(3.9, 0.5), 3);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = std::exp2(u(gen)) * (i % 2 ? 1 : -1);
    const double sigma = std::exp2(u(gen) / 3);
    const int l = hq::residual_level(v, sigma);
    EXPECT_LE(std::abs(v), std::ldexp(sigma, l));
    if (l > 0) EXPECT_GT(std::abs(v), std::ldexp(sigma, l - 1));
  }
}

TEST(ResidualQuant, ZeroResidual) {
  const auto code = hq::residual_quant(Eigen::VectorXd::Zero(16), 8, 1, 2);
  EXPECT_EQ(code.idx_sigma, 0);
  EXPECT_EQ(code.levels, hq::LevelVector::Zero(16));
  EXPECT_EQ(code.signs, hq::SignVector::Zero(16));
  EXPECT_EQ(hq::residual_dequant(code, 16, 8), Eigen::VectorXd::Zero(16));
  EXPECT_EQ(hq::level_bits(code), 0);
}

TEST(ResidualQuant, TinyResidualIsTrivial) {
  // ||r|| / sqrt(d) below tau = 1/(dB).
  const Eigen::VectorXd r = Eigen::VectorXd::Constant(16, 1e-4);
  EXPECT_EQ(hq::residual_quant(r, 16, 1, 2).idx_sigma, 0);
}

TEST(ResidualQuant, RejectsOversizedOrBadInput) {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(8);
  r(0) = 2.001;
  EXPECT_THROW(hq::residual_quant(r, 4, 1, 1), std::invalid_argument);
  r(0) = std::nan("");
  EXPECT_THROW(hq::residual_quant(r, 4, 1, 1), std::invalid_argument);
  r(0) = 2.0;
  EXPECT_NO_THROW(hq::residual_quant(r, 4, 1, 1));

  auto code = hq::residual_quant(r, 4, 1, 1);
  auto bad = code;
  bad.signs(3) = 0;
  EXPECT_THROW(hq::residual_dequant(bad, 8, 4), std::invalid_argument);
  bad = code;
  bad.levels.resize(4);
  EXPECT_THROW(hq::residual_dequant(bad, 8, 4), std::invalid_argument);
  bad = code;
  bad.levels(0) = 65;
  EXPECT_THROW(hq::residual_dequant(bad, 8, 4), std::invalid_argument);
}

TEST(ResidualQuant, ExactSignOnPowerOfTwoBoundary) {
  // With D = +1 and r = e1 scaled, every v_i = ||r|| / sqrt(d) = sigma exactly.
  hq::SignDiagonal D;
  D.signs = Eigen::VectorXd::Ones(16);
  const Eigen::VectorXd r = 0.5 * Eigen::VectorXd::Unit(16, 0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    hq::CounterRng bits(s, 0, hq::Stage::kResidualBits);
    const auto code = hq::residual_quant_with(r, D, 4, bits);
    EXPECT_EQ(code.levels, hq::LevelVector::Zero(16));
    EXPECT_EQ(code.signs, hq::SignVector::Ones(16));
    EXPECT_LE((hq::residual_dequant_with(code, D, 4) - r).cwiseAbs().maxCoeff(), 1e-15);
  }
}

// Exact E[r^ | D, r] by weighting all 2^d sign outcomes with their Bernoulli
// probabilities.
TEST(ResidualQuant, ExactConditionalUnbiasednessAtD4) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd r = random_with_norm(4, 0.15 + 0.09 * t, gen);
    const auto D = hq::sample_signs(5, t, 4, hq::Stage::kResidualSigns);
    hq::CounterRng bits(5, t, hq::Stage::kResidualBits);
    auto code = hq::residual_quant_with(r, D, 4, bits);
    ASSERT_GT(code.idx_sigma, 0);
    const double sigma = hq::dequantize_scale(code.idx_sigma, 4, 4);
    const Eigen::VectorXd v = hq::apply_hd(r, D);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
    for (int m = 0; m < 16; ++m) {
      double w = 1.0;
      for (int i = 0; i < 4; ++i) {
        const double p = 0.5 * (1.0 + v(i) / std::ldexp(sigma, code.levels(i)));
        const bool plus = (m >> i) & 1;
        code.signs(i) = plus ? 1 : -1;
        w *= plus ? p : 1.0 - p;
      }
      mean += w * hq::residual_dequant_with(code, D, 4);
    }
    EXPECT_LE((mean - r).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ResidualQuant, ConditionalUnbiasednessMonteCarlo) {
  std::mt19937_64 gen(12);
  const Eigen::VectorXd r = random_with_norm(8, 0.8, gen);
  const auto D = hq::sample_signs(6, 0, 8, hq::Stage::kResidualSigns);
  hq::CounterRng bits(6, 0, hq::Stage::kResidualBits);
  const int n = 100000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(8), sum2 = Eigen::VectorXd::Zero(8);
  for (int t = 0; t < n; ++t) {
    const Eigen::VectorXd rh = hq::residual_dequant_with(hq::residual_quant_with(r, D, 8, bits), D, 8);
    sum += rh;
    sum2 += rh.cwiseAbs2();
  }
  const Eigen::VectorXd mean = sum / n;
  const Eigen::VectorXd se = ((sum2 / n - mean.cwiseAbs2()) / n).cwiseSqrt();
  for (Index i = 0; i < 8; ++i) EXPECT_LE(std::abs(mean(i) - r(i)), 5 * se(i)) << i;
}

TEST(ResidualQuant, SeededRoundTripIsDeterministic) {
  std::mt19937_64 gen(13);
  const Eigen::VectorXd r = random_with_norm(32, 1.0, gen);
  const auto a = hq::residual_quant(r, 8, 3, 4);
  EXPECT_EQ(a, hq::residual_quant(r, 8, 3, 4));
  EXPECT_EQ(a.seed, 3U);
  EXPECT_EQ(a.vec_counter, 4U);
  EXPECT_EQ(hq::residual_dequant(a, 32, 8), hq::residual_dequant(a, 32, 8));
  EXPECT_NE(a, hq::residual_quant(r, 8, 3, 5));
}

TEST(ResidualQuant, LevelSumBound) {
  const double cap_per_coord = 2.0 + 1.0 / (2.0 * std::log(2.0));
  std::mt19937_64 gen(14);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (Index d : {64, 1024}) {
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd r = random_with_norm(d, u(gen), gen);
      // Heavy-tailed and sparse directions as well as Gaussian ones.
      if (t % 3 == 1) r = r.array().cube().matrix().normalized() * u(gen);
      if (t % 3 == 2) r = Eigen::VectorXd::Unit(d, t % d) * u(gen);
      const auto code = hq::residual_quant(r, 16, 15, t);
      if (code.idx_sigma == 0) continue;
      ASSERT_LE(static_cast<double>(hq::level_bits(code)), cap_per_coord * d) << d << " " << t;
    }
  }
}

TEST(ResidualQuant, LevelTail) {
  const Index d = 4096;
  std::mt19937_64 gen(15);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  std::vector<long> at_least(8, 0);
  long total = 0;
  for (int t = 0; t < 50; ++t) {
    const auto code = hq::residual_quant(random_with_norm(d, u(gen), gen), 16, 16, t);
    ASSERT_GT(code.idx_sigma, 0);
    for (Index i = 0; i < d; ++i) {
      for (int k = 0; k <= std::min<int>(code.levels(i), 7); ++k) at_least[k]++;
    }
    total += d;
  }
  for (int k = 1; k < 8; ++k) {
    const double freq = static_cast<double>(at_least[k]) / total;
    const double bound = 2.0 * std::exp(-std::exp2(2 * (k - 1)) / 2);
    EXPECT_LE(freq, 2 * bound) << "k=" << k;
  }
}

TEST(ResidualQuant, InnerProductError) {
  const Index d = 256;
  const int B = 16;
  std::mt19937_64 gen(16);
  const Eigen::VectorXd r = random_with_norm(d, 0.1, gen);
  const Eigen::VectorXd y = random_vector(d, gen).normalized();
  const int n = 20000;
  double sum = 0.0;
  for (int t = 0; t < n; ++t) {
    const auto code = hq::residual_quant(r, B, 17, t);
    const double e = y.dot(hq::residual_dequant(code, d, B) - r);
    sum += e * e;
  }
  const double bound = 13.0 * (0.01 + 1.0 / (B * B)) / d;
  EXPECT_LE(sum / n, bound);
}

TEST(RademacherOracle, FourthMomentIdentity) {
  std::mt19937_64 gen(18);
  for (int d : {2, 5, 8, 12}) {
    for (int t = 0; t < 20; ++t) {
      const auto rep = hq::oracle::fourth_moment_report(random_vector(d, gen).normalized(),
                                                        random_vector(d, gen).normalized());
      EXPECT_TRUE(rep.passes(1e-12)) << d << " " << rep.abs_error;
    }
  }
}

TEST(RademacherOracle, MgfIdentityAndBounds) {
  std::mt19937_64 gen(19);
  for (int d : {1, 4, 12}) {
    for (int t = 0; t < 5; ++t) {
      const Eigen::VectorXd a = random_vector(d, gen).normalized();
      for (double lambda = -3.0; lambda <= 3.0; lambda += 0.5) {
        EXPECT_TRUE(hq::oracle::mgf_identity_report(a, lambda).passes(1e-12 * std::exp(9.0)));
        EXPECT_TRUE(hq::oracle::mgf_bound_report(a, lambda).passes(1e-12));
      }
      EXPECT_TRUE(hq::oracle::square_mgf_bound_report(a).passes(1e-12));
    }
  }
}
