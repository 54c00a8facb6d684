#include <gtest/gtest.h>

#include <cmath>

#include "hq/oracle.hpp"

using hq::oracle::EnumerationReport;

TEST(Oracle, EnumerationOfSimpleMoments) {
  for (int d = 1; d <= 12; ++d) {
    EXPECT_EQ(hq::oracle::enumerate_rademacher_expectation(
                  [](const Eigen::VectorXd& e) { return e.sum(); }, d),
              0.0);
    EXPECT_EQ(hq::oracle::enumerate_rademacher_expectation(
                  [](const Eigen::VectorXd& e) { return e.sum() * e.sum(); }, d),
              d);
  }
  EXPECT_THROW(hq::oracle::enumerate_rademacher_expectation(
                   [](const Eigen::VectorXd&) { return 0.0; }, 13),
               std::invalid_argument);
  EXPECT_THROW(hq::oracle::enumerate_rademacher_expectation(
                   [](const Eigen::VectorXd&) { return 0.0; }, 0),
               std::invalid_argument);
}

TEST(Oracle, DenseHadamardIsOrthogonal) {
  for (Eigen::Index d = 1; d <= 16; d *= 2) {
    const Eigen::MatrixXd H = hq::oracle::dense_hadamard(d);
    EXPECT_LE((H.transpose() * H - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((H - H.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
  EXPECT_THROW(hq::oracle::dense_hadamard(32), std::invalid_argument);
  EXPECT_THROW(hq::oracle::dense_hadamard(3), std::invalid_argument);
}

TEST(Oracle, QuadratureOfKnownIntegrals) {
  EXPECT_NEAR(hq::oracle::u_average([](double) { return 3.0; }, {}), 3.0, 1e-15);
  EXPECT_NEAR(hq::oracle::integrate_piecewise([](double x) { return std::exp(x); }, 0, 1, {}),
              std::exp(1.0) - 1.0, 1e-13);
  // Step at 0.3 handled exactly by splitting.
  EXPECT_NEAR(hq::oracle::u_average([](double u) { return u < 0.3 ? 1.0 : 0.0; }, {0.3}), 0.3,
              1e-15);
  EXPECT_NEAR(hq::oracle::u_average([](double u) { return 1.0 / std::sqrt(u); }, {}, 1e-8), 2.0,
              1e-8);
}

TEST(Oracle, QuadratureReportsFailure) {
  EXPECT_THROW(hq::oracle::u_average([](double u) { return std::sin(1.0 / u) / u; }, {}, 1e-14),
               hq::oracle::QuadratureError);
  EXPECT_THROW(hq::oracle::integrate_piecewise([](double) { return 0.0; }, 1, 1, {}),
               std::invalid_argument);
}

TEST(Oracle, Breakpoints) {
  const auto u = hq::oracle::unbiased_dither_breakpoints(0.0, 4);
  ASSERT_EQ(u.size(), 2U);
  EXPECT_DOUBLE_EQ(u[0], 0.5);
  const auto b = hq::oracle::biased_dither_breakpoints(0.0, 4);
  ASSERT_EQ(b.size(), 1U);
  EXPECT_DOUBLE_EQ(b[0], 0.0);
  const auto g = hq::oracle::reconstruction_map_breakpoints(0.0, 1.0, 5);
  // Edges (1 - 1/4)/2 + m/4 = 0.375 + m/4 inside (0, 1).
  ASSERT_EQ(g.size(), 4U);
  EXPECT_DOUBLE_EQ(g[0], 0.125);
  EXPECT_DOUBLE_EQ(g[3], 0.875);
}

TEST(Oracle, ReportsAtSmallDimensions) {
  Eigen::VectorXd a(3), b(3);
  a << 1, 0, 0;
  b << 0, 1, 0;
  // Independent coordinates: E[X^2 Y^2] = 1.
  const EnumerationReport f = hq::oracle::fourth_moment_report(a, b);
  EXPECT_NEAR(f.exact, 1.0, 1e-15);
  EXPECT_TRUE(f.passes(1e-12));
  const auto m = hq::oracle::mgf_identity_report(a, 2.0);
  EXPECT_NEAR(m.exact, std::cosh(2.0), 1e-14);
  const auto s = hq::oracle::square_mgf_bound_report(a);
  EXPECT_TRUE(s.is_bound);
  EXPECT_NEAR(s.exact, std::exp(1.0 / 3), 1e-15);
  EXPECT_EQ(s.reference, std::sqrt(3.0));
  EXPECT_THROW(hq::oracle::fourth_moment_report(a, Eigen::VectorXd::Ones(2)),
               std::invalid_argument);
}
