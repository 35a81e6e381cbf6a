#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lsfp/beta_estimation.hpp"

using namespace lsfp;

TEST(BetaEstimate, ConvergesAtLargeM) {
  std::vector<double> gains(8, 1.0);
  std::vector<double> raw;
  for (std::uint64_t t = 0; t < 100; ++t) raw.push_back(estimate_beta(gains, 0, 100000, 1.0, 8, 1000 + t).raw);
  EXPECT_NEAR(sample_mean(raw).mean, 1.0, 0.02);
}

TEST(BetaEstimate, ZeroGainIsUnbiasedAndClamped) {
  std::vector<double> gains{0.0, 1.0, 1.0, 1.0};
  std::vector<double> raw;
  for (std::uint64_t t = 0; t < 400; ++t) {
    const auto e = estimate_beta(gains, 0, 200, 1.0, 4, t);
    EXPECT_EQ(e.beta_hat, std::max(e.raw, 0.0));
    EXPECT_GE(e.beta_hat, 0.0);
    raw.push_back(e.raw);
  }
  const auto m = sample_mean(raw);
  EXPECT_LT(std::abs(m.mean), 4.0 * m.stderr_);
}

TEST(BetaEstimate, OrthogonalTonesDoNotLeak) {
  // noiseless, interferers present: only the target's own h contributes
  std::vector<double> loud{0.3, 50.0, 50.0};
  std::vector<double> quiet{0.3, 0.0, 0.0};
  const auto a = estimate_beta(loud, 0, 64, 2.0, 3, 17, false);
  const auto b = estimate_beta(quiet, 0, 64, 2.0, 3, 17, false);
  EXPECT_DOUBLE_EQ(a.raw, b.raw);
  Rng rng(17);
  const ComplexVector h = rng.complex_normal_vector(64);
  EXPECT_NEAR(b.raw, 0.3 * h.squaredNorm() / 64.0, 1e-14);
}

TEST(BetaEstimate, Errors) {
  std::vector<double> g{1.0, 1.0};
  EXPECT_THROW(estimate_beta(g, 0, 10, 1.0, 0, 1), ConfigError);
  EXPECT_THROW(estimate_beta(g, 2, 10, 1.0, 2, 1), ConfigError);
  EXPECT_THROW(estimate_beta(g, 0, 10, 1.0, 3, 1), ConfigError);
  EXPECT_THROW(estimate_beta(g, 0, 0, 1.0, 2, 1), ConfigError);
  EXPECT_THROW(estimate_beta(g, 0, 10, 0.0, 2, 1), ConfigError);
  EXPECT_THROW(estimate_beta({1.0, -1.0}, 0, 10, 1.0, 2, 1), ConfigError);
}

TEST(BetaStudy, UnbiasedAndShrinking) {
  const std::vector<double> gains{0.8, 1.0, 0.5, 1.2};
  const auto rows = beta_convergence_study(gains, 0, {100, 1000, 10000}, 1.0, 300, 44, 0);
  std::vector<double> m, sd;
  for (const auto& r : rows) {
    EXPECT_EQ(r.beta, 0.8);
    EXPECT_LT(std::abs(r.raw.mean - 0.8), 4.0 * r.raw.stderr_) << "M=" << r.M;
    m.push_back(static_cast<double>(r.M));
    sd.push_back(r.raw.stddev);
  }
  EXPECT_NEAR(loglog_slope(m, sd), -0.5, 0.1);
}

TEST(BetaStudy, ThreadCountDoesNotMatter) {
  const std::vector<double> gains{1.0, 1.0};
  const auto a = beta_convergence_study(gains, 1, {50}, 1.0, 40, 9, 1);
  const auto b = beta_convergence_study(gains, 1, {50}, 1.0, 40, 9, 4);
  EXPECT_EQ(a[0].raw.mean, b[0].raw.mean);
  EXPECT_EQ(a[0].raw.stddev, b[0].raw.stddev);
}

TEST(BetaStudy, Csv) {
  BetaStudyRow r;
  r.M = 10;
  r.trials = 3;
  r.beta = 1;
  r.raw.mean = 0.5;
  std::stringstream ss;
  write_beta_study_csv(ss, {r});
  EXPECT_EQ(ss.str(), "M,trials,beta,mean_raw,stderr,stddev\n10,3,1,0.5,0,0\n");
}

TEST(Planning, SupportableCells) {
  EXPECT_EQ(supportable_cells(1400, 8, 20), 560u);
  EXPECT_THROW(supportable_cells(10, 1, 0), ConfigError);
}
