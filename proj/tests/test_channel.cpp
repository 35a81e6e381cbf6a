#include <cmath>

#include <gtest/gtest.h>

#include "lsfp/channel.hpp"
#include "lsfp/stats.hpp"

using namespace lsfp;

TEST(Theta, ZeroPowerGivesZero) {
  const auto f = symmetric_fading(3, 2, 0.7);
  const Tensor3 theta = compute_theta(f, 0.0, 4.0);
  for (double t : theta.data()) EXPECT_EQ(t, 0.0);
}

TEST(Theta, ScalarValues) {
  EXPECT_DOUBLE_EQ(compute_theta(symmetric_fading(1, 1, 1.0), 1.0, 1.0)(0, 0, 0), 0.5);
  Tensor3 t(2, 1, 2, 1.0);
  t(0, 0, 1) = 0.5;  // base station 0 sees 1 and 0.5
  const LargeScaleFading f(t);
  EXPECT_NEAR(compute_theta(f, 1.0, 2.0)(0, 0, 0), 0.35355339059327379, 1e-15);
}

TEST(LambdaSq, MatchesFormula) {
  const auto f = symmetric_fading(2, 1, 1.0);
  // M rho tau b^2 / (1 + 2 rho tau b) with M=10, rho tau = 3
  EXPECT_DOUBLE_EQ(compute_lambda_sq(f, 1.0, 3.0, 10)(1, 0), 30.0 / 7.0);
}

TEST(DrawRealization, DeterministicAndScaled) {
  Tensor3 t(2, 2, 2, 1.0);
  t(1, 1, 0) = 4.0;
  const LargeScaleFading f(t);
  const auto a = draw_realization(f, 8, 5);
  const auto b = draw_realization(f, 8, 5);
  EXPECT_EQ(a.h, b.h);
  EXPECT_TRUE(a.g_vec(1, 1, 0).isApprox(2.0 * a.h_vec(1, 1, 0)));
  EXPECT_THROW(draw_realization(f, 0, 1), ConfigError);
}

TEST(DrawRealization, UnitVarianceEntries) {
  const auto f = symmetric_fading(1, 1, 1.0);
  double s = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) s += std::norm(draw_realization(f, 1, derive_seed(11, {std::uint64_t(i)})).h(0, 0));
  EXPECT_NEAR(s / n, 1.0, 0.01);
}

TEST(DrawRealization, NormGrowsWithBeta) {
  const auto f = symmetric_fading(1, 1, 1.0);
  double s = 0.0;
  const int n = 10000, M = 16;
  for (int i = 0; i < n; ++i) s += draw_realization(f, M, derive_seed(12, {std::uint64_t(i)})).g.col(0).squaredNorm() / M;
  EXPECT_NEAR(s / n, 1.0, 0.02);
}

TEST(PilotPhase, RejectsShortPilots) {
  const auto f = symmetric_fading(1, 3, 1.0);
  const auto r = draw_realization(f, 4, 1);
  EXPECT_THROW(simulate_pilot_phase(r, f, 1.0, 2, 1), DimensionError);
  EXPECT_THROW(pilot_matrix(3, 2), DimensionError);
}

TEST(PilotPhase, PilotsAreOrthonormal) {
  const ComplexMatrix p = pilot_matrix(3, 5);
  EXPECT_TRUE((p.adjoint() * p).isApprox(ComplexMatrix::Identity(3, 3), 1e-15));
}

TEST(PilotPhase, NoiselessSingleUser) {
  const auto f = symmetric_fading(1, 1, 0.8);
  const auto r = draw_realization(f, 6, 2);
  const auto obs = simulate_pilot_phase(r, f, 2.0, 1, 3, false);
  EXPECT_TRUE(obs.Y[0].col(0).isApprox(std::sqrt(2.0) * r.g_vec(0, 0, 0)));
}

TEST(PilotPhase, OrthogonalPilotsIsolateUsers) {
  const auto f = symmetric_fading(2, 2, 1.0);
  const auto r = draw_realization(f, 5, 4);
  const auto obs = simulate_pilot_phase(r, f, 1.0, 3, 5, false);
  const double a = std::sqrt(3.0);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_TRUE(obs.despread(j, 1).isApprox(a * (r.g_vec(j, 1, 0) + r.g_vec(j, 1, 1))));
    EXPECT_TRUE(obs.Y[j].col(2).isZero());
  }
}

TEST(PilotPhase, DespreadStatistics) {
  // Y_j r^k ~ CN(0, (1 + rho tau sum_l beta) I)
  Tensor3 t(2, 1, 2, 1.0);
  t(0, 0, 1) = 0.3;
  const LargeScaleFading f(t);
  const int n = 10000;
  std::vector<Complex> xs(n);
  for (int i = 0; i < n; ++i) {
    const auto s = derive_seed(21, {std::uint64_t(i)});
    const auto r = draw_realization(f, 1, s);
    xs[i] = simulate_pilot_phase(r, f, 1.0, 2, s + 1).despread(0, 0)(0);
  }
  const auto v = sample_variance(std::span<const Complex>(xs));
  EXPECT_NEAR(v.variance, 1.0 + 2.0 * 1.3, 4.0 * v.stderr_);
}

TEST(Mmse, NoiselessSingleCellShrinks) {
  const auto f = symmetric_fading(1, 1, 0.5);
  const auto r = draw_realization(f, 7, 8);
  const auto obs = simulate_pilot_phase(r, f, 2.0, 3, 9, false);
  const auto e = mmse_estimate(obs, f, 2.0, 3);
  // rho tau beta / (1 + rho tau beta) = 3 / 4
  EXPECT_TRUE(e.g_hat_vec(0, 0, 0).isApprox(0.75 * r.g_vec(0, 0, 0), 1e-14));
}

TEST(Mmse, ProportionalityIsExact) {
  Tensor3 t(3, 2, 3, 0.4);
  t(1, 0, 2) = 1.3;
  t(2, 1, 0) = 0.05;
  const LargeScaleFading f(t);
  const auto r = draw_realization(f, 12, 1);
  const auto e = mmse_estimate(simulate_pilot_phase(r, f, 1.5, 2, 2), f, 1.5, 2);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t l = 0; l < 3; ++l) {
        const ComplexVector scaled = e.theta(j, k, j) / e.theta(j, k, l) * e.g_hat_vec(j, k, l);
        EXPECT_LT((scaled - e.g_hat_vec(j, k, j)).norm(), 1e-14 * e.g_hat_vec(j, k, j).norm());
      }
}

TEST(Mmse, RejectsMismatchedObservations) {
  const auto f = symmetric_fading(2, 1, 1.0);
  const auto r = draw_realization(f, 3, 1);
  auto obs = simulate_pilot_phase(r, f, 1.0, 1, 2);
  EXPECT_THROW(mmse_estimate(obs, f, 1.0, 2), DimensionError);
  obs.Y.pop_back();
  EXPECT_THROW(mmse_estimate(obs, f, 1.0, 1), DimensionError);
}

class MmseStatistics : public ::testing::Test {
 protected:
  static constexpr int kTrials = 10000;
  static constexpr std::size_t kM = 64;
  LargeScaleFading f{[] {
    Tensor3 t(2, 1, 2, 1.0);
    t(0, 0, 1) = 0.4;
    t(1, 0, 0) = 0.25;
    return t;
  }()};
};

TEST_F(MmseStatistics, EstimateVarianceMatches) {
  // per-component variance of g_hat_0^{[0 1]}, pooled over antennas
  double s = 0.0;
  for (int i = 0; i < kTrials; ++i) {
    const auto seed = derive_seed(31, {std::uint64_t(i)});
    const auto r = draw_realization(f, kM, seed);
    const auto e = mmse_estimate(simulate_pilot_phase(r, f, 1.0, 2, seed + 7), f, 1.0, 2);
    s += e.g_hat_vec(0, 0, 1).squaredNorm() / kM;
  }
  const double expected = moments::estimate_variance(f, 1.0, 2.0, 0, 0, 1);
  EXPECT_NEAR(s / kTrials / expected, 1.0, 0.03);
}

TEST_F(MmseStatistics, ErrorVarianceAndUncorrelatedness) {
  std::vector<Complex> a(kTrials), b(kTrials), err(kTrials);
  double cross = 0.0;
  for (int i = 0; i < kTrials; ++i) {
    const auto seed = derive_seed(32, {std::uint64_t(i)});
    const auto r = draw_realization(f, kM, seed);
    const auto e = mmse_estimate(simulate_pilot_phase(r, f, 1.0, 2, seed + 7), f, 1.0, 2, r);
    a[i] = e.g_hat_vec(0, 0, 0)(3);
    b[i] = e.g_tilde_vec(0, 0, 1)(3);
    err[i] = e.g_tilde_vec(0, 0, 0)(5);
    cross += (e.g_hat_vec(0, 0, 1).dot(e.g_hat_vec(0, 0, 0))).real() / kM;
  }
  // |sample correlation| < 5 / sqrt(trials)
  const auto cov = sample_covariance(a, b);
  const double va = sample_variance(std::span<const Complex>(a)).variance;
  const double vb = sample_variance(std::span<const Complex>(b)).variance;
  EXPECT_LT(std::abs(cov.covariance) / std::sqrt(va * vb), 5.0 / std::sqrt(double(kTrials)));
  const auto ve = sample_variance(std::span<const Complex>(err));
  EXPECT_NEAR(ve.variance, moments::error_variance(f, 1.0, 2.0, 0, 0, 0), 4.0 * ve.stderr_);
  EXPECT_NEAR(cross / kTrials / moments::estimate_cross_moment(f, 1.0, 2.0, 0, 0, 1), 1.0, 0.03);
}
