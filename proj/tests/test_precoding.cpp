#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "lsfp/oracle.hpp"
#include "lsfp/precoding.hpp"
#include "test_util.hpp"

using namespace lsfp;

namespace {

// two-cell example: beta_1^{[k1]}=1, beta_2^{[k1]}=0.2, beta_1^{[k2]}=0.3, beta_2^{[k2]}=1
LargeScaleFading two_cell() {
  Tensor3 t(2, 1, 2);
  t(0, 0, 0) = 1.0;
  t(1, 0, 0) = 0.2;
  t(0, 0, 1) = 0.3;
  t(1, 0, 1) = 1.0;
  return LargeScaleFading(t);
}

}  // namespace

TEST(BuildBD, SingleCell) {
  const auto B = build_BD(symmetric_fading(1, 1, 2.0), 1.0, 1.5, 0);
  EXPECT_DOUBLE_EQ(B(0, 0), 2.0 / std::sqrt(4.0));
}

TEST(BuildBD, SymmetricIsRankOne) {
  const auto B = build_BD(symmetric_fading(3, 1, 0.6), 1.0, 1.0, 0);
  EXPECT_TRUE((B.array() == B(0, 0)).all());
}

TEST(BuildBD, TwoCellMatchesScalarOracle) {
  const auto B = build_BD(two_cell(), 1.0, 1.0, 0);
  // values from tests/oracle/derive_values.py
  EXPECT_NEAR(B(0, 0), 0.6593804733957871, 1e-15);
  EXPECT_NEAR(B(0, 1), 0.13483997249264842, 1e-15);
  EXPECT_NEAR(B(1, 0), 0.19781414201873612, 1e-15);
  EXPECT_NEAR(B(1, 1), 0.674199862463242, 1e-15);
}

TEST(BuildBMu, ScalarCases) {
  EXPECT_DOUBLE_EQ(build_B_mu(symmetric_fading(1, 1, 1.0), 1.0, 1.0, 0)(0, 0), 0.5);
  const auto f = two_cell();
  const auto B0 = build_B_mu(f, 0.0, 1.0, 0);
  for (int l = 0; l < 2; ++l)
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(B0(l, j), f(j, 0, l) * f(j, 0, j));
  const auto Bs = build_B_mu(symmetric_fading(3, 2, 0.5), 2.0, 1.0, 1);
  EXPECT_TRUE(Bs.isApprox(RealMatrix::Constant(3, 3, 0.25 / 4.0)));
}

TEST(BuildBMu, RelatesToBD) {
  const auto f = reference_fading();
  const auto lam = compute_lambda_sq(f, 1.0, 2.0, 9);
  for (std::size_t k = 0; k < 2; ++k) {
    RealMatrix scale = RealMatrix::Zero(3, 3);
    for (int j = 0; j < 3; ++j) scale(j, j) = std::sqrt(lam(std::size_t(j), k) / (9.0 * 2.0));
    EXPECT_TRUE(build_B_mu(f, 1.0, 2.0, k).isApprox(build_BD(f, 1.0, 2.0, k) * scale, 1e-14));
  }
}

TEST(BuildBU, Layout) {
  const auto f = two_cell();
  const auto B = build_BU(f, 0);
  EXPECT_EQ(B(0, 1), 0.3);  // base station 0, cell 1
  EXPECT_EQ(B(1, 0), 0.2);
  EXPECT_EQ(build_BU(symmetric_fading(1, 1, 0.7), 0)(0, 0), 0.7);
  const auto S = build_BU(symmetric_fading(3, 1, 0.7), 0);
  EXPECT_TRUE((S.array() == 0.7).all());
}

TEST(ZfLsfp, SymmetricIsSingular) {
  const auto f = symmetric_fading(2, 3, 1.0);
  try {
    zf_lsfp(f, 1.0, 3.0);
    FAIL() << "expected SingularMatrix";
  } catch (const SingularMatrix& e) {
    EXPECT_EQ(e.pilot_index(), 0u);
  }
  EXPECT_THROW(zf_lsfd(f), SingularMatrix);
}

TEST(ZfLsfp, ReportsOffendingPilot) {
  Tensor3 t(2, 2, 2, 1.0);
  t(0, 0, 1) = 0.2;
  t(1, 0, 0) = 0.1;  // pilot 0 fine, pilot 1 symmetric
  try {
    zf_lsfp(LargeScaleFading(t), 1.0, 2.0);
    FAIL() << "expected SingularMatrix";
  } catch (const SingularMatrix& e) {
    EXPECT_EQ(e.pilot_index(), 1u);
    EXPECT_GT(e.condition_number(), kSingularConditionNumber);
  }
}

TEST(ZfLsfp, SingleCell) {
  const auto f = symmetric_fading(1, 1, 1.0);
  for (ZfVariant v : {ZfVariant::kEta, ZfVariant::kMu}) {
    const auto m = zf_lsfp(f, 1.0, 1.0, v);
    const double B = v == ZfVariant::kMu ? 0.5 : 1.0 / std::sqrt(2.0);
    EXPECT_DOUBLE_EQ(m.phi[0](0, 0), 1.0);
    EXPECT_NEAR(m.rho_A, B * B, 1e-15);
  }
}

TEST(ZfLsfp, IdentityAndRowConstraint) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = test_util::random_instance(seed);
    for (ZfVariant v : {ZfVariant::kEta, ZfVariant::kMu}) {
      const auto m = zf_lsfp(f, 1.3, 3.0, v);
      double worst = 0.0;
      for (std::size_t k = 0; k < f.K(); ++k) {
        const RealMatrix B = v == ZfVariant::kMu ? build_B_mu(f, 1.3, 3.0, k) : build_BD(f, 1.3, 3.0, k);
        const RealMatrix I = std::sqrt(m.rho_A) * RealMatrix::Identity(B.rows(), B.cols());
        EXPECT_LT((m.phi[k] * B - I).norm() / I.norm(), 1e-10);
        EXPECT_LT((B * m.phi[k] - I).norm() / I.norm(), 1e-10);
        worst = std::max(worst, m.phi[k].rowwise().squaredNorm().maxCoeff());
      }
      EXPECT_NEAR(worst, 1.0, 1e-12);
    }
  }
}

TEST(ZfLsfd, InverseOfBU) {
  EXPECT_DOUBLE_EQ(zf_lsfd(symmetric_fading(1, 1, 0.25)).omega[0](0, 0), 4.0);
  const auto f = reference_fading();
  const auto m = zf_lsfd(f);
  for (std::size_t k = 0; k < 2; ++k) {
    const RealMatrix I = RealMatrix::Identity(3, 3);
    EXPECT_LT((m.omega[k] * build_BU(f, k) - I).norm() / I.norm(), 1e-10);
  }
}

TEST(NoLsfp, DiagonalWithExpectedEntries) {
  const auto m = no_lsfp(symmetric_fading(1, 1, 1.0), 1.0, 1.0, 4);
  EXPECT_NEAR(m.phi[0](0, 0), 0.70710678118654752, 1e-15);
  const auto f = reference_fading();
  const auto n = no_lsfp(f, 1.0, 2.0, 32);
  for (std::size_t k = 0; k < 2; ++k) {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) { EXPECT_EQ(n.phi[k](a, b), 0.0); }
    EXPECT_TRUE(n.omega[k].isIdentity());
  }
  // raw equivalent is the identity: unit row power
  EXPECT_NEAR(max_transmit_row_power(n, f, 1.0, 2.0, 32), 1.0, 1e-14);
}

TEST(NoLsfp, UnitEffectivePower) {
  // E ||g_hat phi s||^2 = 1 at M = 64
  Tensor3 t(2, 1, 2, 0.3);
  t(0, 0, 0) = 1.0;
  t(1, 0, 1) = 0.8;
  const LargeScaleFading f(t);
  const OperatingPoint op{64, 1, 1.0, 1.0};
  const auto m = no_lsfp(f, op.rho_r, 1.0, op.M);
  double s = 0.0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const auto ch = simulate_training(f, op, derive_seed(40, {std::uint64_t(i)}));
    s += (m.phi[0](1, 1) * ch.est.g_hat_vec(1, 0, 1)).squaredNorm();
  }
  EXPECT_NEAR(s / n, 1.0, 0.03);
}

TEST(Conventions, AbsorbRoundTrip) {
  const auto f = reference_fading();
  const auto zf = zf_lsfp(f, 1.0, 2.0, ZfVariant::kEta);
  const auto abs = absorbed_phi(zf, f, 1.0, 2.0, 50);
  const auto back = unit_norm_phi(abs, f, 1.0, 2.0, 50);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(back[k].isApprox(zf.phi[k], 1e-14));
  const auto alpha = phi_to_alpha(abs, f, 1.0, 2.0);
  const auto again = alpha_to_phi(alpha, f, 1.0, 2.0);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(again[k].isApprox(abs[k], 1e-14));
  const auto plain = plain_omega(zf_lsfd(f), f, 1.0, 2.0, 50);
  const auto star = star_omega(plain, f, 1.0, 2.0, 50);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_TRUE(star[k].isApprox(zf_lsfd(f).omega[k], 1e-14));
}

TEST(LsfpCombine, MatrixVectorProduct) {
  RealMatrix P(2, 2);
  P << 0.5, -0.25, 0.1, 0.9;
  ComplexVector s(2);
  s << Complex(1, 2), Complex(-0.5, 0.3);
  const ComplexVector c = lsfp_combine(P, s);
  EXPECT_NEAR(std::abs(c(0) - (0.5 * s(0) - 0.25 * s(1))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(c(1) - (0.1 * s(0) + 0.9 * s(1))), 0.0, 1e-15);
  EXPECT_TRUE(lsfp_combine(RealMatrix::Identity(2, 2), s).isApprox(s));
  EXPECT_TRUE(lsfp_combine(P, ComplexVector::Zero(2)).isZero());
  EXPECT_THROW(lsfp_combine(P, ComplexVector::Zero(3)), DimensionError);
}

TEST(Epsilon, ScalarCases) {
  const auto f = symmetric_fading(1, 1, 1.0);
  const auto m = no_lsfp(f, 1.0, 1.0, 4);
  EXPECT_NEAR(epsilon_feedback(f, m.phi, 1.0, 1.0, 1.0, 4)(0, 0), std::sqrt(2.0), 1e-14);
  EXPECT_EQ(epsilon_feedback(f, m.phi, 0.0, 1.0, 1.0, 4)(0, 0), 0.0);
}

TEST(Epsilon, ZfEtaEqualsDetectorScale) {
  // for the eta variant the useful gain is sqrt(M rho_f rho_r rho_A tau) for every user
  const auto f = reference_fading();
  const auto zf = zf_lsfp(f, 1.0, 2.0, ZfVariant::kEta);
  const std::size_t M = 128;
  const auto eps = epsilon_feedback(f, absorbed_phi(zf, f, 1.0, 2.0, M), 2.0, 1.0, 2.0, M);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 3; ++l) EXPECT_NEAR(eps(k, l), std::sqrt(128.0 * 2.0 * zf.rho_A * 2.0), 1e-12);
}

TEST(Gamma, HomogeneityAndZero) {
  const auto f = reference_fading();
  const auto alpha = phi_to_alpha(no_lsfp(f, 1.0, 2.0, 16).phi, f, 1.0, 2.0);
  CoefficientSet zero = alpha;
  for (auto& a : zero) a.setZero();
  EXPECT_EQ(bs_power_gamma(f, zero, 1.0, 2.0, 16, 1), 0.0);
  CoefficientSet scaled = alpha;
  for (auto& a : scaled) a *= 3.0;
  EXPECT_NEAR(bs_power_gamma(f, scaled, 1.0, 2.0, 16, 2), 9.0 * bs_power_gamma(f, alpha, 1.0, 2.0, 16, 2), 1e-12);
  // no-LSFP: every base station radiates K units of power
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(bs_power_gamma(f, alpha, 1.0, 2.0, 16, j), 2.0, 1e-12);
}

TEST(Gamma, MatchesTransmitPower) {
  // single cell, no LSFP: gamma = E ||x_j||^2 per unit rho_f
  const auto f = symmetric_fading(1, 2, 0.6);
  const OperatingPoint op{64, 2, 1.0, 1.0};
  const auto m = no_lsfp(f, 1.0, 2.0, op.M);
  const double gamma = bs_power_gamma(f, phi_to_alpha(m.phi, f, 1.0, 2.0), 1.0, 2.0, op.M, 0);
  double s = 0.0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const auto seed = derive_seed(41, {std::uint64_t(i)});
    const auto ch = simulate_training(f, op, seed);
    Rng rng(seed + 1);
    ComplexVector x = ComplexVector::Zero(op.M);
    for (std::size_t k = 0; k < 2; ++k) x += ch.est.g_hat_vec(0, k, 0).conjugate() * m.phi[k](0, 0) * rng.qpsk();
    s += x.squaredNorm();
  }
  EXPECT_NEAR(s / n / gamma, 1.0, 0.03);
}

TEST(MatricesCsv, Format) {
  std::stringstream ss;
  write_matrices_csv(ss, {RealMatrix::Identity(2, 2)});
  EXPECT_EQ(ss.str(), "k,row,col,value\n0,0,0,1\n0,0,1,0\n0,1,0,0\n0,1,1,1\n");
}
