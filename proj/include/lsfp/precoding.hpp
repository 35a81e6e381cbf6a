#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

#include <Eigen/SVD>

#include "lsfp/channel.hpp"
#include "lsfp/common.hpp"
#include "lsfp/network.hpp"

namespace lsfp {

// K matrices of size L x L, one per pilot index.
using CoefficientSet = std::vector<RealMatrix>;

enum class LsfMode { kNone, kZeroForcing };

// Which large-scale matrix ZF-LSFP inverts: B_D (1/eta weighting, used with
// unit-norm conjugate beams) or B (mu weighting, used with the normaliser
// absorbed into the coefficients).
enum class ZfVariant { kEta, kMu };

// How phi is applied at the base station. kUnitNormBeam: beam u = g_hat / lambda
// and c = phi s, so the row constraint is a per-symbol power constraint.
// kAbsorbed: beam u = g_hat, 1/lambda already folded into phi.
enum class PhiConvention { kUnitNormBeam, kAbsorbed };

// kPlain: omega multiplies the matched-filter outputs directly.
// kStar: omega* = sqrt(rho_r tau M) beta_v^{[kv]} / (1 + ...) * omega.
enum class OmegaConvention { kPlain, kStar };

inline constexpr double kSingularConditionNumber = 1e12;

struct LsfMatrices {
  CoefficientSet phi;    // phi[k](j, v) = phi_j^{[kv]}
  CoefficientSet omega;  // omega[k](l, v) = omega_l^{[kv]}
  double rho_A = 1.0;
  LsfMode mode = LsfMode::kNone;
  ZfVariant variant = ZfVariant::kMu;
  PhiConvention phi_convention = PhiConvention::kUnitNormBeam;
  OmegaConvention omega_convention = OmegaConvention::kPlain;
};

// Row l, column j: beta_j^{[kl]} / eta_j^{[k]}.
inline RealMatrix build_BD(const LargeScaleFading& f, double rho_r, double tau, std::size_t k) {
  const auto L = static_cast<Eigen::Index>(f.L());
  RealMatrix B(L, L);
  for (Eigen::Index j = 0; j < L; ++j) {
    const double eta = std::sqrt(pilot_denominator(f, rho_r, tau, j, k));
    for (Eigen::Index l = 0; l < L; ++l) B(l, j) = f(j, k, l) / eta;
  }
  return B;
}

// Row l, column j: beta_j^{[kl]} mu_j^{[k]}, mu_j^{[k]} = beta_j^{[kj]} / (1 + ...).
inline RealMatrix build_B_mu(const LargeScaleFading& f, double rho_r, double tau, std::size_t k) {
  const auto L = static_cast<Eigen::Index>(f.L());
  RealMatrix B(L, L);
  for (Eigen::Index j = 0; j < L; ++j) {
    const double mu = f(j, k, j) / pilot_denominator(f, rho_r, tau, j, k);
    for (Eigen::Index l = 0; l < L; ++l) B(l, j) = f(j, k, l) * mu;
  }
  return B;
}

// Row l (base station), column j (cell): beta_l^{[kj]}.
inline RealMatrix build_BU(const LargeScaleFading& f, std::size_t k) {
  const auto L = static_cast<Eigen::Index>(f.L());
  RealMatrix B(L, L);
  for (Eigen::Index l = 0; l < L; ++l)
    for (Eigen::Index j = 0; j < L; ++j) B(l, j) = f(l, k, j);
  return B;
}

inline double condition_number(const RealMatrix& A) {
  const Eigen::JacobiSVD<RealMatrix> svd(A);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

inline RealMatrix checked_inverse(const RealMatrix& B, std::size_t k) {
  const double cond = condition_number(B);
  if (!(cond <= kSingularConditionNumber)) throw SingularMatrix(k, cond);
  return B.partialPivLu().inverse();
}

inline double max_row_norm_sq(const CoefficientSet& mats) {
  double m = 0.0;
  for (const auto& A : mats) m = std::max(m, A.rowwise().squaredNorm().maxCoeff());
  return m;
}

inline LsfMatrices zf_lsfp(const LargeScaleFading& f, double rho_r, double tau,
                           ZfVariant variant = ZfVariant::kMu) {
  LsfMatrices out;
  out.mode = LsfMode::kZeroForcing;
  out.variant = variant;
  out.phi_convention =
      variant == ZfVariant::kEta ? PhiConvention::kUnitNormBeam : PhiConvention::kAbsorbed;
  out.phi.reserve(f.K());
  for (std::size_t k = 0; k < f.K(); ++k) {
    const RealMatrix B = variant == ZfVariant::kEta ? build_BD(f, rho_r, tau, k)
                                                    : build_B_mu(f, rho_r, tau, k);
    out.phi.push_back(checked_inverse(B, k));
  }
  // one global normaliser; the binding row meets the constraint with equality
  out.rho_A = 1.0 / max_row_norm_sq(out.phi);
  const double scale = std::sqrt(out.rho_A);
  for (auto& P : out.phi) P *= scale;
  return out;
}

inline LsfMatrices zf_lsfd(const LargeScaleFading& f) {
  LsfMatrices out;
  out.mode = LsfMode::kZeroForcing;
  out.omega_convention = OmegaConvention::kStar;
  out.omega.reserve(f.K());
  for (std::size_t k = 0; k < f.K(); ++k) out.omega.push_back(checked_inverse(build_BU(f, k), k));
  return out;
}

// ZF in both directions.
inline LsfMatrices zf_scheme(const LargeScaleFading& f, double rho_r, double tau,
                             ZfVariant variant = ZfVariant::kMu) {
  LsfMatrices out = zf_lsfp(f, rho_r, tau, variant);
  LsfMatrices ul = zf_lsfd(f);
  out.omega = std::move(ul.omega);
  out.omega_convention = ul.omega_convention;
  return out;
}

// Conventional per-cell conjugate beamforming expressed as LSFP: diagonal phi
// carrying the 1/lambda normaliser, identity omega.
inline LsfMatrices no_lsfp(const LargeScaleFading& f, double rho_r, double tau, std::size_t M) {
  if (!(rho_r * tau > 0.0)) throw ConfigError("no_lsfp needs rho_r * tau > 0");
  const auto L = static_cast<Eigen::Index>(f.L());
  LsfMatrices out;
  out.mode = LsfMode::kNone;
  out.phi_convention = PhiConvention::kAbsorbed;
  out.omega_convention = OmegaConvention::kPlain;
  for (std::size_t k = 0; k < f.K(); ++k) {
    RealMatrix P = RealMatrix::Zero(L, L);
    for (Eigen::Index j = 0; j < L; ++j)
      P(j, j) = std::sqrt(pilot_denominator(f, rho_r, tau, j, k)) /
                (std::sqrt(static_cast<double>(M) * rho_r * tau) * f(j, k, j));
    out.phi.push_back(std::move(P));
    out.omega.push_back(RealMatrix::Identity(L, L));
  }
  return out;
}

// Coefficients with 1/lambda_j^{[kj]} folded into row j, the form the
// finite-M SINR expressions and the protocol simulator consume.
inline CoefficientSet absorbed_phi(const LsfMatrices& m, const LargeScaleFading& f, double rho_r,
                                   double tau, std::size_t M) {
  if (m.phi_convention == PhiConvention::kAbsorbed) return m.phi;
  const Tensor2 lam2 = compute_lambda_sq(f, rho_r, tau, M);
  CoefficientSet out = m.phi;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Eigen::Index j = 0; j < out[k].rows(); ++j)
      out[k].row(j) /= std::sqrt(lam2(static_cast<std::size_t>(j), k));
  return out;
}

// Inverse of absorbed_phi: coefficients applied with unit-norm beams.
inline CoefficientSet unit_norm_phi(const CoefficientSet& absorbed, const LargeScaleFading& f,
                                    double rho_r, double tau, std::size_t M) {
  const Tensor2 lam2 = compute_lambda_sq(f, rho_r, tau, M);
  CoefficientSet out = absorbed;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Eigen::Index j = 0; j < out[k].rows(); ++j)
      out[k].row(j) *= std::sqrt(lam2(static_cast<std::size_t>(j), k));
  return out;
}

// Average transmit power of each (k, j) symbol stream, E[|g_hat^H ... c|^2]
// per unit rho_f: ||row j of the unit-norm-beam phi^{[k]}||^2.
inline double max_transmit_row_power(const LsfMatrices& m, const LargeScaleFading& f, double rho_r,
                                     double tau, std::size_t M) {
  if (m.phi_convention == PhiConvention::kUnitNormBeam) return max_row_norm_sq(m.phi);
  return max_row_norm_sq(unit_norm_phi(m.phi, f, rho_r, tau, M));
}

// omega in the plain convention, whatever the stored one.
inline CoefficientSet plain_omega(const LsfMatrices& m, const LargeScaleFading& f, double rho_r,
                                  double tau, std::size_t M) {
  if (m.omega_convention == OmegaConvention::kPlain) return m.omega;
  CoefficientSet out = m.omega;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Eigen::Index v = 0; v < out[k].cols(); ++v) {
      const auto vv = static_cast<std::size_t>(v);
      const double w = std::sqrt(rho_r * tau * static_cast<double>(M)) * f(vv, k, vv) /
                       pilot_denominator(f, rho_r, tau, vv, k);
      out[k].col(v) /= w;
    }
  return out;
}

inline CoefficientSet star_omega(const CoefficientSet& plain, const LargeScaleFading& f,
                                 double rho_r, double tau, std::size_t M) {
  CoefficientSet out = plain;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Eigen::Index v = 0; v < out[k].cols(); ++v) {
      const auto vv = static_cast<std::size_t>(v);
      out[k].col(v) *= std::sqrt(rho_r * tau * static_cast<double>(M)) * f(vv, k, vv) /
                       pilot_denominator(f, rho_r, tau, vv, k);
    }
  return out;
}

// c_j^{[k]} = row j of phi^{[k]} times (s^{[k1]}, ..., s^{[kL]}).
template <typename Derived>
ComplexVector lsfp_combine(const RealMatrix& phi_k, const Eigen::MatrixBase<Derived>& s) {
  if (s.size() != phi_k.cols()) throw DimensionError("signal vector length must equal L");
  return phi_k.cast<Complex>() * s;
}

// alpha_j^{[kl]} = sqrt(rho_r tau) beta_j^{[kj]} / (1 + ...) * phi_j^{[kl]} (absorbed phi).
inline CoefficientSet phi_to_alpha(const CoefficientSet& phi, const LargeScaleFading& f,
                                   double rho_r, double tau) {
  CoefficientSet out = phi;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Eigen::Index j = 0; j < out[k].rows(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      out[k].row(j) *= std::sqrt(rho_r * tau) * f(jj, k, jj) / pilot_denominator(f, rho_r, tau, jj, k);
    }
  return out;
}

inline CoefficientSet alpha_to_phi(const CoefficientSet& alpha, const LargeScaleFading& f,
                                   double rho_r, double tau) {
  CoefficientSet out = alpha;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (Eigen::Index j = 0; j < out[k].rows(); ++j) {
      const auto jj = static_cast<std::size_t>(j);
      out[k].row(j) /= std::sqrt(rho_r * tau) * f(jj, k, jj) / pilot_denominator(f, rho_r, tau, jj, k);
    }
  return out;
}

// epsilon(k, l): expected effective-channel gain of user k in cell l,
// sqrt(rho_f) M rho_r tau sum_j beta_j^{[kl]} beta_j^{[kj]} / (1 + ...) phi_j^{[kl]}.
// phi is in the absorbed convention.
inline Tensor2 epsilon_feedback(const LargeScaleFading& f, const CoefficientSet& phi, double rho_f,
                                double rho_r, double tau, std::size_t M) {
  Tensor2 eps(f.K(), f.L());
  const double pre = std::sqrt(rho_f) * static_cast<double>(M) * rho_r * tau;
  for (std::size_t k = 0; k < f.K(); ++k)
    for (std::size_t l = 0; l < f.L(); ++l) {
      double s = 0.0;
      for (std::size_t j = 0; j < f.L(); ++j)
        s += f(j, k, l) * f(j, k, j) / pilot_denominator(f, rho_r, tau, j, k) *
             phi[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
      eps(k, l) = pre * s;
    }
  return eps;
}

// gamma_j = M sum_k (1 + rho_r tau sum_s beta_j^{[ks]}) sum_v |alpha_j^{[kv]}|^2,
// the average transmit power of base station j per unit rho_f.
inline double bs_power_gamma(const LargeScaleFading& f, const CoefficientSet& alpha, double rho_r,
                             double tau, std::size_t M, std::size_t j) {
  double g = 0.0;
  for (std::size_t k = 0; k < f.K(); ++k)
    g += pilot_denominator(f, rho_r, tau, j, k) *
         alpha[k].row(static_cast<Eigen::Index>(j)).squaredNorm();
  return static_cast<double>(M) * g;
}

inline void write_matrices_csv(std::ostream& os, const CoefficientSet& mats) {
  os << "k,row,col,value\n";
  for (std::size_t k = 0; k < mats.size(); ++k)
    for (Eigen::Index r = 0; r < mats[k].rows(); ++r)
      for (Eigen::Index c = 0; c < mats[k].cols(); ++c)
        os << k << ',' << r << ',' << c << ',' << std::setprecision(17) << mats[k](r, c) << '\n';
}

}  // namespace lsfp
