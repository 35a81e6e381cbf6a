#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "lsfp/common.hpp"
#include "lsfp/network.hpp"
#include "lsfp/rng.hpp"

namespace lsfp {

// Column index of the (j, k, l) tuple in the M x (L*K*L) channel matrices.
inline Eigen::Index tuple_index(std::size_t L, std::size_t K, std::size_t j, std::size_t k,
                                std::size_t l) {
  return static_cast<Eigen::Index>((j * K + k) * L + l);
}

// 1 + rho_r * tau * sum_s beta_j^{[ks]}: the MMSE normaliser at base station j
// for pilot k. Always >= 1.
inline double pilot_denominator(const LargeScaleFading& f, double rho_r, double tau,
                                std::size_t j, std::size_t k) {
  double s = 0.0;
  for (std::size_t l = 0; l < f.L(); ++l) s += f(j, k, l);
  return 1.0 + rho_r * tau * s;
}

inline Tensor3 compute_theta(const LargeScaleFading& f, double rho_r, double tau) {
  Tensor3 theta(f.L(), f.K(), f.L());
  const double a = std::sqrt(rho_r * tau);
  for (std::size_t j = 0; j < f.L(); ++j)
    for (std::size_t k = 0; k < f.K(); ++k) {
      const double d = pilot_denominator(f, rho_r, tau, j, k);
      for (std::size_t l = 0; l < f.L(); ++l) theta(j, k, l) = a * f(j, k, l) / d;
    }
  return theta;
}

// lambda_j^{[kj]}^2 = M rho_r tau beta_j^{[kj]}^2 / (1 + rho_r tau sum_s beta_j^{[ks]}),
// the expected squared norm of the in-cell estimate.
inline Tensor2 compute_lambda_sq(const LargeScaleFading& f, double rho_r, double tau,
                                 std::size_t M) {
  Tensor2 out(f.L(), f.K());
  for (std::size_t j = 0; j < f.L(); ++j)
    for (std::size_t k = 0; k < f.K(); ++k) {
      const double b = f(j, k, j);
      out(j, k) = static_cast<double>(M) * rho_r * tau * b * b / pilot_denominator(f, rho_r, tau, j, k);
    }
  return out;
}

// Per-component second-order statistics of the MMSE estimate and its error.
namespace moments {

// Var of one component of g_hat_j^{[kl]}.
inline double estimate_variance(const LargeScaleFading& f, double rho_r, double tau,
                                std::size_t j, std::size_t k, std::size_t l) {
  const double b = f(j, k, l);
  return rho_r * tau * b * b / pilot_denominator(f, rho_r, tau, j, k);
}

// Var of one component of g_tilde_j^{[kl]}.
inline double error_variance(const LargeScaleFading& f, double rho_r, double tau,
                             std::size_t j, std::size_t k, std::size_t l) {
  return f(j, k, l) - estimate_variance(f, rho_r, tau, j, k, l);
}

// Per-component E[g_hat_j^{[kl]} conj(g_hat_j^{[kj]})], real and nonnegative.
inline double estimate_cross_moment(const LargeScaleFading& f, double rho_r, double tau,
                                    std::size_t j, std::size_t k, std::size_t l) {
  return rho_r * tau * f(j, k, l) * f(j, k, j) / pilot_denominator(f, rho_r, tau, j, k);
}

}  // namespace moments

struct ChannelRealization {
  std::size_t L = 0, K = 0, M = 0;
  ComplexMatrix h;  // M x (L*K*L), CN(0, 1) entries
  ComplexMatrix g;  // sqrt(beta) * h

  auto h_vec(std::size_t j, std::size_t k, std::size_t l) const {
    return h.col(tuple_index(L, K, j, k, l));
  }
  auto g_vec(std::size_t j, std::size_t k, std::size_t l) const {
    return g.col(tuple_index(L, K, j, k, l));
  }
};

inline ChannelRealization draw_realization(const LargeScaleFading& f, std::size_t M,
                                           std::uint64_t seed) {
  if (M < 1) throw ConfigError("antenna count M must be at least 1");
  ChannelRealization r;
  r.L = f.L();
  r.K = f.K();
  r.M = M;
  const auto cols = static_cast<Eigen::Index>(r.L * r.K * r.L);
  const auto rows = static_cast<Eigen::Index>(M);
  r.h.resize(rows, cols);
  r.g.resize(rows, cols);
  Rng rng(seed);
  for (std::size_t j = 0; j < r.L; ++j)
    for (std::size_t k = 0; k < r.K; ++k)
      for (std::size_t l = 0; l < r.L; ++l) {
        const auto c = tuple_index(r.L, r.K, j, k, l);
        for (Eigen::Index m = 0; m < rows; ++m) r.h(m, c) = rng.complex_normal();
        r.g.col(c) = std::sqrt(f(j, k, l)) * r.h.col(c);
      }
  return r;
}

// Received training matrices Y_j (M x tau) for every base station. Pilot k is
// the k-th column of I_tau, so Y_j r^{[k]} is column k of Y_j.
struct PilotObservations {
  std::size_t tau = 0;
  std::vector<ComplexMatrix> Y;

  auto despread(std::size_t j, std::size_t k) const {
    return Y[j].col(static_cast<Eigen::Index>(k));
  }
};

inline ComplexMatrix pilot_matrix(std::size_t K, std::size_t tau) {
  if (tau < K) throw DimensionError("pilot length tau must be at least K");
  ComplexMatrix r = ComplexMatrix::Zero(static_cast<Eigen::Index>(tau), static_cast<Eigen::Index>(K));
  for (std::size_t k = 0; k < K; ++k) r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return r;
}

inline PilotObservations simulate_pilot_phase(const ChannelRealization& r, const LargeScaleFading& f,
                                              double rho_r, std::size_t tau, std::uint64_t seed,
                                              bool with_noise = true) {
  if (tau < r.K) throw DimensionError("pilot length tau must be at least K");
  if (f.L() != r.L || f.K() != r.K) throw DimensionError("realization and fading tensor disagree");
  const ComplexMatrix pilots = pilot_matrix(r.K, tau);
  const double amp = std::sqrt(rho_r * static_cast<double>(tau));
  const auto M = static_cast<Eigen::Index>(r.M);
  PilotObservations obs;
  obs.tau = tau;
  obs.Y.reserve(r.L);
  Rng rng(seed);
  for (std::size_t j = 0; j < r.L; ++j) {
    ComplexMatrix Y(M, static_cast<Eigen::Index>(tau));
    if (with_noise) {
      for (Eigen::Index c = 0; c < Y.cols(); ++c)
        for (Eigen::Index m = 0; m < M; ++m) Y(m, c) = rng.complex_normal();
    } else {
      Y.setZero();
    }
    for (std::size_t k = 0; k < r.K; ++k) {
      ComplexVector sum = ComplexVector::Zero(M);
      for (std::size_t l = 0; l < r.L; ++l) sum += r.g_vec(j, k, l);
      Y.noalias() += amp * sum * pilots.col(static_cast<Eigen::Index>(k)).adjoint();
    }
    obs.Y.push_back(std::move(Y));
  }
  return obs;
}

struct ChannelEstimates {
  std::size_t L = 0, K = 0, M = 0;
  ComplexMatrix g_hat;    // M x (L*K*L)
  Tensor3 theta;
  Tensor2 lambda_sq;
  ComplexMatrix g_tilde;  // g - g_hat; empty unless the truth was supplied

  auto g_hat_vec(std::size_t j, std::size_t k, std::size_t l) const {
    return g_hat.col(tuple_index(L, K, j, k, l));
  }
  auto g_tilde_vec(std::size_t j, std::size_t k, std::size_t l) const {
    return g_tilde.col(tuple_index(L, K, j, k, l));
  }
};

inline ChannelEstimates mmse_estimate(const PilotObservations& obs, const LargeScaleFading& f,
                                      double rho_r, std::size_t tau) {
  if (obs.Y.size() != f.L()) throw DimensionError("need one observation matrix per base station");
  if (obs.tau != tau) throw DimensionError("observation pilot length does not match tau");
  ChannelEstimates e;
  e.L = f.L();
  e.K = f.K();
  e.M = static_cast<std::size_t>(obs.Y.front().rows());
  e.theta = compute_theta(f, rho_r, static_cast<double>(tau));
  e.lambda_sq = compute_lambda_sq(f, rho_r, static_cast<double>(tau), e.M);
  e.g_hat.resize(static_cast<Eigen::Index>(e.M), static_cast<Eigen::Index>(e.L * e.K * e.L));
  for (std::size_t j = 0; j < e.L; ++j)
    for (std::size_t k = 0; k < e.K; ++k) {
      const auto y = obs.despread(j, k);
      for (std::size_t l = 0; l < e.L; ++l)
        e.g_hat.col(tuple_index(e.L, e.K, j, k, l)) = e.theta(j, k, l) * y;
    }
  return e;
}

inline ChannelEstimates mmse_estimate(const PilotObservations& obs, const LargeScaleFading& f,
                                      double rho_r, std::size_t tau, const ChannelRealization& truth) {
  ChannelEstimates e = mmse_estimate(obs, f, rho_r, tau);
  if (truth.M != e.M || truth.L != e.L || truth.K != e.K)
    throw DimensionError("realization does not match observations");
  e.g_tilde = truth.g - e.g_hat;
  return e;
}

}  // namespace lsfp
