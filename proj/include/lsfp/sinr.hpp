#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <vector>

#include "lsfp/channel.hpp"
#include "lsfp/common.hpp"
#include "lsfp/network.hpp"
#include "lsfp/precoding.hpp"

namespace lsfp {

inline constexpr double kInfiniteSinr = std::numeric_limits<double>::infinity();

inline double rate_from_sinr(double sinr) { return std::log2(1.0 + sinr); }

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

// ---- M -> infinity, no large-scale precoding ------------------------------

// Optional powers: per_user_power(k, l) is the power used for user k of cell l.
inline double asymptotic_downlink_sinr(const LargeScaleFading& f, double rho_r, double tau,
                                       std::size_t k, std::size_t j,
                                       const std::optional<Tensor2>& per_user_power = {}) {
  auto p = [&](std::size_t l) { return per_user_power ? (*per_user_power)(k, l) : 1.0; };
  const double num = p(j) * f(j, k, j) * f(j, k, j) / pilot_denominator(f, rho_r, tau, j, k);
  double den = 0.0;
  for (std::size_t l = 0; l < f.L(); ++l)
    if (l != j) den += p(l) * f(l, k, j) * f(l, k, j) / pilot_denominator(f, rho_r, tau, l, k);
  return den > 0.0 ? num / den : kInfiniteSinr;
}

inline double asymptotic_uplink_sinr(const LargeScaleFading& f, std::size_t k, std::size_t j,
                                     const std::optional<Tensor2>& per_user_power = {}) {
  auto p = [&](std::size_t l) { return per_user_power ? (*per_user_power)(k, l) : 1.0; };
  const double num = p(j) * f(j, k, j) * f(j, k, j);
  double den = 0.0;
  for (std::size_t l = 0; l < f.L(); ++l)
    if (l != j) den += p(l) * f(j, k, l) * f(j, k, l);
  return den > 0.0 ? num / den : kInfiniteSinr;
}

// ---- finite M -------------------------------------------------------------

// Denominator pieces of one user's SINR. For the downlink they are
// M^2 I1, M I2 and the unit receiver noise; for the uplink noise is folded
// into M I2 and reported as 0.
struct LinkBreakdown {
  double signal = 0.0;
  double pilot_contamination = 0.0;  // M^2 I1
  double interference = 0.0;         // M I2
  double noise = 0.0;
  double sinr = 0.0;
  bool degenerate = false;  // zero decoder: 0/0 returned as 0

  double denominator() const { return pilot_contamination + interference + noise; }
};

namespace detail {

// beta_j^{[kl]} beta_j^{[kj]} / (1 + ...) for every base station j.
inline RealVector signal_weights(const LargeScaleFading& f, double rho_r, double tau,
                                 std::size_t k, std::size_t l) {
  RealVector c(static_cast<Eigen::Index>(f.L()));
  for (std::size_t j = 0; j < f.L(); ++j)
    c(static_cast<Eigen::Index>(j)) = f(j, k, l) * f(j, k, j) / pilot_denominator(f, rho_r, tau, j, k);
  return c;
}

inline void check_coefficients(const LargeScaleFading& f, const CoefficientSet& m) {
  const auto L = static_cast<Eigen::Index>(f.L());
  if (m.size() != f.K()) throw DimensionError("need one coefficient matrix per pilot index");
  for (const auto& A : m)
    if (A.rows() != L || A.cols() != L) throw DimensionError("coefficient matrices must be L x L");
}

}  // namespace detail

// phi is in the absorbed convention (beam u = g_hat).
inline LinkBreakdown finite_m_downlink_breakdown(const LargeScaleFading& f, const CoefficientSet& phi,
                                                 double rho_f, double rho_r, double tau,
                                                 std::size_t M, std::size_t k, std::size_t l) {
  detail::check_coefficients(f, phi);
  const double Md = static_cast<double>(M);
  const double rt = rho_r * tau;
  const RealVector c = detail::signal_weights(f, rho_r, tau, k, l);
  const RealVector proj = phi[k].transpose() * c;  // proj(v) = sum_j c_j phi_j^{[kv]}

  double i1 = 0.0;
  for (Eigen::Index v = 0; v < proj.size(); ++v)
    if (static_cast<std::size_t>(v) != l) i1 += proj(v) * proj(v);
  i1 *= rho_f * rt * rt;

  double i2 = 0.0;
  for (std::size_t j = 0; j < f.L(); ++j) {
    double s = 0.0;
    for (std::size_t n = 0; n < f.K(); ++n)
      s += f(j, n, j) * f(j, n, j) / pilot_denominator(f, rho_r, tau, j, n) *
           phi[n].row(static_cast<Eigen::Index>(j)).squaredNorm();
    i2 += f(j, k, l) * s;
  }
  i2 *= rho_f * rt;

  LinkBreakdown b;
  const double sig = proj(static_cast<Eigen::Index>(l));
  b.signal = rho_f * Md * Md * rt * rt * sig * sig;
  b.pilot_contamination = Md * Md * i1;
  b.interference = Md * i2;
  b.noise = 1.0;
  b.sinr = b.signal / b.denominator();
  return b;
}

inline double finite_m_downlink_sinr(const LargeScaleFading& f, const CoefficientSet& phi,
                                     double rho_f, double rho_r, double tau, std::size_t M,
                                     std::size_t k, std::size_t l) {
  return finite_m_downlink_breakdown(f, phi, rho_f, rho_r, tau, M, k, l).sinr;
}

// Same SINR written in the alpha coefficients.
inline double finite_m_downlink_sinr_alpha(const LargeScaleFading& f, const CoefficientSet& alpha,
                                           double rho_f, double rho_r, double tau, std::size_t M,
                                           std::size_t k, std::size_t l) {
  detail::check_coefficients(f, alpha);
  const double Md = static_cast<double>(M);
  RealVector bkl(static_cast<Eigen::Index>(f.L()));
  for (std::size_t j = 0; j < f.L(); ++j) bkl(static_cast<Eigen::Index>(j)) = f(j, k, l);
  const RealVector proj = alpha[k].transpose() * bkl;

  double j1 = 0.0;
  for (Eigen::Index v = 0; v < proj.size(); ++v)
    if (static_cast<std::size_t>(v) != l) j1 += proj(v) * proj(v);
  j1 *= rho_f * rho_r * tau;

  double j2 = 0.0;
  for (std::size_t j = 0; j < f.L(); ++j)
    for (std::size_t n = 0; n < f.K(); ++n)
      j2 += f(j, k, l) * pilot_denominator(f, rho_r, tau, j, n) *
            alpha[n].row(static_cast<Eigen::Index>(j)).squaredNorm();
  j2 *= rho_f;

  const double sig = proj(static_cast<Eigen::Index>(l));
  const double num = Md * rho_f * rho_r * tau * sig * sig;
  return num / (Md * j1 + j2 + 1.0 / Md);
}

// All users at once; shares the per-base-station interference sums.
inline Tensor2 finite_m_downlink_sinr_all(const LargeScaleFading& f, const CoefficientSet& phi,
                                          double rho_f, double rho_r, double tau, std::size_t M) {
  detail::check_coefficients(f, phi);
  const std::size_t L = f.L(), K = f.K();
  const double Md = static_cast<double>(M);
  const double rt = rho_r * tau;
  std::vector<double> load(L, 0.0);
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t n = 0; n < K; ++n)
      load[j] += f(j, n, j) * f(j, n, j) / pilot_denominator(f, rho_r, tau, j, n) *
                 phi[n].row(static_cast<Eigen::Index>(j)).squaredNorm();
  Tensor2 out(K, L);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t l = 0; l < L; ++l) {
      const RealVector c = detail::signal_weights(f, rho_r, tau, k, l);
      const RealVector proj = phi[k].transpose() * c;
      double i1 = 0.0;
      for (std::size_t v = 0; v < L; ++v)
        if (v != l) i1 += proj(static_cast<Eigen::Index>(v)) * proj(static_cast<Eigen::Index>(v));
      double i2 = 0.0;
      for (std::size_t j = 0; j < L; ++j) i2 += f(j, k, l) * load[j];
      const double sig = proj(static_cast<Eigen::Index>(l));
      const double num = rho_f * Md * Md * rt * rt * sig * sig;
      out(k, l) = num / (Md * Md * rho_f * rt * rt * i1 + Md * rho_f * rt * i2 + 1.0);
    }
  return out;
}

// Leading-order ratio of the finite-M downlink SINR for coefficients that
// scale as 1/sqrt(M). phi_unit is sqrt(M) times the absorbed coefficients.
inline double downlink_limit(const LargeScaleFading& f, const CoefficientSet& phi_unit,
                             double rho_r, double tau, std::size_t k, std::size_t l) {
  detail::check_coefficients(f, phi_unit);
  const RealVector proj = phi_unit[k].transpose() * detail::signal_weights(f, rho_r, tau, k, l);
  double den = 0.0;
  for (Eigen::Index v = 0; v < proj.size(); ++v)
    if (static_cast<std::size_t>(v) != l) den += proj(v) * proj(v);
  const double sig = proj(static_cast<Eigen::Index>(l));
  return den > 0.0 ? sig * sig / den : kInfiniteSinr;
}

inline double no_lsfp_downlink_limit(const LargeScaleFading& f, double rho_r, double tau,
                                     std::size_t k, std::size_t l) {
  // at M = 1 the no-LSFP coefficients are exactly sqrt(M) times their value at M
  return downlink_limit(f, no_lsfp(f, rho_r, tau, 1).phi, rho_r, tau, k, l);
}

// omega in the plain convention: omega[k](l, v) = omega_l^{[kv]}.
inline LinkBreakdown finite_m_uplink_breakdown(const LargeScaleFading& f, const CoefficientSet& omega,
                                               double rho_r, double tau, std::size_t M,
                                               std::size_t k, std::size_t l) {
  detail::check_coefficients(f, omega);
  const double Md = static_cast<double>(M);
  const double rt = rho_r * tau;
  const auto L = f.L();
  const auto w = omega[k].row(static_cast<Eigen::Index>(l));

  auto combined = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t v = 0; v < L; ++v)
      s += f(v, k, v) * f(v, k, j) / pilot_denominator(f, rho_r, tau, v, k) * w(static_cast<Eigen::Index>(v));
    return s;
  };

  double i1 = 0.0;
  for (std::size_t j = 0; j < L; ++j)
    if (j != l) {
      const double s = combined(j);
      i1 += s * s;
    }
  i1 *= rho_r * rho_r * rho_r * tau * tau;

  double i2 = 0.0;
  for (std::size_t v = 0; v < L; ++v) {
    double load = 0.0;
    for (std::size_t j = 0; j < L; ++j)
      for (std::size_t n = 0; n < f.K(); ++n) load += f(v, n, j);
    const double b = f(v, k, v);
    const double wv = w(static_cast<Eigen::Index>(v));
    i2 += wv * wv * rt * b * b / pilot_denominator(f, rho_r, tau, v, k) * (1.0 + rho_r * load);
  }

  LinkBreakdown out;
  const double sig = combined(l);
  out.signal = Md * Md * rho_r * rho_r * rho_r * tau * tau * sig * sig;
  out.pilot_contamination = Md * Md * i1;
  out.interference = Md * i2;
  if (out.denominator() > 0.0) {
    out.sinr = out.signal / out.denominator();
  } else {
    out.sinr = 0.0;
    out.degenerate = true;
  }
  return out;
}

inline double finite_m_uplink_sinr(const LargeScaleFading& f, const CoefficientSet& omega,
                                   double rho_r, double tau, std::size_t M, std::size_t k,
                                   std::size_t l) {
  return finite_m_uplink_breakdown(f, omega, rho_r, tau, M, k, l).sinr;
}

// omega_star[k](l, v) = omega_l^{[kv]*}.
inline double finite_m_uplink_sinr_simplified(const LargeScaleFading& f,
                                              const CoefficientSet& omega_star, double rho_r,
                                              double tau, std::size_t M, std::size_t k,
                                              std::size_t l) {
  detail::check_coefficients(f, omega_star);
  const double Md = static_cast<double>(M);
  const auto L = f.L();
  const auto w = omega_star[k].row(static_cast<Eigen::Index>(l));
  auto combined = [&](std::size_t j) {
    double s = 0.0;
    for (std::size_t v = 0; v < L; ++v) s += f(v, k, j) * w(static_cast<Eigen::Index>(v));
    return s;
  };
  double j1 = 0.0;
  for (std::size_t j = 0; j < L; ++j)
    if (j != l) {
      const double s = combined(j);
      j1 += s * s;
    }
  j1 *= rho_r * rho_r * tau;
  double j2 = 0.0;
  for (std::size_t v = 0; v < L; ++v) {
    double load = 0.0;
    for (std::size_t j = 0; j < L; ++j)
      for (std::size_t n = 0; n < f.K(); ++n) load += f(v, n, j);
    const double wv = w(static_cast<Eigen::Index>(v));
    j2 += wv * wv * pilot_denominator(f, rho_r, tau, v, k) * (1.0 + rho_r * load);
  }
  const double sig = combined(l);
  const double num = Md * rho_r * rho_r * tau * sig * sig;
  const double den = Md * j1 + j2;
  return den > 0.0 ? num / den : 0.0;
}

// Leading-order ratio of the uplink SINR for M-independent plain omega.
inline double uplink_limit(const LargeScaleFading& f, const CoefficientSet& omega, double rho_r,
                           double tau, std::size_t k, std::size_t l) {
  const LinkBreakdown b = finite_m_uplink_breakdown(f, omega, rho_r, tau, 1, k, l);
  return b.pilot_contamination > 0.0 ? b.signal / b.pilot_contamination : kInfiniteSinr;
}

// ---- report ---------------------------------------------------------------

struct SinrReport {
  Tensor2 sinr_dl, sinr_ul, rate_dl, rate_ul;  // [k][l]
  std::vector<LinkBreakdown> breakdown_dl;     // index k * L + l
  std::vector<LinkBreakdown> breakdown_ul;
  std::size_t L = 0, K = 0;
};

inline SinrReport compute_sinr_report(const LargeScaleFading& f, const LsfMatrices& m,
                                      double rho_f, double rho_r, double tau, std::size_t M) {
  const CoefficientSet phi = absorbed_phi(m, f, rho_r, tau, M);
  const CoefficientSet omega = plain_omega(m, f, rho_r, tau, M);
  SinrReport r;
  r.L = f.L();
  r.K = f.K();
  r.sinr_dl = r.sinr_ul = r.rate_dl = r.rate_ul = Tensor2(r.K, r.L);
  for (std::size_t k = 0; k < r.K; ++k)
    for (std::size_t l = 0; l < r.L; ++l) {
      const LinkBreakdown d = finite_m_downlink_breakdown(f, phi, rho_f, rho_r, tau, M, k, l);
      const LinkBreakdown u = finite_m_uplink_breakdown(f, omega, rho_r, tau, M, k, l);
      r.sinr_dl(k, l) = d.sinr;
      r.sinr_ul(k, l) = u.sinr;
      r.rate_dl(k, l) = rate_from_sinr(d.sinr);
      r.rate_ul(k, l) = rate_from_sinr(u.sinr);
      r.breakdown_dl.push_back(d);
      r.breakdown_ul.push_back(u);
    }
  return r;
}

// i1, i2, noise are the downlink denominator pieces.
inline void write_sinr_report_csv(std::ostream& os, const SinrReport& r) {
  os << "k,l,sinr_dl,sinr_ul,rate_dl,rate_ul,i1,i2,noise\n" << std::setprecision(17);
  for (std::size_t k = 0; k < r.K; ++k)
    for (std::size_t l = 0; l < r.L; ++l) {
      const LinkBreakdown& d = r.breakdown_dl[k * r.L + l];
      os << k << ',' << l << ',' << r.sinr_dl(k, l) << ',' << r.sinr_ul(k, l) << ','
         << r.rate_dl(k, l) << ',' << r.rate_ul(k, l) << ',' << d.pilot_contamination << ','
         << d.interference << ',' << d.noise << '\n';
    }
}

}  // namespace lsfp
