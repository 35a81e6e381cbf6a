#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lsfp/channel.hpp"
#include "lsfp/common.hpp"
#include "lsfp/network.hpp"
#include "lsfp/parallel.hpp"
#include "lsfp/precoding.hpp"
#include "lsfp/rng.hpp"
#include "lsfp/sinr.hpp"
#include "lsfp/stats.hpp"

namespace lsfp {

struct OperatingPoint {
  std::size_t M = 32;
  std::size_t tau = 2;
  double rho_f = 1.0;
  double rho_r = 1.0;
};

// Asymmetric, well-conditioned L=3, K=2 tensor used as the oracle fixture.
// Rows are base stations, columns are cells.
inline LargeScaleFading reference_fading() {
  static constexpr double kBeta[2][3][3] = {
      {{1.00, 0.30, 0.15}, {0.20, 0.80, 0.25}, {0.10, 0.35, 1.20}},
      {{0.70, 0.12, 0.40}, {0.30, 1.10, 0.05}, {0.22, 0.18, 0.90}},
  };
  Tensor3 t(3, 2, 3);
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 2; ++k)
      for (std::size_t l = 0; l < 3; ++l) t(j, k, l) = kBeta[k][j][l];
  return LargeScaleFading(std::move(t));
}

inline constexpr std::size_t kTermCount = 6;

// One user in one trial. terms[0..5] are T0..T5 (downlink) or Q0..Q5
// (uplink); signal is y^{[kl]} or x_hat^{[kl]} computed directly.
struct TermRecord {
  Complex signal{};
  Complex symbol{};
  std::array<Complex, kTermCount> terms{};
};

enum class Link { kDownlink, kUplink };

struct TrialBatch {
  Link link = Link::kDownlink;
  std::size_t L = 0, K = 0, trials = 0;
  std::uint64_t seed = 0;
  std::vector<TermRecord> records;  // index trial * (K * L) + k * L + l

  std::size_t users() const { return K * L; }
  const TermRecord& at(std::size_t trial, std::size_t k, std::size_t l) const {
    return records[trial * users() + k * L + l];
  }
};

struct TrainedChannels {
  ChannelRealization truth;
  ChannelEstimates est;
};

inline TrainedChannels simulate_training(const LargeScaleFading& f, const OperatingPoint& op,
                                         std::uint64_t seed) {
  TrainedChannels t;
  t.truth = draw_realization(f, op.M, derive_seed(seed, {stream::kSmallScale}));
  const PilotObservations obs = simulate_pilot_phase(t.truth, f, op.rho_r, op.tau,
                                                     derive_seed(seed, {stream::kPilotNoise}));
  t.est = mmse_estimate(obs, f, op.rho_r, op.tau, t.truth);
  return t;
}

// One coherence block of the downlink with conjugate beams u = g_hat and
// absorbed coefficients phi. Returns K*L records.
inline std::vector<TermRecord> simulate_downlink_trial(const LargeScaleFading& f,
                                                       const CoefficientSet& phi,
                                                       const OperatingPoint& op, std::uint64_t seed) {
  detail::check_coefficients(f, phi);
  const std::size_t L = f.L(), K = f.K();
  const TrainedChannels ch = simulate_training(f, op, seed);
  const auto& e = ch.est;
  const auto& r = ch.truth;
  Rng data(derive_seed(seed, {stream::kData}));

  std::vector<Complex> s(K * L);
  for (auto& x : s) x = data.qpsk();
  // c(j, n) = sum_v phi_j^{[nv]} s^{[nv]}
  std::vector<Complex> c(L * K, Complex{});
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t n = 0; n < K; ++n)
      for (std::size_t v = 0; v < L; ++v)
        c[j * K + n] += phi[n](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(v)) * s[n * L + v];

  // transmit vectors, built literally
  const auto Mi = static_cast<Eigen::Index>(op.M);
  std::vector<ComplexVector> x(L, ComplexVector::Zero(Mi));
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t n = 0; n < K; ++n) x[j] += e.g_hat_vec(j, n, j).conjugate() * c[j * K + n];

  const double amp = std::sqrt(op.rho_f);
  const double Md = static_cast<double>(op.M);
  std::vector<TermRecord> out(K * L);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t l = 0; l < L; ++l) {
      TermRecord& rec = out[k * L + l];
      const Complex w = data.complex_normal();
      Complex y = w;
      for (std::size_t j = 0; j < L; ++j) y += amp * x[j].cwiseProduct(r.g_vec(j, k, l)).sum();
      rec.signal = y;
      rec.symbol = s[k * L + l];

      Complex t0{}, t1{}, t2{}, t3{}, t4{};
      for (std::size_t j = 0; j < L; ++j) {
        const auto gkl = e.g_hat_vec(j, k, l);
        const Complex own = e.g_hat_vec(j, k, j).dot(gkl);
        const double mean = Md * moments::estimate_cross_moment(f, op.rho_r, static_cast<double>(op.tau), j, k, l);
        const double p = phi[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
        t0 += p * mean;
        t1 += p * (own - mean);
        for (std::size_t v = 0; v < L; ++v)
          if (v != l)
            t2 += s[k * L + v] * phi[k](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(v)) * own;
        for (std::size_t n = 0; n < K; ++n) {
          const auto gn = e.g_hat_vec(j, n, j);
          if (n != k) t3 += gn.dot(gkl) * c[j * K + n];
          t4 += gn.dot(e.g_tilde_vec(j, k, l)) * c[j * K + n];
        }
      }
      rec.terms = {amp * rec.symbol * t0, amp * rec.symbol * t1, amp * t2, amp * t3, amp * t4, w};
    }
  return out;
}

// One block of the uplink: matched filter at every base station, then the
// controller combines with plain omega.
inline std::vector<TermRecord> simulate_uplink_trial(const LargeScaleFading& f,
                                                     const CoefficientSet& omega,
                                                     const OperatingPoint& op, std::uint64_t seed) {
  detail::check_coefficients(f, omega);
  const std::size_t L = f.L(), K = f.K();
  const TrainedChannels ch = simulate_training(f, op, seed);
  const auto& e = ch.est;
  const auto& r = ch.truth;
  Rng data(derive_seed(seed, {stream::kData}));

  std::vector<Complex> xs(K * L);
  for (auto& v : xs) v = data.qpsk();
  const auto Mi = static_cast<Eigen::Index>(op.M);
  const double amp = std::sqrt(op.rho_r);
  std::vector<ComplexVector> noise(L), y(L);
  for (std::size_t v = 0; v < L; ++v) {
    noise[v] = data.complex_normal_vector(Mi);
    y[v] = noise[v];
    for (std::size_t j = 0; j < L; ++j)
      for (std::size_t n = 0; n < K; ++n) y[v] += amp * r.g_vec(v, n, j) * xs[n * L + j];
  }

  const double Md = static_cast<double>(op.M);
  std::vector<TermRecord> out(K * L);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t l = 0; l < L; ++l) {
      TermRecord& rec = out[k * L + l];
      rec.symbol = xs[k * L + l];
      Complex xhat{}, q0{}, q1{}, q2{}, q3{}, q4{}, q5{};
      for (std::size_t v = 0; v < L; ++v) {
        const double w = omega[k](static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(v));
        const auto mf = e.g_hat_vec(v, k, v);
        xhat += w * mf.dot(y[v]);
        const Complex own = mf.dot(e.g_hat_vec(v, k, l));
        const double mean = Md * moments::estimate_cross_moment(f, op.rho_r, static_cast<double>(op.tau), v, k, l);
        q0 += w * mean;
        q1 += w * (own - mean);
        for (std::size_t j = 0; j < L; ++j) {
          if (j != l) q2 += w * mf.dot(e.g_hat_vec(v, k, j)) * xs[k * L + j];
          for (std::size_t n = 0; n < K; ++n) {
            if (n != k) q3 += w * mf.dot(e.g_hat_vec(v, n, j)) * xs[n * L + j];
            q4 += w * mf.dot(e.g_tilde_vec(v, n, j)) * xs[n * L + j];
          }
        }
        q5 += w * mf.dot(noise[v]);
      }
      rec.signal = xhat;
      rec.terms = {amp * rec.symbol * q0, amp * rec.symbol * q1, amp * q2, amp * q3, amp * q4, q5};
    }
  return out;
}

inline TrialBatch run_trials(Link link, const LargeScaleFading& f, const CoefficientSet& coeffs,
                             const OperatingPoint& op, std::size_t trials, std::uint64_t seed,
                             std::size_t threads = 1) {
  TrialBatch b;
  b.link = link;
  b.L = f.L();
  b.K = f.K();
  b.trials = trials;
  b.seed = seed;
  b.records.resize(trials * b.users());
  parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t ts = derive_seed(seed, {stream::kTrial, t});
    const auto recs = link == Link::kDownlink ? simulate_downlink_trial(f, coeffs, op, ts)
                                              : simulate_uplink_trial(f, coeffs, op, ts);
    std::copy(recs.begin(), recs.end(), b.records.begin() + static_cast<std::ptrdiff_t>(t * b.users()));
  });
  return b;
}

// Largest |signal - sum of terms| / |signal| over all trials and users.
inline double max_reconstruction_residual(const TrialBatch& b) {
  double worst = 0.0;
  for (const TermRecord& r : b.records) {
    Complex s{};
    for (const Complex& t : r.terms) s += t;
    const double scale = std::max(std::abs(r.signal), 1e-300);
    worst = std::max(worst, std::abs(r.signal - s) / scale);
  }
  return worst;
}

// ---- closed forms ---------------------------------------------------------

namespace detail {
inline double est_var(const LargeScaleFading& f, const OperatingPoint& op, std::size_t j,
                      std::size_t k, std::size_t l) {
  return moments::estimate_variance(f, op.rho_r, static_cast<double>(op.tau), j, k, l);
}
}  // namespace detail

// E|T_i|^2 for i = 0..5 with absorbed phi. Index 0 is |epsilon|^2.
inline std::array<double, kTermCount> downlink_term_variances(const LargeScaleFading& f,
                                                              const CoefficientSet& phi,
                                                              const OperatingPoint& op,
                                                              std::size_t k, std::size_t l) {
  const std::size_t L = f.L(), K = f.K();
  const double Md = static_cast<double>(op.M);
  const double rt = op.rho_r * static_cast<double>(op.tau);
  auto ph = [&](std::size_t n, std::size_t j, std::size_t v) {
    return phi[n](static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(v));
  };
  std::array<double, kTermCount> out{};
  double eps = 0.0, v1 = 0.0, v2 = 0.0, v3 = 0.0, v4 = 0.0;
  for (std::size_t j = 0; j < L; ++j) {
    const double akl = detail::est_var(f, op, j, k, l);
    const double akj = detail::est_var(f, op, j, k, j);
    eps += Md * rt * f(j, k, l) * f(j, k, j) / pilot_denominator(f, op.rho_r, static_cast<double>(op.tau), j, k) * ph(k, j, l);
    v1 += ph(k, j, l) * ph(k, j, l) * akl * akj;
    for (std::size_t v = 0; v < L; ++v)
      if (v != l) v2 += akl * akj * ph(k, j, v) * ph(k, j, v);
    for (std::size_t n = 0; n < K; ++n) {
      const double anj = detail::est_var(f, op, j, n, j);
      const double row = phi[n].row(static_cast<Eigen::Index>(j)).squaredNorm();
      if (n != k) v3 += akl * anj * row;
      v4 += (f(j, k, l) - akl) * anj * row;
    }
  }
  double directed = 0.0;
  for (std::size_t v = 0; v < L; ++v) {
    if (v == l) continue;
    double s = 0.0;
    for (std::size_t j = 0; j < L; ++j)
      s += Md * rt * f(j, k, j) * f(j, k, l) / pilot_denominator(f, op.rho_r, static_cast<double>(op.tau), j, k) * ph(k, j, v);
    directed += s * s;
  }
  out[0] = op.rho_f * eps * eps;
  out[1] = op.rho_f * Md * v1;
  out[2] = op.rho_f * (directed + Md * v2);
  out[3] = op.rho_f * Md * v3;
  out[4] = op.rho_f * Md * v4;
  out[5] = 1.0;
  return out;
}

// E|Q_i|^2 for i = 0..5 with plain omega.
inline std::array<double, kTermCount> uplink_term_variances(const LargeScaleFading& f,
                                                            const CoefficientSet& omega,
                                                            const OperatingPoint& op,
                                                            std::size_t k, std::size_t l) {
  const std::size_t L = f.L(), K = f.K();
  const double Md = static_cast<double>(op.M);
  const double rt = op.rho_r * static_cast<double>(op.tau);
  const double tau = static_cast<double>(op.tau);
  auto w = [&](std::size_t v) {
    return omega[k](static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(v));
  };
  double q0 = 0.0, v1 = 0.0, v2 = 0.0, v3 = 0.0, v4 = 0.0, v5 = 0.0;
  for (std::size_t v = 0; v < L; ++v) {
    const double w2 = w(v) * w(v);
    const double akv = detail::est_var(f, op, v, k, v);
    q0 += Md * rt * f(v, k, v) * f(v, k, l) / pilot_denominator(f, op.rho_r, tau, v, k) * w(v);
    v1 += w2 * akv * detail::est_var(f, op, v, k, l);
    v5 += w2 * akv;
    for (std::size_t j = 0; j < L; ++j) {
      if (j != l) v2 += w2 * akv * detail::est_var(f, op, v, k, j);
      for (std::size_t n = 0; n < K; ++n) {
        const double anj = detail::est_var(f, op, v, n, j);
        if (n != k) v3 += w2 * akv * anj;
        v4 += w2 * akv * (f(v, n, j) - anj);
      }
    }
  }
  double directed = 0.0;
  for (std::size_t j = 0; j < L; ++j) {
    if (j == l) continue;
    double s = 0.0;
    for (std::size_t v = 0; v < L; ++v)
      s += Md * rt * f(v, k, v) * f(v, k, j) / pilot_denominator(f, op.rho_r, tau, v, k) * w(v);
    directed += s * s;
  }
  std::array<double, kTermCount> out{};
  out[0] = op.rho_r * q0 * q0;
  out[1] = op.rho_r * Md * v1;
  out[2] = op.rho_r * (directed + Md * v2);
  out[3] = op.rho_r * Md * v3;
  out[4] = op.rho_r * Md * v4;
  out[5] = Md * v5;
  return out;
}

// Deterministic gain of the useful term: epsilon for the downlink, its
// uplink analogue otherwise.
inline double useful_gain(Link link, const LargeScaleFading& f, const CoefficientSet& coeffs,
                          const OperatingPoint& op, std::size_t k, std::size_t l) {
  const double tau = static_cast<double>(op.tau);
  const auto ll = static_cast<Eigen::Index>(l);
  double s = 0.0;
  for (std::size_t j = 0; j < f.L(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double c = coeffs[k](link == Link::kDownlink ? jj : ll, link == Link::kDownlink ? ll : jj);
    s += f(j, k, l) * f(j, k, j) / pilot_denominator(f, op.rho_r, tau, j, k) * c;
  }
  const double power = link == Link::kDownlink ? op.rho_f : op.rho_r;
  return std::sqrt(power) * static_cast<double>(op.M) * op.rho_r * tau * s;
}

// ---- empirical side -------------------------------------------------------

struct TermStatistics {
  std::array<VarianceEstimate, kTermCount> variance;
  std::array<std::array<CovarianceEstimate, kTermCount>, kTermCount> covariance;
  Complex coefficient{};  // mean of signal * conj(symbol)
  double coefficient_stderr = 0.0;
  VarianceEstimate residual;  // signal - T0
};

inline TermStatistics empirical_term_statistics(const TrialBatch& b, std::size_t k, std::size_t l) {
  const std::size_t n = b.trials;
  std::array<std::vector<Complex>, kTermCount> series;
  for (auto& s : series) s.resize(n);
  std::vector<Complex> coef(n), resid(n);
  for (std::size_t t = 0; t < n; ++t) {
    const TermRecord& r = b.at(t, k, l);
    for (std::size_t i = 0; i < kTermCount; ++i) series[i][t] = r.terms[i];
    coef[t] = r.signal * std::conj(r.symbol) / std::norm(r.symbol);
    resid[t] = r.signal - r.terms[0];
  }
  TermStatistics st;
  for (std::size_t i = 0; i < kTermCount; ++i) {
    st.variance[i] = sample_variance(std::span<const Complex>(series[i]));
    if (i == 0) {
      // T0 has a nonzero mean; its second moment is what the closed form gives
      CompensatedSum<double> m2;
      for (const Complex& z : series[0]) m2.add(std::norm(z));
      st.variance[0].variance = m2.value() / static_cast<double>(n);
    }
  }
  for (std::size_t i = 0; i < kTermCount; ++i)
    for (std::size_t j = 0; j < kTermCount; ++j)
      if (i != j) st.covariance[i][j] = sample_covariance(series[i], series[j]);
  st.coefficient = compensated_mean(std::span<const Complex>(coef));
  const VarianceEstimate cv = sample_variance(std::span<const Complex>(coef));
  st.coefficient_stderr = std::sqrt(cv.variance / static_cast<double>(n));
  st.residual = sample_variance(std::span<const Complex>(resid));
  return st;
}

// |epsilon|^2 over the empirical variance of everything but the useful term.
inline double empirical_sinr(const TrialBatch& b, std::size_t k, std::size_t l, double epsilon) {
  std::vector<Complex> resid(b.trials);
  for (std::size_t t = 0; t < b.trials; ++t) {
    const TermRecord& r = b.at(t, k, l);
    resid[t] = r.signal - epsilon * r.symbol;
  }
  const double v = sample_variance(std::span<const Complex>(resid)).variance;
  return epsilon * epsilon / v;
}

// ---- detection and probes -------------------------------------------------

inline Complex zf_lsfp_detect(Complex y, std::size_t M, double rho_f, double rho_r, double rho_A,
                              double tau) {
  return y / std::sqrt(static_cast<double>(M) * rho_f * rho_r * rho_A * tau);
}

inline Complex nearest_qpsk(Complex z) {
  constexpr double a = 0.70710678118654752440;
  return {z.real() >= 0.0 ? a : -a, z.imag() >= 0.0 ? a : -a};
}

struct SerPoint {
  std::size_t M = 0;
  std::size_t symbols = 0;
  std::size_t errors = 0;
  double ser() const { return symbols ? static_cast<double>(errors) / static_cast<double>(symbols) : 0.0; }
};

// QPSK symbol-error rate of the scaled ZF-LSFP detector. Uses the eta
// variant, for which the detector scaling equals the useful gain exactly.
inline std::vector<SerPoint> zf_ser_study(const LargeScaleFading& f, OperatingPoint op,
                                          const std::vector<std::size_t>& M_grid,
                                          std::size_t min_symbols, std::uint64_t seed,
                                          std::size_t threads = 1) {
  const double tau = static_cast<double>(op.tau);
  const LsfMatrices zf = zf_lsfp(f, op.rho_r, tau, ZfVariant::kEta);
  const std::size_t users = f.K() * f.L();
  const std::size_t trials = (min_symbols + users - 1) / users;
  std::vector<SerPoint> out;
  for (std::size_t gi = 0; gi < M_grid.size(); ++gi) {
    op.M = M_grid[gi];
    const CoefficientSet phi = absorbed_phi(zf, f, op.rho_r, tau, op.M);
    std::vector<std::size_t> errs(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
      const auto recs = simulate_downlink_trial(f, phi, op, derive_seed(seed, {stream::kTrial, gi, t}));
      for (const TermRecord& r : recs) {
        const Complex s = zf_lsfp_detect(r.signal, op.M, op.rho_f, op.rho_r, zf.rho_A, tau);
        if (nearest_qpsk(s) != r.symbol) ++errs[t];
      }
    });
    SerPoint p;
    p.M = op.M;
    p.symbols = trials * users;
    for (std::size_t e : errs) p.errors += e;
    out.push_back(p);
  }
  return out;
}

struct InnerProductRow {
  std::size_t M = 0;
  MeanEstimate self;        // x^H x / M
  Complex cross_mean{};     // x^H y / M
  double cross_stderr = 0.0;
  double cross_stddev = 0.0;
};

inline std::vector<InnerProductRow> inner_product_probe(double nu, const std::vector<std::size_t>& M_grid,
                                           std::size_t trials, std::uint64_t seed) {
  std::vector<InnerProductRow> out;
  const double sd = std::sqrt(nu);
  for (std::size_t gi = 0; gi < M_grid.size(); ++gi) {
    const std::size_t M = M_grid[gi];
    std::vector<double> self(trials);
    std::vector<Complex> cross(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, {stream::kTrial, gi, t}));
      const ComplexVector x = sd * rng.complex_normal_vector(static_cast<Eigen::Index>(M));
      const ComplexVector y = sd * rng.complex_normal_vector(static_cast<Eigen::Index>(M));
      self[t] = x.squaredNorm() / static_cast<double>(M);
      cross[t] = x.dot(y) / static_cast<double>(M);
    }
    InnerProductRow row;
    row.M = M;
    if (nu > 0.0) {
      row.self = sample_mean(self);
      row.cross_mean = compensated_mean(std::span<const Complex>(cross));
      const VarianceEstimate cv = sample_variance(std::span<const Complex>(cross));
      row.cross_stddev = std::sqrt(cv.variance);
      row.cross_stderr = row.cross_stddev / std::sqrt(static_cast<double>(trials));
    }
    out.push_back(row);
  }
  return out;
}

// ---- validation report ----------------------------------------------------

struct OracleRow {
  std::string term;
  double closed_form = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double z_score = 0.0;
  bool pass = true;
};

inline void write_oracle_csv(std::ostream& os, const std::vector<OracleRow>& rows) {
  os << "term,closed_form,empirical,stderr,z_score\n" << std::setprecision(17);
  for (const OracleRow& r : rows)
    os << r.term << ',' << r.closed_form << ',' << r.empirical << ',' << r.stderr_ << ','
       << r.z_score << '\n';
}

inline constexpr double kZLimit = 4.0;

// Variance rows for every user and term 1..5, plus pairwise covariances.
inline std::vector<OracleRow> variance_rows(const TrialBatch& b, const LargeScaleFading& f,
                                            const CoefficientSet& coeffs, const OperatingPoint& op,
                                            const std::string& prefix) {
  std::vector<OracleRow> rows;
  const char sym = b.link == Link::kDownlink ? 'T' : 'Q';
  for (std::size_t k = 0; k < b.K; ++k)
    for (std::size_t l = 0; l < b.L; ++l) {
      const auto closed = b.link == Link::kDownlink ? downlink_term_variances(f, coeffs, op, k, l)
                                                    : uplink_term_variances(f, coeffs, op, k, l);
      const TermStatistics st = empirical_term_statistics(b, k, l);
      const std::string user = "[k=" + std::to_string(k) + " l=" + std::to_string(l) + "]";
      for (std::size_t i = 1; i < kTermCount; ++i) {
        OracleRow r;
        r.term = prefix + ".var." + sym + std::to_string(i) + user;
        r.closed_form = closed[i];
        r.empirical = st.variance[i].variance;
        r.stderr_ = st.variance[i].stderr_;
        r.z_score = r.stderr_ > 0.0 ? (r.empirical - r.closed_form) / r.stderr_
                                    : (r.empirical == r.closed_form ? 0.0 : kInfiniteSinr);
        r.pass = std::abs(r.z_score) <= kZLimit;
        rows.push_back(r);
      }
      for (std::size_t i = 0; i < kTermCount; ++i)
        for (std::size_t j = i + 1; j < kTermCount; ++j) {
          const CovarianceEstimate& c = st.covariance[i][j];
          OracleRow r;
          r.term = prefix + ".cov." + sym + std::to_string(i) + sym + std::to_string(j) + user;
          r.closed_form = 0.0;
          r.empirical = std::abs(c.covariance);
          r.stderr_ = c.stderr_;
          r.z_score = c.stderr_ > 0.0 ? r.empirical / c.stderr_ : 0.0;
          r.pass = r.z_score <= kZLimit;
          rows.push_back(r);
        }
    }
  return rows;
}

}  // namespace lsfp
