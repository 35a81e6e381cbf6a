#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <span>
#include <vector>

#include "lsfp/common.hpp"
#include "lsfp/parallel.hpp"
#include "lsfp/rng.hpp"
#include "lsfp/stats.hpp"

namespace lsfp {

struct BetaEstimate {
  double beta_hat = 0.0;  // max(raw, 0)
  double raw = 0.0;
  std::size_t M_used = 0;
  std::size_t mu = 0;
  double rho_r = 0.0;
  std::size_t trials = 1;
};

// Single-tone training: each of the mu users sends one column of I_mu
// scaled by sqrt(rho_r mu). gains[i] is the gain of the user on tone i.
// gains[target] may be zero; the others must be nonnegative.
inline BetaEstimate estimate_beta(const std::vector<double>& gains, std::size_t target,
                                  std::size_t M, double rho_r, std::size_t mu, std::uint64_t seed,
                                  bool with_noise = true) {
  if (mu < 1) throw ConfigError("mu must be at least 1");
  if (gains.size() != mu) throw ConfigError("need exactly mu gains");
  if (target >= mu) throw ConfigError("target index out of range");
  if (M < 1) throw ConfigError("M must be at least 1");
  if (!(rho_r > 0.0)) throw ConfigError("rho_r must be positive");
  for (double g : gains)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("gains must be nonnegative and finite");

  const auto Mi = static_cast<Eigen::Index>(M);
  const auto mi = static_cast<Eigen::Index>(mu);
  const double amp = rho_r * static_cast<double>(mu);
  Rng rng(seed);
  ComplexMatrix Y(Mi, mi);
  if (with_noise) {
    for (Eigen::Index c = 0; c < mi; ++c)
      for (Eigen::Index m = 0; m < Mi; ++m) Y(m, c) = rng.complex_normal();
  } else {
    Y.setZero();
  }
  for (std::size_t i = 0; i < mu; ++i) {
    const ComplexVector h = rng.complex_normal_vector(Mi);
    // v^{[i]} is the i-th unit vector, so only column i receives this user
    Y.col(static_cast<Eigen::Index>(i)) += std::sqrt(amp * gains[i]) * h;
  }
  const ComplexVector y = Y.col(static_cast<Eigen::Index>(target));
  const double noise_var = with_noise ? 1.0 : 0.0;

  BetaEstimate out;
  out.raw = y.squaredNorm() / (static_cast<double>(M) * amp) - noise_var / amp;
  out.beta_hat = std::max(out.raw, 0.0);
  out.M_used = M;
  out.mu = mu;
  out.rho_r = rho_r;
  return out;
}

struct BetaStudyRow {
  std::size_t M = 0;
  std::size_t trials = 0;
  double beta = 0.0;
  MeanEstimate raw;  // mean, stderr and spread of the unclamped estimate
};

inline std::vector<BetaStudyRow> beta_convergence_study(const std::vector<double>& gains,
                                                        std::size_t target,
                                                        const std::vector<std::size_t>& M_grid,
                                                        double rho_r, std::size_t trials,
                                                        std::uint64_t seed, std::size_t threads = 1) {
  std::vector<BetaStudyRow> out;
  for (std::size_t gi = 0; gi < M_grid.size(); ++gi) {
    std::vector<double> raw(trials);
    parallel_for(trials, threads, [&](std::size_t t) {
      raw[t] = estimate_beta(gains, target, M_grid[gi], rho_r, gains.size(),
                             derive_seed(seed, {stream::kBetaTraining, gi, t}))
                   .raw;
    });
    BetaStudyRow row;
    row.M = M_grid[gi];
    row.trials = trials;
    row.beta = gains[target];
    row.raw = sample_mean(raw);
    out.push_back(row);
  }
  return out;
}

inline void write_beta_study_csv(std::ostream& os, const std::vector<BetaStudyRow>& rows) {
  os << "M,trials,beta,mean_raw,stderr,stddev\n" << std::setprecision(17);
  for (const auto& r : rows)
    os << r.M << ',' << r.trials << ',' << r.beta << ',' << r.raw.mean << ',' << r.raw.stderr_
       << ',' << r.raw.stddev << '\n';
}

// Cells that can share N training tones when each cell needs K tones and
// every tone is reused by mu cells.
inline std::size_t supportable_cells(std::size_t tones, std::size_t mu, std::size_t K) {
  if (K == 0) throw ConfigError("K must be positive");
  return tones * mu / K;
}

}  // namespace lsfp
