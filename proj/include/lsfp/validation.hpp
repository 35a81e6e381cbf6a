#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lsfp/oracle.hpp"
#include "lsfp/precoding.hpp"
#include "lsfp/sinr.hpp"

namespace lsfp {

inline constexpr double kReconstructionTolerance = 1e-10;
inline constexpr double kSinrRelativeTolerance = 0.05;
inline constexpr double kGainRelativeTolerance = 0.02;
inline constexpr double kNoiseVarianceTolerance = 0.03;

struct OracleSuite {
  std::vector<OracleRow> rows;
  bool passed() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.pass ? 0 : 1;
    return n;
  }
};

inline OracleRow relative_row(std::string term, double closed, double empirical, double se, double tol) {
  OracleRow r;
  r.term = std::move(term);
  r.closed_form = closed;
  r.empirical = empirical;
  r.stderr_ = se;
  r.z_score = se > 0.0 ? (empirical - closed) / se : 0.0;
  r.pass = std::abs(empirical - closed) <= tol * std::abs(closed);
  return r;
}

// Runs one scheme and link through the protocol simulator and appends the
// variance, covariance, reconstruction, gain and SINR rows.
inline void append_link_checks(OracleSuite& suite, Link link, const std::string& prefix,
                               const LargeScaleFading& f, const CoefficientSet& coeffs,
                               const OperatingPoint& op, std::size_t trials, std::uint64_t seed,
                               std::size_t threads) {
  const TrialBatch b = run_trials(link, f, coeffs, op, trials, seed, threads);
  auto rows = variance_rows(b, f, coeffs, op, prefix);
  suite.rows.insert(suite.rows.end(), rows.begin(), rows.end());

  OracleRow rec;
  rec.term = prefix + ".reconstruction";
  rec.empirical = max_reconstruction_residual(b);
  rec.pass = rec.empirical < kReconstructionTolerance;
  suite.rows.push_back(rec);

  for (std::size_t k = 0; k < f.K(); ++k)
    for (std::size_t l = 0; l < f.L(); ++l) {
      const std::string user = "[k=" + std::to_string(k) + " l=" + std::to_string(l) + "]";
      const TermStatistics st = empirical_term_statistics(b, k, l);
      const double eps = useful_gain(link, f, coeffs, op, k, l);
      suite.rows.push_back(relative_row(prefix + ".gain" + user, eps, st.coefficient.real(),
                                        st.coefficient_stderr, kGainRelativeTolerance));
      const double closed = link == Link::kDownlink
                                ? finite_m_downlink_sinr(f, coeffs, op.rho_f, op.rho_r,
                                                         static_cast<double>(op.tau), op.M, k, l)
                                : finite_m_uplink_sinr(f, coeffs, op.rho_r,
                                                       static_cast<double>(op.tau), op.M, k, l);
      const double emp = empirical_sinr(b, k, l, eps);
      // delta-method error of |eps|^2 / v from the residual variance
      const double se = emp * st.residual.stderr_ / st.residual.variance;
      suite.rows.push_back(relative_row(prefix + ".sinr" + user, closed, emp, se, kSinrRelativeTolerance));
      if (link == Link::kDownlink) {
        OracleRow n = relative_row(prefix + ".noise" + user, 1.0, st.variance[5].variance,
                                   st.variance[5].stderr_, kNoiseVarianceTolerance);
        suite.rows.push_back(n);
      }
    }
}

// Both links under no large-scale precoding and under zero forcing.
inline OracleSuite run_oracle_suite(const LargeScaleFading& f, const OperatingPoint& op,
                                    std::size_t trials, std::uint64_t seed, std::size_t threads = 1,
                                    ZfVariant variant = ZfVariant::kMu) {
  const double tau = static_cast<double>(op.tau);
  OracleSuite suite;
  const LsfMatrices none = no_lsfp(f, op.rho_r, tau, op.M);
  append_link_checks(suite, Link::kDownlink, "dl.none", f, none.phi, op, trials,
                     derive_seed(seed, {1}), threads);
  append_link_checks(suite, Link::kUplink, "ul.none", f, none.omega, op, trials,
                     derive_seed(seed, {2}), threads);
  const LsfMatrices zf = zf_scheme(f, op.rho_r, tau, variant);
  append_link_checks(suite, Link::kDownlink, "dl.zf", f, absorbed_phi(zf, f, op.rho_r, tau, op.M), op,
                     trials, derive_seed(seed, {3}), threads);
  append_link_checks(suite, Link::kUplink, "ul.zf", f, plain_omega(zf, f, op.rho_r, tau, op.M), op,
                     trials, derive_seed(seed, {4}), threads);
  return suite;
}

}  // namespace lsfp
