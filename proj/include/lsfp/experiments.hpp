#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lsfp/config.hpp"
#include "lsfp/network.hpp"
#include "lsfp/parallel.hpp"
#include "lsfp/precoding.hpp"
#include "lsfp/sinr.hpp"
#include "lsfp/stats.hpp"

namespace lsfp {

enum class Scheme { kNoLsfp, kZfLsfp };

inline std::string scheme_name(Scheme s) { return s == Scheme::kNoLsfp ? "none" : "zf"; }

inline Scheme parse_scheme(const std::string& s) {
  if (s == "none" || s == "no-lsfp") return Scheme::kNoLsfp;
  if (s == "zf" || s == "zf-lsfp") return Scheme::kZfLsfp;
  throw ConfigError("scheme must be 'none' or 'zf', got '" + s + "'");
}

class ExperimentAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxSkippedFraction = 0.10;

struct CdfPoint {
  std::size_t M = 0;
  std::vector<double> rates;     // kept draws in order, then k, then l
  std::vector<double> min_rate;  // one per kept draw
  double outage5 = 0.0;          // 5th percentile of rates
  double min_rate_outage5 = 0.0;
  double mean_rate = 0.0;
};

struct CdfResult {
  Scheme scheme = Scheme::kNoLsfp;
  std::size_t L = 0, K = 0;
  std::size_t draws = 0;
  std::size_t skipped = 0;
  std::vector<std::size_t> kept_draws;
  std::vector<CdfPoint> points;  // one per M, grid order
};

inline NetworkConfig draw_config(const NetworkConfig& base, std::size_t draw) {
  NetworkConfig c = base;
  c.seed = derive_seed(base.seed, {stream::kNetworkDraw, draw});
  return c;
}

// Downlink rates over many large-scale draws. Each draw is evaluated with
// the closed-form finite-M SINR for every user and every M.
inline CdfResult run_cdf_experiment(const NetworkConfig& cfg, Scheme scheme,
                                    const std::vector<std::size_t>& M_grid, std::size_t draws,
                                    std::size_t threads = 0, ZfVariant variant = ZfVariant::kMu) {
  cfg.validate();
  if (M_grid.empty()) throw ConfigError("M grid is empty");
  const std::size_t users = cfg.L * cfg.K;
  const double tau = static_cast<double>(cfg.tau);
  std::vector<std::vector<double>> per_draw(draws);
  std::vector<char> skipped(draws, 0);

  parallel_for(draws, threads, [&](std::size_t d) {
    const LargeScaleFading f = generate_network(draw_config(cfg, d));
    std::optional<LsfMatrices> zf;
    if (scheme == Scheme::kZfLsfp) {
      try {
        zf = zf_lsfp(f, cfg.rho_r, tau, variant);
      } catch (const SingularMatrix&) {
        skipped[d] = 1;
        return;
      }
    }
    auto& out = per_draw[d];
    out.resize(M_grid.size() * users);
    for (std::size_t gi = 0; gi < M_grid.size(); ++gi) {
      const std::size_t M = M_grid[gi];
      const CoefficientSet phi = scheme == Scheme::kZfLsfp
                                     ? absorbed_phi(*zf, f, cfg.rho_r, tau, M)
                                     : no_lsfp(f, cfg.rho_r, tau, M).phi;
      const Tensor2 s = finite_m_downlink_sinr_all(f, phi, cfg.rho_f, cfg.rho_r, tau, M);
      for (std::size_t k = 0; k < cfg.K; ++k)
        for (std::size_t l = 0; l < cfg.L; ++l)
          out[gi * users + k * cfg.L + l] = rate_from_sinr(s(k, l));
    }
  });

  CdfResult r;
  r.scheme = scheme;
  r.L = cfg.L;
  r.K = cfg.K;
  r.draws = draws;
  for (std::size_t d = 0; d < draws; ++d) {
    if (skipped[d])
      ++r.skipped;
    else
      r.kept_draws.push_back(d);
  }
  if (static_cast<double>(r.skipped) > kMaxSkippedFraction * static_cast<double>(draws))
    throw ExperimentAborted(std::to_string(r.skipped) + " of " + std::to_string(draws) +
                            " draws had a singular large-scale matrix");
  if (r.kept_draws.empty()) throw ExperimentAborted("no usable draws");

  for (std::size_t gi = 0; gi < M_grid.size(); ++gi) {
    CdfPoint p;
    p.M = M_grid[gi];
    p.rates.reserve(r.kept_draws.size() * users);
    for (std::size_t d : r.kept_draws) {
      const auto first = per_draw[d].begin() + static_cast<std::ptrdiff_t>(gi * users);
      p.rates.insert(p.rates.end(), first, first + static_cast<std::ptrdiff_t>(users));
      p.min_rate.push_back(*std::min_element(first, first + static_cast<std::ptrdiff_t>(users)));
    }
    p.outage5 = EmpiricalCdf(p.rates).percentile(5.0);
    p.min_rate_outage5 = EmpiricalCdf(p.min_rate).percentile(5.0);
    CompensatedSum<double> s;
    for (double x : p.rates) s.add(x);
    p.mean_rate = s.value() / static_cast<double>(p.rates.size());
    r.points.push_back(std::move(p));
  }
  return r;
}

inline std::string cdf_file_name(Scheme s, std::size_t M) {
  return "cdf_" + scheme_name(s) + "_M" + std::to_string(M) + ".csv";
}

inline std::string minrate_file_name(Scheme s, std::size_t M) {
  return "minrate_" + scheme_name(s) + "_M" + std::to_string(M) + ".csv";
}

// Writes the per-M rate and min-rate CSVs; returns the paths written.
inline std::vector<std::filesystem::path> write_cdf_outputs(const std::filesystem::path& dir,
                                                            const CdfResult& r) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  const std::size_t users = r.L * r.K;
  for (const CdfPoint& p : r.points) {
    const auto path = dir / cdf_file_name(r.scheme, p.M);
    std::ofstream os(path);
    os << "draw,k,l,rate\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.kept_draws.size(); ++i)
      for (std::size_t k = 0; k < r.K; ++k)
        for (std::size_t l = 0; l < r.L; ++l)
          os << r.kept_draws[i] << ',' << k << ',' << l << ',' << p.rates[i * users + k * r.L + l] << '\n';
    written.push_back(path);

    const auto mpath = dir / minrate_file_name(r.scheme, p.M);
    std::ofstream ms(mpath);
    ms << "draw,min_rate\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.kept_draws.size(); ++i) ms << r.kept_draws[i] << ',' << p.min_rate[i] << '\n';
    written.push_back(mpath);
  }
  return written;
}

inline void write_cdf_summary(std::ostream& os, const std::vector<CdfResult>& results) {
  os << "scheme,M,draws,skipped,outage5,min_rate_outage5,mean_rate\n" << std::setprecision(17);
  for (const CdfResult& r : results)
    for (const CdfPoint& p : r.points)
      os << scheme_name(r.scheme) << ',' << p.M << ',' << r.draws << ',' << r.skipped << ','
         << p.outage5 << ',' << p.min_rate_outage5 << ',' << p.mean_rate << '\n';
}

}  // namespace lsfp
