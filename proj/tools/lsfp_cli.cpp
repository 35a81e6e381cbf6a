// Command-line front end: oracle validation, rate CDFs, SINR reports and the
// large-scale coefficient estimation study.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsfp/lsfp.hpp"

namespace fs = std::filesystem;
using namespace lsfp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::size_t threads = 0;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "INI configuration file")->required();
  app->add_option("--seed", o.seed, "override the configured seed");
  app->add_option("--out", o.out, "output directory");
  app->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

ExperimentConfig load(const CommonOptions& o) {
  ExperimentConfig c = load_config(o.config);
  if (o.seed) c.network.seed = *o.seed;
  if (o.threads) c.threads = o.threads;
  fs::create_directories(o.out);
  return c;
}

std::vector<Scheme> schemes_from(const std::string& s) {
  if (s == "both") return {Scheme::kNoLsfp, Scheme::kZfLsfp};
  return {parse_scheme(s)};
}

int cmd_validate(const CommonOptions& o) {
  const ExperimentConfig c = load(o);
  const LargeScaleFading f = resolve_fading(c);
  const OperatingPoint op = c.operating_point();
  const OracleSuite suite = run_oracle_suite(f, op, c.trials, c.network.seed, c.threads, c.zf_variant);
  {
    std::ofstream os(fs::path(o.out) / "oracle.csv");
    write_oracle_csv(os, suite.rows);
  }
  std::printf("%-34s %14s %14s %9s  %s\n", "term", "closed_form", "empirical", "z", "");
  for (const auto& r : suite.rows)
    std::printf("%-34s %14.6g %14.6g %9.3f  %s\n", r.term.c_str(), r.closed_form, r.empirical,
                r.z_score, r.pass ? "ok" : "FAIL");
  std::printf("%zu checks, %zu failed (L=%zu K=%zu M=%zu tau=%zu, %zu trials)\n", suite.rows.size(),
              suite.failures(), f.L(), f.K(), op.M, op.tau, c.trials);
  if (!suite.passed()) {
    for (const auto& r : suite.rows)
      if (!r.pass) std::cerr << "FAIL " << r.term << " z=" << r.z_score << '\n';
    return kExitFailed;
  }
  return kExitOk;
}

int cmd_cdf(const CommonOptions& o, const std::string& scheme, const std::string& M_list,
            std::optional<std::size_t> draws, const std::string& variant) {
  ExperimentConfig c = load(o);
  if (!M_list.empty()) c.M_grid = parse_size_list(M_list);
  if (draws) c.draws = *draws;
  if (!variant.empty()) c.zf_variant = parse_zf_variant(variant);
  std::vector<CdfResult> results;
  for (Scheme s : schemes_from(scheme)) {
    results.push_back(run_cdf_experiment(c.network, s, c.M_grid, c.draws, c.threads, c.zf_variant));
    write_cdf_outputs(o.out, results.back());
  }
  {
    std::ofstream os(fs::path(o.out) / "summary.csv");
    write_cdf_summary(os, results);
  }
  std::printf("%-6s %10s %8s %12s %16s\n", "scheme", "M", "skipped", "outage5", "min_outage5");
  for (const auto& r : results)
    for (const auto& p : r.points)
      std::printf("%-6s %10zu %8zu %12.6f %16.6f\n", scheme_name(r.scheme).c_str(), p.M, r.skipped,
                  p.outage5, p.min_rate_outage5);
  return kExitOk;
}

int cmd_sinr(const CommonOptions& o, const std::string& scheme, std::optional<std::size_t> M) {
  ExperimentConfig c = load(o);
  if (M) c.network.M = *M;
  const LargeScaleFading f = resolve_fading(c);
  const double tau = static_cast<double>(c.network.tau);
  const Scheme s = parse_scheme(scheme);
  const LsfMatrices m = s == Scheme::kZfLsfp ? zf_scheme(f, c.network.rho_r, tau, c.zf_variant)
                                             : no_lsfp(f, c.network.rho_r, tau, c.network.M);
  const SinrReport rep = compute_sinr_report(f, m, c.network.rho_f, c.network.rho_r, tau, c.network.M);
  {
    std::ofstream os(fs::path(o.out) / "sinr_report.csv");
    write_sinr_report_csv(os, rep);
    std::ofstream fo(fs::path(o.out) / "fading.csv");
    write_fading_csv(fo, f);
  }
  std::printf("%3s %3s %12s %12s %10s %10s\n", "k", "l", "sinr_dl_db", "sinr_ul_db", "rate_dl", "rate_ul");
  for (std::size_t k = 0; k < rep.K; ++k)
    for (std::size_t l = 0; l < rep.L; ++l)
      std::printf("%3zu %3zu %12.4f %12.4f %10.4f %10.4f\n", k, l, to_db(rep.sinr_dl(k, l)),
                  to_db(rep.sinr_ul(k, l)), rep.rate_dl(k, l), rep.rate_ul(k, l));
  return kExitOk;
}

int cmd_estimate_beta(const CommonOptions& o) {
  const ExperimentConfig c = load(o);
  std::vector<double> gains(c.mu, c.interferer_beta);
  gains[0] = c.beta;
  const auto rows = beta_convergence_study(gains, 0, c.beta_M_grid, c.network.rho_r, c.beta_trials,
                                           c.network.seed, c.threads);
  {
    std::ofstream os(fs::path(o.out) / "beta_estimation.csv");
    write_beta_study_csv(os, rows);
  }
  bool ok = true;
  std::vector<double> ms, sds;
  std::printf("%10s %14s %12s %12s %8s\n", "M", "mean_raw", "stderr", "stddev", "z");
  for (const auto& r : rows) {
    const double z = (r.raw.mean - r.beta) / r.raw.stderr_;
    ok = ok && std::abs(z) <= kZLimit;
    ms.push_back(static_cast<double>(r.M));
    sds.push_back(r.raw.stddev);
    std::printf("%10zu %14.8f %12.3e %12.3e %8.3f\n", r.M, r.raw.mean, r.raw.stderr_, r.raw.stddev, z);
  }
  if (rows.size() >= 2) {
    const double slope = loglog_slope(ms, sds);
    std::printf("log-log slope of stddev vs M: %.4f\n", slope);
    ok = ok && std::abs(slope + 0.5) <= 0.1;
  }
  if (!ok) std::cerr << "FAIL beta estimation study\n";
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-scale fading precoding simulator"};
  app.require_subcommand(1);

  CommonOptions validate_opts, cdf_opts, sinr_opts, beta_opts;
  auto* validate = app.add_subcommand("validate", "run the Monte-Carlo oracle against the closed forms");
  add_common(validate, validate_opts);

  auto* cdf = app.add_subcommand("cdf", "rate CDFs over random network draws");
  add_common(cdf, cdf_opts);
  std::string cdf_scheme = "both", cdf_M, cdf_variant;
  std::optional<std::size_t> cdf_draws;
  cdf->add_option("--scheme", cdf_scheme, "none, zf or both");
  cdf->add_option("--M", cdf_M, "comma-separated antenna counts");
  cdf->add_option("--draws", cdf_draws, "network draws per M");
  cdf->add_option("--zf-variant", cdf_variant, "mu or eta");

  auto* sinr = app.add_subcommand("sinr", "closed-form SINR report for one network");
  add_common(sinr, sinr_opts);
  std::string sinr_scheme = "zf";
  std::optional<std::size_t> sinr_M;
  sinr->add_option("--scheme", sinr_scheme, "none or zf");
  sinr->add_option("--M", sinr_M, "antenna count");

  auto* beta = app.add_subcommand("estimate-beta", "large-scale coefficient estimation study");
  add_common(beta, beta_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_opts);
    if (*cdf) return cmd_cdf(cdf_opts, cdf_scheme, cdf_M, cdf_draws, cdf_variant);
    if (*sinr) return cmd_sinr(sinr_opts, sinr_scheme, sinr_M);
    if (*beta) return cmd_estimate_beta(beta_opts);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
