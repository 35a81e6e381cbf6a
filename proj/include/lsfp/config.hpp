#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lsfp/common.hpp"
#include "lsfp/network.hpp"
#include "lsfp/oracle.hpp"
#include "lsfp/precoding.hpp"

namespace lsfp {

// Everything a CLI run needs. Loaded from an INI file with sections
// [network], [powers] and [experiment]; absent keys keep these defaults.
struct ExperimentConfig {
  NetworkConfig network;
  // "generated" draws from the hex model, "reference" uses the oracle
  // fixture, anything else is a path to a j,k,l,beta CSV
  std::string fading = "generated";

  std::vector<std::size_t> M_grid{100, 1000, 10000, 100000};
  std::size_t draws = 10000;
  std::size_t trials = 20000;
  ZfVariant zf_variant = ZfVariant::kMu;
  std::size_t threads = 0;

  // single-tone training study
  std::vector<std::size_t> beta_M_grid{1000, 10000, 100000};
  std::size_t beta_trials = 200;
  std::size_t mu = 8;
  double beta = 1.0;
  double interferer_beta = 1.0;

  OperatingPoint operating_point() const {
    OperatingPoint op;
    op.M = network.M;
    op.tau = network.tau;
    op.rho_f = network.rho_f;
    op.rho_r = network.rho_r;
    return op;
  }
};

inline std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string tok = item.substr(b, e - b + 1);
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);  // accepts 1e5
    } catch (const std::exception&) {
      throw ConfigError("not a number: '" + tok + "'");
    }
    if (pos != tok.size() || !(v >= 1.0) || v != std::floor(v))
      throw ConfigError("expected a positive integer, got '" + tok + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

inline ZfVariant parse_zf_variant(const std::string& s) {
  if (s == "mu") return ZfVariant::kMu;
  if (s == "eta") return ZfVariant::kEta;
  throw ConfigError("zf_variant must be 'mu' or 'eta', got '" + s + "'");
}

inline ExperimentConfig parse_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  // tree.get(path, default) silently falls back on unparsable values
  const auto get = [&tree](const char* path, auto fallback) {
    using T = decltype(fallback);
    if (!tree.get_child_optional(path)) return fallback;
    if constexpr (std::is_unsigned_v<T>)
      if (tree.get<std::string>(path).find('-') != std::string::npos)
        throw ConfigError(std::string(path) + " must be nonnegative");
    return tree.get<T>(path);
  };
  try {
    auto& n = c.network;
    n.L = get("network.L", n.L);
    n.K = get("network.K", n.K);
    n.tau = get("network.tau", n.tau);
    n.cell_radius = get("network.cell_radius", n.cell_radius);
    n.pathloss_exponent = get("network.pathloss_exponent", n.pathloss_exponent);
    n.shadow_sigma_db = get("network.shadow_sigma_db", n.shadow_sigma_db);
    c.fading = get("network.fading", c.fading);
    n.rho_f = get("powers.rho_f", n.rho_f);
    n.rho_r = get("powers.rho_r", n.rho_r);
    n.seed = get("experiment.seed", n.seed);
    if (auto m = tree.get_optional<std::string>("experiment.M")) c.M_grid = parse_size_list(*m);
    n.M = c.M_grid.front();
    c.draws = get("experiment.draws", c.draws);
    c.trials = get("experiment.trials", c.trials);
    c.threads = get("experiment.threads", c.threads);
    if (auto v = tree.get_optional<std::string>("experiment.zf_variant")) c.zf_variant = parse_zf_variant(*v);
    if (auto m = tree.get_optional<std::string>("experiment.beta_M")) c.beta_M_grid = parse_size_list(*m);
    c.beta_trials = get("experiment.beta_trials", c.beta_trials);
    c.mu = get("experiment.mu", c.mu);
    c.beta = get("experiment.beta", c.beta);
    c.interferer_beta = get("experiment.interferer_beta", c.interferer_beta);
  } catch (const pt::ptree_bad_data& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  if (c.fading != "reference") c.network.validate();
  if (c.draws < 1 || c.trials < 2 || c.beta_trials < 2) throw ConfigError("draws >= 1 and trials >= 2 required");
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  ExperimentConfig c = parse_config(in);
  // relative fading CSV paths resolve against the config file
  if (c.fading != "generated" && c.fading != "reference" && std::filesystem::path(c.fading).is_relative())
    c.fading = (path.parent_path() / c.fading).string();
  return c;
}

inline LargeScaleFading resolve_fading(const ExperimentConfig& c) {
  if (c.fading == "generated") return generate_network(c.network);
  if (c.fading == "reference") return reference_fading();
  std::ifstream in(c.fading);
  if (!in) throw ConfigError("cannot open fading CSV '" + c.fading + "'");
  return read_fading_csv(in);
}

}  // namespace lsfp
