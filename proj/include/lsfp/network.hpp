#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lsfp/common.hpp"
#include "lsfp/rng.hpp"

namespace lsfp {

struct NetworkConfig {
  std::size_t L = 7;  // cells
  std::size_t K = 10; // users per cell
  std::size_t M = 100;
  std::size_t tau = 10;  // pilot length, K <= tau
  double rho_f = 1.0;    // forward-link power (linear)
  double rho_r = 1.0;    // reverse-link power (linear)
  double cell_radius = 1000.0;
  double pathloss_exponent = 3.8;
  double shadow_sigma_db = 8.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (L < 1 || K < 1 || M < 1) throw ConfigError("L, K and M must be at least 1");
    if (tau < K) throw ConfigError("pilot length tau must satisfy K <= tau");
    if (!(rho_f >= 0.0) || !(rho_r >= 0.0)) throw ConfigError("transmit powers must be nonnegative");
    if (!(cell_radius > 0.0)) throw ConfigError("cell_radius must be positive");
    if (!std::isfinite(pathloss_exponent)) throw ConfigError("pathloss_exponent must be finite");
    if (!(shadow_sigma_db >= 0.0)) throw ConfigError("shadow_sigma_db must be nonnegative");
  }
};

// beta(j, k, l): power gain between base station j and user k of cell l.
class LargeScaleFading {
 public:
  LargeScaleFading() = default;
  explicit LargeScaleFading(Tensor3 beta) : beta_(std::move(beta)) {
    if (beta_.dim0() != beta_.dim2() || beta_.dim0() == 0 || beta_.dim1() == 0)
      throw DimensionError("large-scale fading tensor must have shape (L, K, L) with L, K >= 1");
    for (double b : beta_.data())
      if (!(b > 0.0) || !std::isfinite(b))
        throw ConfigError("large-scale fading coefficients must be positive and finite");
  }

  double operator()(std::size_t j, std::size_t k, std::size_t l) const { return beta_(j, k, l); }
  std::size_t L() const noexcept { return beta_.dim0(); }
  std::size_t K() const noexcept { return beta_.dim1(); }
  const Tensor3& tensor() const noexcept { return beta_; }

  bool operator==(const LargeScaleFading&) const = default;

 private:
  Tensor3 beta_;
};

inline LargeScaleFading symmetric_fading(std::size_t L, std::size_t K, double b) {
  if (!(b > 0.0)) throw ConfigError("symmetric fading gain must be positive");
  return LargeScaleFading(Tensor3(L, K, L, b));
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Hexagonal layout with wrap-around. Cells are pointy-top hexagons of
// circumradius R; a cluster of ring radius n holds 3n^2 + 3n + 1 cells and
// tiles the plane by translation, so every base station is seen through its
// nearest periodic image.
class HexLayout {
 public:
  HexLayout(std::size_t L, double cell_radius) : radius_(cell_radius) {
    int rings = -1;
    for (int n = 0; n <= 2; ++n)
      if (static_cast<std::size_t>(3 * n * n + 3 * n + 1) == L) rings = n;
    if (rings < 0)
      throw ConfigError("wrap-around hex layout supports L in {1, 7, 19}, got " + std::to_string(L));

    // axial coordinates, centre first then ring by ring
    std::vector<std::array<int, 2>> axial{{0, 0}};
    static constexpr std::array<std::array<int, 2>, 6> kDirs{
        {{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};
    for (int n = 1; n <= rings; ++n) {
      std::array<int, 2> h{kDirs[4][0] * n, kDirs[4][1] * n};
      for (int side = 0; side < 6; ++side)
        for (int step = 0; step < n; ++step) {
          axial.push_back(h);
          h = {h[0] + kDirs[side][0], h[1] + kDirs[side][1]};
        }
    }
    for (const auto& a : axial) centers_.push_back(to_cartesian(a[0], a[1]));

    images_.push_back({0.0, 0.0});
    std::array<int, 2> t{rings + 1, rings};
    for (int i = 0; i < 6; ++i) {
      images_.push_back(to_cartesian(t[0], t[1]));
      t = {-t[1], t[0] + t[1]};  // 60 degree rotation in axial coordinates
    }
  }

  std::size_t size() const noexcept { return centers_.size(); }
  double cell_radius() const noexcept { return radius_; }
  Point center(std::size_t j) const { return centers_.at(j); }

  double wrapped_distance(std::size_t bs, Point p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& t : images_)
      best = std::min(best, distance(p, {centers_[bs].x + t.x, centers_[bs].y + t.y}));
    return best;
  }

  // Pointy-top hexagon membership relative to the cell centre.
  bool inside_cell(Point offset) const {
    const double ax = std::abs(offset.x), ay = std::abs(offset.y);
    return ax <= 0.5 * std::sqrt(3.0) * radius_ && ay <= radius_ - ax / std::sqrt(3.0);
  }

  Point sample_user(std::size_t cell, Rng& rng, double exclusion_fraction = 0.1) const {
    const double half_w = 0.5 * std::sqrt(3.0) * radius_;
    for (;;) {
      const Point off{rng.uniform(-half_w, half_w), rng.uniform(-radius_, radius_)};
      if (!inside_cell(off)) continue;
      if (std::hypot(off.x, off.y) < exclusion_fraction * radius_) continue;
      return {centers_[cell].x + off.x, centers_[cell].y + off.y};
    }
  }

 private:
  Point to_cartesian(int q, int r) const {
    return {std::sqrt(3.0) * radius_ * (q + 0.5 * r), 1.5 * radius_ * r};
  }

  double radius_;
  std::vector<Point> centers_;
  std::vector<Point> images_;
};

// Everything produced by one network draw; the fading tensor is the product
// of the two component tensors.
struct NetworkDraw {
  std::vector<Point> users;  // index l * K + k
  Tensor3 pathloss;          // (d / d0)^(-exponent)
  Tensor3 shadow_db;         // N(0, sigma^2) per (j, k, l)
  LargeScaleFading fading;
};

inline Tensor3 pathloss_from_positions(const NetworkConfig& cfg, const HexLayout& layout,
                                       const std::vector<Point>& users) {
  if (users.size() != cfg.L * cfg.K) throw DimensionError("expected L*K user positions");
  Tensor3 pl(cfg.L, cfg.K, cfg.L);
  for (std::size_t j = 0; j < cfg.L; ++j)
    for (std::size_t l = 0; l < cfg.L; ++l)
      for (std::size_t k = 0; k < cfg.K; ++k) {
        const double d = layout.wrapped_distance(j, users[l * cfg.K + k]);
        pl(j, k, l) = std::pow(d / cfg.cell_radius, -cfg.pathloss_exponent);
      }
  return pl;
}

inline NetworkDraw generate_network_draw(const NetworkConfig& cfg) {
  cfg.validate();
  const HexLayout layout(cfg.L, cfg.cell_radius);
  NetworkDraw out;
  Rng placement(derive_seed(cfg.seed, {stream::kPlacement}));
  out.users.reserve(cfg.L * cfg.K);
  for (std::size_t l = 0; l < cfg.L; ++l)
    for (std::size_t k = 0; k < cfg.K; ++k) out.users.push_back(layout.sample_user(l, placement));
  out.pathloss = pathloss_from_positions(cfg, layout, out.users);

  Rng shadow(derive_seed(cfg.seed, {stream::kShadowing}));
  out.shadow_db = Tensor3(cfg.L, cfg.K, cfg.L);
  Tensor3 beta(cfg.L, cfg.K, cfg.L);
  for (std::size_t j = 0; j < cfg.L; ++j)
    for (std::size_t k = 0; k < cfg.K; ++k)
      for (std::size_t l = 0; l < cfg.L; ++l) {
        const double x = cfg.shadow_sigma_db > 0.0 ? cfg.shadow_sigma_db * shadow.normal() : 0.0;
        out.shadow_db(j, k, l) = x;
        beta(j, k, l) = out.pathloss(j, k, l) * std::pow(10.0, x / 10.0);
      }
  out.fading = LargeScaleFading(std::move(beta));
  return out;
}

inline LargeScaleFading generate_network(const NetworkConfig& cfg) {
  return generate_network_draw(cfg).fading;
}

inline void write_fading_csv(std::ostream& os, const LargeScaleFading& f) {
  os << "j,k,l,beta\n";
  for (std::size_t j = 0; j < f.L(); ++j)
    for (std::size_t k = 0; k < f.K(); ++k)
      for (std::size_t l = 0; l < f.L(); ++l)
        os << j << ',' << k << ',' << l << ',' << std::setprecision(17) << f(j, k, l) << '\n';
}

inline LargeScaleFading read_fading_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("j,k,l,beta", 0) != 0)
    throw ConfigError("fading CSV must start with header j,k,l,beta");
  struct Row {
    std::size_t j, k, l;
    double beta;
  };
  std::vector<Row> rows;
  std::size_t L = 0, K = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Row r{};
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> r.j >> c1 >> r.k >> c2 >> r.l >> c3 >> r.beta) || c1 != ',' || c2 != ',' || c3 != ',')
      throw ConfigError("malformed fading CSV row: " + line);
    L = std::max({L, r.j + 1, r.l + 1});
    K = std::max(K, r.k + 1);
    rows.push_back(r);
  }
  if (rows.size() != L * K * L) throw ConfigError("fading CSV does not cover a full (L, K, L) tensor");
  Tensor3 t(L, K, L, std::numeric_limits<double>::quiet_NaN());
  for (const Row& r : rows) t(r.j, r.k, r.l) = r.beta;
  return LargeScaleFading(std::move(t));
}

}  // namespace lsfp
