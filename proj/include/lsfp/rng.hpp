#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

#include "lsfp/common.hpp"

namespace lsfp {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based seed derivation: the stream for (base, tag, index...) is a
// pure function of its coordinates, so trial t can be replayed in isolation
// and no ordering between workers leaks into the draws.
inline constexpr std::uint64_t derive_seed(std::uint64_t base,
                                           std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

// Stream tags, one per consumer, so seeds never collide across subsystems.
namespace stream {
inline constexpr std::uint64_t kPlacement = 1;
inline constexpr std::uint64_t kShadowing = 2;
inline constexpr std::uint64_t kSmallScale = 3;
inline constexpr std::uint64_t kPilotNoise = 4;
inline constexpr std::uint64_t kData = 5;
inline constexpr std::uint64_t kTrial = 6;
inline constexpr std::uint64_t kNetworkDraw = 7;
inline constexpr std::uint64_t kBetaTraining = 8;
inline constexpr std::uint64_t kInstance = 9;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }

  // CN(0, 1): real and imaginary parts each N(0, 1/2).
  Complex complex_normal() {
    constexpr double kScale = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kScale * re, kScale * im};
  }

  ComplexVector complex_normal_vector(Eigen::Index n) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = complex_normal();
    return v;
  }

  // Unit-energy QPSK symbol.
  Complex qpsk() {
    constexpr double a = 0.70710678118654752440;
    const auto bits = engine_();
    return {(bits & 1U) ? a : -a, (bits & 2U) ? a : -a};
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace lsfp
