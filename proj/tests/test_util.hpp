#pragma once

#include <cmath>
#include <cstdint>

#include "lsfp/network.hpp"
#include "lsfp/rng.hpp"

namespace test_util {

// Random fading tensor: L in [2, 5], K in [1, 3], beta log-uniform on [0.1, 1].
inline lsfp::LargeScaleFading random_instance(std::uint64_t seed) {
  lsfp::Rng rng(lsfp::derive_seed(seed, {lsfp::stream::kInstance}));
  const std::size_t L = 2 + static_cast<std::size_t>(rng.uniform() * 4.0);
  const std::size_t K = 1 + static_cast<std::size_t>(rng.uniform() * 3.0);
  lsfp::Tensor3 t(L, K, L);
  for (double& b : t.data()) b = std::pow(10.0, rng.uniform(-1.0, 0.0));
  return lsfp::LargeScaleFading(std::move(t));
}

}  // namespace test_util
