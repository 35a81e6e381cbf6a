#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lsfp/common.hpp"

namespace lsfp {

// Neumaier-compensated accumulator. Works for double and std::complex<double>.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    if constexpr (std::is_same_v<T, double>) {
      add_real(sum_, comp_, x);
    } else {
      double re = sum_.real(), im = sum_.imag();
      double cre = comp_.real(), cim = comp_.imag();
      add_real(re, cre, x.real());
      add_real(im, cim, x.imag());
      sum_ = {re, im};
      comp_ = {cre, cim};
    }
  }
  T value() const { return sum_ + comp_; }

 private:
  static void add_real(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  T sum_{};
  T comp_{};
};

template <typename T>
T compensated_mean(std::span<const T> xs) {
  CompensatedSum<T> s;
  for (const T& x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

// Sample variance E|x - mean|^2 of (possibly complex) samples together with
// the standard error of that estimate, from the spread of |x - mean|^2.
struct VarianceEstimate {
  double variance = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

template <typename T>
VarianceEstimate sample_variance(std::span<const T> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_variance needs at least two samples");
  const T mean = compensated_mean(xs);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = std::norm(xs[i] - mean);
  CompensatedSum<double> s;
  for (double v : d) s.add(v);
  const double mean_d = s.value() / static_cast<double>(n);
  CompensatedSum<double> s2;
  for (double v : d) s2.add((v - mean_d) * (v - mean_d));
  const double var_d = s2.value() / static_cast<double>(n - 1);
  VarianceEstimate out;
  out.variance = mean_d * static_cast<double>(n) / static_cast<double>(n - 1);
  out.stderr_ = std::sqrt(var_d / static_cast<double>(n));
  out.n = n;
  return out;
}

// Sample covariance E[conj(x - mx)(y - my)] with its standard error.
struct CovarianceEstimate {
  Complex covariance{};
  double stderr_ = 0.0;
};

inline CovarianceEstimate sample_covariance(std::span<const Complex> xs,
                                            std::span<const Complex> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("sample_covariance needs equal-length inputs of size >= 2");
  const std::size_t n = xs.size();
  const Complex mx = compensated_mean(xs), my = compensated_mean(ys);
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::conj(xs[i] - mx) * (ys[i] - my);
  const Complex mz = compensated_mean(std::span<const Complex>(z));
  CompensatedSum<double> s;
  for (const Complex& v : z) s.add(std::norm(v - mz));
  CovarianceEstimate out;
  out.covariance = mz;
  out.stderr_ = std::sqrt(s.value() / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

// Mean with standard error for real samples.
struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double stddev = 0.0;
};

inline MeanEstimate sample_mean(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("sample_mean needs at least two samples");
  MeanEstimate out;
  out.mean = compensated_mean(xs);
  CompensatedSum<double> s;
  for (double x : xs) s.add((x - out.mean) * (x - out.mean));
  out.stddev = std::sqrt(s.value() / static_cast<double>(n - 1));
  out.stderr_ = out.stddev / std::sqrt(static_cast<double>(n));
  return out;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope needs at least two paired points");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// Empirical CDF over a fixed sample set.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw std::invalid_argument("EmpiricalCdf needs samples");
    std::sort(sorted_.begin(), sorted_.end());
  }

  // Fraction of samples <= x.
  double operator()(double x) const {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
  }

  // Nearest-rank percentile, p in (0, 100].
  double percentile(double p) const {
    if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentile must lie in (0, 100]");
    const auto rank = static_cast<std::size_t>(
        std::ceil(p / 100.0 * static_cast<double>(sorted_.size())));
    return sorted_[std::max<std::size_t>(rank, 1) - 1];
  }

  const std::vector<double>& sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// First-order stochastic dominance: a dominates b when F_a(x) <= F_b(x)
// at every sample point of either distribution.
inline bool stochastically_dominates(const EmpiricalCdf& a, const EmpiricalCdf& b) {
  for (double x : a.sorted())
    if (a(x) > b(x)) return false;
  for (double x : b.sorted())
    if (a(x) > b(x)) return false;
  return true;
}

}  // namespace lsfp
