#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lsfp {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Error taxonomy. Everything derives from std::runtime_error so callers that
// do not care about the category can catch one type.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public std::runtime_error {
 public:
  SingularMatrix(std::size_t pilot_index, double condition_number)
      : std::runtime_error("large-scale matrix for pilot " +
                           std::to_string(pilot_index) +
                           " is singular (condition number " +
                           std::to_string(condition_number) + ")"),
        pilot_index_(pilot_index),
        condition_number_(condition_number) {}

  std::size_t pilot_index() const noexcept { return pilot_index_; }
  double condition_number() const noexcept { return condition_number_; }

 private:
  std::size_t pilot_index_;
  double condition_number_;
};

// Dense rank-3 real tensor with the [j][k][l] indexing used throughout:
// j = base station, k = pilot / user index, l = cell of the user.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(std::size_t n0, std::size_t n1, std::size_t n2, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * n1_ + j) * n2_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * n1_ + j) * n2_ + k];
  }

  std::size_t dim0() const noexcept { return n0_; }
  std::size_t dim1() const noexcept { return n1_; }
  std::size_t dim2() const noexcept { return n2_; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<double> data_;
};

// Rank-2 real tensor, [j][k].
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t n0, std::size_t n1, double fill = 0.0)
      : n0_(n0), n1_(n1), data_(n0 * n1, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n1_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n1_ + j]; }

  std::size_t dim0() const noexcept { return n0_; }
  std::size_t dim1() const noexcept { return n1_; }

  bool operator==(const Tensor2&) const = default;

 private:
  std::size_t n0_ = 0, n1_ = 0;
  std::vector<double> data_;
};

}  // namespace lsfp
