#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "widthlab/exponents.hpp"

namespace widthlab {

/// Ambient dimensions of l_{p,theta}^{m,k}: m entries per column, k columns.
struct Shape {
  std::int64_t m = 1;
  std::int64_t k = 1;

  Shape() = default;
  Shape(std::int64_t m_, std::int64_t k_) : m(m_), k(k_) { validate(); }

  std::int64_t size() const { return m * k; }

  void validate() const {
    if (m < 1 || k < 1) throw std::invalid_argument("shape requires m >= 1, k >= 1");
    if (m > 1000000 || k > 1000000 || m * k > 1000000) {
      throw std::invalid_argument("shape exceeds the m*k <= 1e6 policy cap");
    }
  }

  friend bool operator==(const Shape& a, const Shape& b) { return a.m == b.m && a.k == b.k; }
  friend bool operator!=(const Shape& a, const Shape& b) { return !(a == b); }
};

/// Dense m x k real matrix, column-major: entry (i, j) at data()[j*m + i].
/// Columns are the outer (theta) blocks.
class MixedMatrix {
 public:
  explicit MixedMatrix(Shape shape, double fill = 0.0)
      : shape_(shape), data_(static_cast<std::size_t>(shape.size()), fill) {}

  const Shape& shape() const { return shape_; }
  std::int64_t rows() const { return shape_.m; }
  std::int64_t cols() const { return shape_.k; }
  std::int64_t size() const { return shape_.size(); }

  double& at(std::int64_t i, std::int64_t j) { return data_[static_cast<std::size_t>(j * shape_.m + i)]; }
  double at(std::int64_t i, std::int64_t j) const { return data_[static_cast<std::size_t>(j * shape_.m + i)]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& entries() const { return data_; }

  friend bool operator==(const MixedMatrix& a, const MixedMatrix& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// nu * B_{p,theta}^{m,k}.
struct BallSpec {
  double nu = 1.0;
  ExponentPair exps;
  Shape shape;

  BallSpec() = default;
  BallSpec(double nu_, ExponentPair exps_, Shape shape_) : nu(nu_), exps(exps_), shape(shape_) {
    if (!(nu > 0.0)) throw std::invalid_argument("ball radius must be positive");
  }
};

/// ( sum_j ( sum_i |x_ij|^p )^{theta/p} )^{1/theta} with max-reductions at inf.
double mixed_norm(const MixedMatrix& x, const ExponentPair& e);

/// Norm of one column block.
double column_norm(const MixedMatrix& x, std::int64_t j, const Exponent& p);

/// mixed_norm(x, b.exps) <= b.nu * (1 + tol). Boundary inclusive at tol = 0.
bool ball_membership(const MixedMatrix& x, const BallSpec& b, double tol = 0.0);

/// ||x||_{p1,t1}^{1-lambda} * ||x||_{p2,t2}^{lambda} - ||x||_{p,t} for the
/// harmonically interpolated pair; Hoelder gives >= 0 up to roundoff.
double interpolation_inequality_gap(const MixedMatrix& x, const ExponentPair& e1,
                                    const ExponentPair& e2, double lambda);

}  // namespace widthlab
