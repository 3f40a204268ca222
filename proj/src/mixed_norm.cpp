#include "widthlab/mixed_norm.hpp"

#include <algorithm>
#include <cmath>

namespace widthlab {

namespace {

// p-norm of a contiguous block, scaled by the max entry so large p stays stable.
double block_norm(const double* v, std::int64_t n, const Exponent& p) {
  double top = 0.0;
  for (std::int64_t i = 0; i < n; ++i) top = std::max(top, std::fabs(v[i]));
  if (top == 0.0) return 0.0;
  if (p.is_infinite()) return top;
  const double pe = p.value();
  if (pe == 1.0) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += std::fabs(v[i]);
    return s;
  }
  double s = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = std::fabs(v[i]);
    if (a > 0.0) s += std::pow(a / top, pe);
  }
  return top * std::pow(s, 1.0 / pe);
}

}  // namespace

double column_norm(const MixedMatrix& x, std::int64_t j, const Exponent& p) {
  if (j < 0 || j >= x.cols()) throw std::invalid_argument("column index out of range");
  return block_norm(x.data() + j * x.rows(), x.rows(), p);
}

double mixed_norm(const MixedMatrix& x, const ExponentPair& e) {
  const std::int64_t m = x.rows();
  const std::int64_t k = x.cols();
  if (e.theta.is_infinite()) {
    double top = 0.0;
    for (std::int64_t j = 0; j < k; ++j) {
      top = std::max(top, block_norm(x.data() + j * m, m, e.p));
    }
    return top;
  }
  std::vector<double> cols(static_cast<std::size_t>(k));
  for (std::int64_t j = 0; j < k; ++j) cols[static_cast<std::size_t>(j)] = block_norm(x.data() + j * m, m, e.p);
  return block_norm(cols.data(), k, e.theta);
}

bool ball_membership(const MixedMatrix& x, const BallSpec& b, double tol) {
  if (x.shape() != b.shape) throw std::invalid_argument("shape mismatch between point and ball");
  if (tol < 0.0) throw std::invalid_argument("tolerance must be nonnegative");
  return mixed_norm(x, b.exps) <= b.nu * (1.0 + tol);
}

double interpolation_inequality_gap(const MixedMatrix& x, const ExponentPair& e1,
                                    const ExponentPair& e2, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0,1]");
  }
  const ExponentPair mid = interpolate(e1, e2, lambda);
  const double n1 = mixed_norm(x, e1);
  const double n2 = mixed_norm(x, e2);
  const double nm = mixed_norm(x, mid);
  const double lhs = std::pow(n1, 1.0 - lambda) * std::pow(n2, lambda);
  return lhs - nm;
}

}  // namespace widthlab
