#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace widthlab {

/// Extended norm exponent in [1, inf], stored as its reciprocal so that
/// 1/inf = 0 is an ordinary value and exponent algebra (harmonic means,
/// theta/p ratios) never overflows.
class Exponent {
 public:
  Exponent() = default;  // p = 1

  static Exponent from_value(double p) {
    if (std::isnan(p) || p < 1.0) {
      throw std::invalid_argument("exponent must satisfy p >= 1, got " + std::to_string(p));
    }
    Exponent e;
    e.recip_ = std::isinf(p) ? 0.0 : 1.0 / p;
    return e;
  }

  static Exponent from_recip(double u) {
    if (std::isnan(u) || u < 0.0 || u > 1.0) {
      throw std::invalid_argument("exponent reciprocal must lie in [0,1], got " + std::to_string(u));
    }
    Exponent e;
    e.recip_ = u;
    return e;
  }

  static Exponent infinity() { return from_recip(0.0); }

  double value() const {
    return recip_ == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / recip_;
  }
  double recip() const { return recip_; }
  bool is_infinite() const { return recip_ == 0.0; }

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.recip_ == b.recip_; }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return !(a == b); }

 private:
  double recip_ = 1.0;
};

/// (p, theta): inner exponent over the m rows of a column, outer over the k columns.
struct ExponentPair {
  Exponent p;
  Exponent theta;

  ExponentPair() = default;
  ExponentPair(Exponent p_, Exponent theta_) : p(p_), theta(theta_) {}
  static ExponentPair of(double p_, double theta_) {
    return {Exponent::from_value(p_), Exponent::from_value(theta_)};
  }
};

/// Reciprocal-space harmonic interpolation: 1/p = (1-lambda)/p1 + lambda/p2
/// componentwise, with 1/inf = 0.
inline Exponent interpolate(const Exponent& a, const Exponent& b, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("interpolation parameter must lie in [0,1]");
  }
  return Exponent::from_recip((1.0 - lambda) * a.recip() + lambda * b.recip());
}

inline ExponentPair interpolate(const ExponentPair& a, const ExponentPair& b, double lambda) {
  return {interpolate(a.p, b.p, lambda), interpolate(a.theta, b.theta, lambda)};
}

/// lambda_{p,q} = min{ (1/p - 1/q) / (1/2 - 1/q), 1 } for q > 2; equals 1 at q = 2.
/// Domain: 2 <= q < inf, 1 <= p <= q (p <= 2 when q = 2).
inline double lambda_pq(const Exponent& p, const Exponent& q) {
  if (q.is_infinite() || q.value() < 2.0) {
    throw std::invalid_argument("outside theorem domain: need 2 <= q < inf");
  }
  const double up = p.recip();
  const double uq = q.recip();
  if (up < uq - 1e-15) {
    throw std::invalid_argument("outside theorem domain: need p <= q");
  }
  if (uq >= 0.5) return 1.0;  // q == 2
  return std::min((up - uq) / (0.5 - uq), 1.0);
}

inline double lambda_pq(double p, double q) {
  return lambda_pq(Exponent::from_value(p), Exponent::from_value(q));
}

}  // namespace widthlab
