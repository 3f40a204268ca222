#include "widthlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace widthlab {

namespace {

constexpr double kTieEps = 1e-12;
const double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* hypothesis) {
  if (!ok) throw std::invalid_argument(std::string("outside theorem domain: ") + hypothesis);
}

struct Logs {
  double m, k, n;  // n only valid when n >= 1
};

// log(n^{-1/2} m^{1/q} k^{1/sigma})
double log_xinv(const Logs& lg, double uq, double us) { return uq * lg.m + us * lg.k - 0.5 * lg.n; }

}  // namespace

std::string BranchTrace::label() const {
  std::string s;
  switch (branch) {
    case BallBranch::small_ball: s = "small-ball"; break;
    case BallBranch::p_branch: s = "p-branch"; break;
    case BallBranch::theta_branch: s = "theta-branch"; break;
  }
  switch (row) {
    case RegimeRow::flat: s += "/flat"; break;
    case RegimeRow::mid: s += "/mid"; break;
    case RegimeRow::tail: s += "/tail"; break;
  }
  if (branch_tie) s += "/tie";
  if (row_boundary) s += "/row-boundary";
  return s;
}

OrderEstimate ball_width_order(Shape shape, std::int64_t n, const ExponentPair& ball,
                               const ExponentPair& target) {
  shape.validate();
  const double uq = target.p.recip();
  const double us = target.theta.recip();
  require(!target.p.is_infinite() && uq <= 0.5, "need 2 <= q < inf");
  require(!target.theta.is_infinite() && us <= 0.5, "need 2 <= sigma < inf");
  const double up = ball.p.recip();
  const double ut = ball.theta.recip();
  require(up >= uq - kTieEps, "need p <= q");
  require(ut >= us - kTieEps, "need theta <= sigma");
  require(n >= 0, "need n >= 0");
  require(2 * n <= shape.m * shape.k, "need n <= mk/2");

  Logs lg{std::log(static_cast<double>(shape.m)), std::log(static_cast<double>(shape.k)),
          n >= 1 ? std::log(static_cast<double>(n)) : 0.0};

  OrderEstimate out;
  out.thresholds.t_flat = std::exp(2.0 * uq * lg.m + 2.0 * us * lg.k);
  out.thresholds.t_p = std::exp(lg.m + 2.0 * us * lg.k);
  out.thresholds.t_theta = std::exp(2.0 * uq * lg.m + lg.k);

  const double lam_p = lambda_pq(ball.p, target.p);
  const double lam_t = lambda_pq(ball.theta, target.theta);
  out.trace.lambda_p = lam_p;
  out.trace.lambda_theta = lam_t;

  const double nn = static_cast<double>(n);
  const auto near = [&](double t) { return std::fabs(nn - t) <= 1e-9 * std::max(1.0, t); };
  out.trace.row_boundary =
      near(out.thresholds.t_flat) || near(out.thresholds.t_p) || near(out.thresholds.t_theta);

  // Row evaluators. Boundary n goes to the lower row; the displays agree there.
  // n equal to a threshold belongs to the lower row; a relative slack makes
  // the comparison robust to the threshold's own rounding.
  const auto at_most = [](double nn_, double t) { return nn_ <= t * (1.0 + 1e-12); };
  const auto p_branch_value = [&](RegimeRow* row) {
    if (n == 0 || at_most(nn, out.thresholds.t_flat)) {
      *row = RegimeRow::flat;
      return 1.0;
    }
    if (at_most(nn, out.thresholds.t_p)) {
      *row = RegimeRow::mid;
      return std::exp(lam_p * log_xinv(lg, uq, us));
    }
    *row = RegimeRow::tail;
    return std::exp((uq - up) * lg.m + lam_t * (0.5 * lg.m + us * lg.k - 0.5 * lg.n));
  };
  const auto theta_branch_value = [&](RegimeRow* row) {
    if (n == 0 || at_most(nn, out.thresholds.t_flat)) {
      *row = RegimeRow::flat;
      return 1.0;
    }
    if (at_most(nn, out.thresholds.t_theta)) {
      *row = RegimeRow::mid;
      return std::exp(lam_t * log_xinv(lg, uq, us));
    }
    *row = RegimeRow::tail;
    return std::exp((us - ut) * lg.k + lam_p * (0.5 * lg.k + uq * lg.m - 0.5 * lg.n));
  };

  if (up >= 0.5 && ut >= 0.5) {
    out.trace.branch = BallBranch::small_ball;
    if (n == 0 || at_most(nn, out.thresholds.t_flat)) {
      out.trace.row = RegimeRow::flat;
      out.value = 1.0;
    } else {
      out.trace.row = RegimeRow::mid;
      out.value = std::min(1.0, std::exp(log_xinv(lg, uq, us)));
    }
    return out;
  }

  // The p-branch display is consistent only when the lambda_{p,q} clip is
  // inactive (p >= 2); mirrored for the theta branch.
  const bool can_p = up <= 0.5 && lam_p <= lam_t + kTieEps;
  const bool can_t = ut <= 0.5 && lam_t <= lam_p + kTieEps;
  if (can_p && can_t) {
    RegimeRow row_p, row_t;
    const double vp = p_branch_value(&row_p);
    const double vt = theta_branch_value(&row_t);
    if (std::fabs(vp - vt) > 1e-9 * std::max(vp, vt)) {
      throw std::logic_error("branch tie disagreement; displays should coincide");
    }
    out.trace.branch = BallBranch::p_branch;
    out.trace.branch_tie = true;
    out.trace.row = row_p;
    out.value = vp;
    return out;
  }
  if (can_p) {
    out.trace.branch = BallBranch::p_branch;
    out.value = p_branch_value(&out.trace.row);
    return out;
  }
  out.trace.branch = BallBranch::theta_branch;
  out.value = theta_branch_value(&out.trace.row);
  return out;
}

std::array<double, 4> branch_identity_values(const ExponentPair& ball, const ExponentPair& target,
                                             Shape shape, std::int64_t n) {
  shape.validate();
  const double uq = target.p.recip(), us = target.theta.recip();
  const double up = ball.p.recip(), ut = ball.theta.recip();
  require(uq <= 0.5 && !target.p.is_infinite(), "need 2 <= q < inf");
  require(us <= 0.5 && !target.theta.is_infinite(), "need 2 <= sigma < inf");
  require(up <= 0.5 + kTieEps && up >= uq - kTieEps, "need 2 <= p <= q");
  require(ut <= 0.5 + kTieEps && ut >= us - kTieEps, "need 2 <= theta <= sigma");
  require(n >= 1, "need n >= 1");
  const double lam_p = lambda_pq(ball.p, target.p);
  const double lam_t = lambda_pq(ball.theta, target.theta);
  if (std::fabs(lam_p - lam_t) > 1e-9) {
    throw std::invalid_argument("exponent mismatch: lambda_{p,q} != lambda_{theta,sigma}");
  }
  Logs lg{std::log(static_cast<double>(shape.m)), std::log(static_cast<double>(shape.k)),
          std::log(static_cast<double>(n))};
  const double lxinv = log_xinv(lg, uq, us);
  return {
      std::exp(lam_p * lxinv),
      std::exp((uq - up) * lg.m + lam_t * (0.5 * lg.m + us * lg.k - 0.5 * lg.n)),
      std::exp(lam_t * lxinv),
      std::exp((us - ut) * lg.k + lam_p * (0.5 * lg.k + uq * lg.m - 0.5 * lg.n)),
  };
}

void WidthQuery::validate() const {
  shape.validate();
  if (balls.empty() || balls.size() > 2) {
    throw std::invalid_argument("query needs one or two balls");
  }
  const double uq = target.p.recip(), us = target.theta.recip();
  require(!target.p.is_infinite() && uq <= 0.5, "need 2 <= q < inf");
  require(!target.theta.is_infinite() && us <= 0.5, "need 2 <= sigma < inf");
  require(n >= 0, "need n >= 0");
  require(2 * n <= shape.m * shape.k, "need n <= mk/2");
  for (const BallSpec& b : balls) {
    require(b.nu > 0.0, "need nu > 0");
    require(b.exps.p.recip() >= uq - kTieEps, "need p_i <= q");
    require(b.exps.theta.recip() >= us - kTieEps, "need theta_i <= sigma");
    if (b.shape != shape) throw std::invalid_argument("ball shape differs from query shape");
  }
}

namespace {

// (1-t) u1 + t u2 = 1/2 on [0,1]; nullopt when 1/2 is not attainable.
std::optional<double> half_param(double u1, double u2, bool* degenerate) {
  *degenerate = false;
  if (std::fabs(u1 - u2) <= kTieEps) {
    if (std::fabs(u1 - 0.5) <= kTieEps) {
      *degenerate = true;  // every parameter solves; convention 0
      return 0.0;
    }
    return std::nullopt;
  }
  const double t = (u1 - 0.5) / (u1 - u2);
  if (t < -kTieEps || t > 1.0 + kTieEps) return std::nullopt;
  return std::clamp(t, 0.0, 1.0);
}

}  // namespace

std::optional<InterpolationSolution> solve_lambda_tilde(const ExponentPair& b1, const ExponentPair& b2) {
  bool degenerate = false;
  const auto t = half_param(b1.p.recip(), b2.p.recip(), &degenerate);
  if (!t) return std::nullopt;
  InterpolationSolution s;
  s.kind = InterpolationKind::lambda_tilde;
  s.parameter = *t;
  s.degenerate = degenerate;
  s.derived = {Exponent::from_recip(0.5), interpolate(b1.theta, b2.theta, *t)};
  s.interval_lo = degenerate ? 0.0 : *t;
  s.interval_hi = degenerate ? 1.0 : *t;
  return s;
}

std::optional<InterpolationSolution> solve_mu_tilde(const ExponentPair& b1, const ExponentPair& b2) {
  bool degenerate = false;
  const auto t = half_param(b1.theta.recip(), b2.theta.recip(), &degenerate);
  if (!t) return std::nullopt;
  InterpolationSolution s;
  s.kind = InterpolationKind::mu_tilde;
  s.parameter = *t;
  s.degenerate = degenerate;
  s.derived = {interpolate(b1.p, b2.p, *t), Exponent::from_recip(0.5)};
  s.interval_lo = degenerate ? 0.0 : *t;
  s.interval_hi = degenerate ? 1.0 : *t;
  return s;
}

std::optional<InterpolationSolution> solve_phi5_lambda(const ExponentPair& b1, const ExponentPair& b2,
                                                       const ExponentPair& target) {
  const double uq = target.p.recip(), us = target.theta.recip();
  require(uq <= 0.5 && !target.p.is_infinite(), "need 2 <= q < inf");
  require(us <= 0.5 && !target.theta.is_infinite(), "need 2 <= sigma < inf");
  const double up1 = b1.p.recip(), up2 = b2.p.recip();
  const double ut1 = b1.theta.recip(), ut2 = b2.theta.recip();

  // Feasible lambda interval for lo <= a + b*lambda <= hi, intersected into [acc_lo, acc_hi].
  double lo = 0.0, hi = 1.0;
  const auto clip = [&](double a, double b, double lo_c, double hi_c) -> bool {
    if (std::fabs(b) <= kTieEps) {
      return a >= lo_c - kTieEps && a <= hi_c + kTieEps;  // constant: feasible or not
    }
    double t0 = (lo_c - a) / b;
    double t1 = (hi_c - a) / b;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
    return true;
  };
  if (!clip(up1, up2 - up1, uq, 0.5)) return std::nullopt;  // p(lambda) in [2, q]
  if (!clip(ut1, ut2 - ut1, us, 0.5)) return std::nullopt;  // theta(lambda) in [2, sigma]
  if (lo > hi + 1e-9) return std::nullopt;
  hi = std::max(lo, hi);

  // lambda_{p(.),q} - lambda_{theta(.),sigma} is affine on the box (no clip active
  // there); at q = 2 the p side is the constant 1, and the box pins p(lambda) = 2.
  double ap, bp;
  if (uq < 0.5 - kTieEps) {
    ap = (up1 - uq) / (0.5 - uq);
    bp = (up2 - up1) / (0.5 - uq);
  } else {
    ap = 1.0;
    bp = 0.0;
  }
  double at, bt;
  if (us < 0.5 - kTieEps) {
    at = (ut1 - us) / (0.5 - us);
    bt = (ut2 - ut1) / (0.5 - us);
  } else {
    at = 1.0;
    bt = 0.0;
  }
  const double A = ap - at;
  const double B = bp - bt;

  InterpolationSolution s;
  s.kind = InterpolationKind::phi5_lambda;
  if (std::fabs(B) <= kTieEps) {
    if (std::fabs(A) > 1e-12) return std::nullopt;
    s.parameter = lo;  // whole box solves; smallest point
    s.interval_lo = lo;
    s.interval_hi = hi;
    s.degenerate = hi > lo + kTieEps;
  } else {
    const double t = -A / B;
    if (t < lo - 1e-9 || t > hi + 1e-9) return std::nullopt;
    s.parameter = std::clamp(t, lo, hi);
    s.interval_lo = s.parameter;
    s.interval_hi = s.parameter;
  }
  s.derived = interpolate(ExponentPair{b1.p, b1.theta}, ExponentPair{b2.p, b2.theta}, s.parameter);
  return s;
}

double phi_value(const WidthQuery& query, int j) {
  query.validate();
  if (j < 1 || j > 5) throw std::invalid_argument("phi index must lie in 1..5");
  if (j >= 2 && query.balls.size() < 2) {
    throw std::invalid_argument("phi_2..phi_5 need a two-ball query");
  }
  const ExponentPair& target = query.target;
  const BallSpec& b1 = query.ball(0);

  if (j == 1 || j == 2) {
    const BallSpec& b = query.ball(j - 1);
    return b.nu * ball_width_order(query.shape, query.n, b.exps, target).value;
  }
  const BallSpec& b2 = query.ball(1);

  std::optional<InterpolationSolution> sol;
  if (j == 3) sol = solve_lambda_tilde(b1.exps, b2.exps);
  if (j == 4) sol = solve_mu_tilde(b1.exps, b2.exps);
  if (j == 5) sol = solve_phi5_lambda(b1.exps, b2.exps, target);
  if (!sol) return kInf;
  const double t = sol->parameter;
  const double nu = std::pow(b1.nu, 1.0 - t) * std::pow(b2.nu, t);
  return nu * ball_width_order(query.shape, query.n, sol->derived, target).value;
}

std::array<double, 5> phi_values(const WidthQuery& query) {
  std::array<double, 5> out{};
  for (int j = 1; j <= 5; ++j) out[static_cast<std::size_t>(j - 1)] = phi_value(query, j);
  return out;
}

IntersectionOrder intersection_width_order(const WidthQuery& query) {
  query.validate();
  IntersectionOrder out;
  const OrderEstimate base = ball_width_order(query.shape, query.n, query.ball(0).exps, query.target);
  out.thresholds = base.thresholds;

  if (query.balls.size() == 1) {
    out.value = query.ball(0).nu * base.value;
    out.argmin_j = 1;
    out.phi = {out.value, kInf, kInf, kInf, kInf};
    out.decision.case_number = 0;
    out.decision.active_j = 1;
    out.trace = base.trace.label();
    return out;
  }

  out.phi = phi_values(query);
  out.argmin_j = 1;
  for (int j = 2; j <= 5; ++j) {
    if (out.phi[static_cast<std::size_t>(j - 1)] < out.phi[static_cast<std::size_t>(out.argmin_j - 1)]) {
      out.argmin_j = j;
    }
  }
  out.value = out.phi[static_cast<std::size_t>(out.argmin_j - 1)];
  out.decision = predict_active_term(query);

  // Branch label of the winning term.
  const int j = out.argmin_j;
  ExponentPair exps;
  if (j == 1 || j == 2) {
    exps = query.ball(j - 1).exps;
  } else {
    std::optional<InterpolationSolution> sol;
    if (j == 3) sol = solve_lambda_tilde(query.ball(0).exps, query.ball(1).exps);
    if (j == 4) sol = solve_mu_tilde(query.ball(0).exps, query.ball(1).exps);
    if (j == 5) sol = solve_phi5_lambda(query.ball(0).exps, query.ball(1).exps, query.target);
    exps = sol ? sol->derived : query.ball(0).exps;
  }
  out.trace = "phi" + std::to_string(j) + ":" +
              ball_width_order(query.shape, query.n, exps, query.target).trace.label();
  return out;
}

}  // namespace widthlab
