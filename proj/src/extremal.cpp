#include "widthlab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "widthlab/parallel.hpp"

namespace widthlab {

namespace {

constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kU64Max / b) return kU64Max;
  return a * b;
}

// C(n, r), saturating.
std::uint64_t binom(std::int64_t n, std::int64_t r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t num = 1;
  for (std::int64_t i = 1; i <= r; ++i) {
    // multiply by (n - r + i) / i; product stays integral at each step
    const std::uint64_t f = static_cast<std::uint64_t>(n - r + i);
    if (num > kU64Max / f) return kU64Max;
    num = num * f / static_cast<std::uint64_t>(i);
  }
  return num;
}

// Lexicographic unranking of an r-subset of {0..n-1}.
void unrank_combination(std::int64_t n, std::int64_t r, std::uint64_t rank, std::int64_t* out) {
  std::int64_t x = 0;
  for (std::int64_t j = 0; j < r; ++j) {
    while (true) {
      const std::uint64_t c = binom(n - x - 1, r - j - 1);
      if (rank < c) break;
      rank -= c;
      ++x;
    }
    out[j] = x++;
  }
}

void sample_subset(std::int64_t n, std::int64_t r, Rng& rng, std::vector<std::int64_t>& out) {
  // Floyd's algorithm; r <= n
  out.clear();
  for (std::int64_t j = n - r; j < n; ++j) {
    std::int64_t t = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(j + 1)));
    if (std::find(out.begin(), out.end(), t) != out.end()) t = j;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

void SignedPermutation::validate(const Shape& shape) const {
  const auto check_perm = [](const std::vector<std::int64_t>& tau, std::int64_t n) {
    if (static_cast<std::int64_t>(tau.size()) != n) return false;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (std::int64_t v : tau) {
      if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
  };
  const auto check_signs = [](const std::vector<int>& eps, std::int64_t n) {
    if (static_cast<std::int64_t>(eps.size()) != n) return false;
    return std::all_of(eps.begin(), eps.end(), [](int s) { return s == 1 || s == -1; });
  };
  if (!check_perm(tau1, shape.m) || !check_perm(tau2, shape.k)) {
    throw std::invalid_argument("tau1/tau2 must be permutations of the row/column indices");
  }
  if (!check_signs(eps1, shape.m) || !check_signs(eps2, shape.k)) {
    throw std::invalid_argument("eps1/eps2 must be +-1 vectors of matching length");
  }
}

SignedPermutation identity_gamma(const Shape& shape) {
  SignedPermutation g;
  g.tau1.resize(static_cast<std::size_t>(shape.m));
  g.tau2.resize(static_cast<std::size_t>(shape.k));
  std::iota(g.tau1.begin(), g.tau1.end(), 0);
  std::iota(g.tau2.begin(), g.tau2.end(), 0);
  g.eps1.assign(static_cast<std::size_t>(shape.m), 1);
  g.eps2.assign(static_cast<std::size_t>(shape.k), 1);
  return g;
}

SignedPermutation random_gamma(const Shape& shape, Rng& rng) {
  SignedPermutation g = identity_gamma(shape);
  for (std::int64_t i = shape.m - 1; i > 0; --i) {
    std::swap(g.tau1[static_cast<std::size_t>(i)],
              g.tau1[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
  }
  for (std::int64_t j = shape.k - 1; j > 0; --j) {
    std::swap(g.tau2[static_cast<std::size_t>(j)],
              g.tau2[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(j + 1)))]);
  }
  for (auto& s : g.eps1) s = rng.coin() ? 1 : -1;
  for (auto& s : g.eps2) s = rng.coin() ? 1 : -1;
  return g;
}

MixedMatrix apply_gamma(const SignedPermutation& g, const MixedMatrix& x) {
  g.validate(x.shape());
  MixedMatrix y(x.shape());
  for (std::int64_t j = 0; j < x.cols(); ++j) {
    for (std::int64_t i = 0; i < x.rows(); ++i) {
      y.at(i, j) = g.eps1[static_cast<std::size_t>(i)] * g.eps2[static_cast<std::size_t>(j)] *
                   x.at(g.tau1[static_cast<std::size_t>(i)], g.tau2[static_cast<std::size_t>(j)]);
    }
  }
  return y;
}

MixedMatrix e_matrix(Shape shape, std::int64_t r, std::int64_t l) {
  if (r < 1 || r > shape.m || l < 1 || l > shape.k) {
    throw std::invalid_argument("block size out of range: need 1<=r<=m, 1<=l<=k");
  }
  MixedMatrix e(shape);
  for (std::int64_t j = 0; j < l; ++j) {
    for (std::int64_t i = 0; i < r; ++i) e.at(i, j) = 1.0;
  }
  return e;
}

VertexFamily VertexFamily::plan(Shape shape, std::int64_t r, std::int64_t l, std::uint64_t cap,
                                std::int64_t samples, std::uint64_t seed) {
  if (r < 1 || r > shape.m || l < 1 || l > shape.k) {
    throw std::invalid_argument("block size out of range: need 1<=r<=m, 1<=l<=k");
  }
  VertexFamily f;
  f.shape_ = shape;
  f.r_ = r;
  f.l_ = l;
  f.samples_ = samples;
  f.seed_ = seed;
  f.mode_ = f.distinct_count() <= cap ? Mode::full : Mode::sampled;
  return f;
}

std::uint64_t VertexFamily::distinct_count() const {
  std::uint64_t count = sat_mul(binom(shape_.m, r_), binom(shape_.k, l_));
  const std::int64_t sign_bits = r_ + l_ - 1;
  if (sign_bits >= 64) return kU64Max;
  return sat_mul(count, 1ULL << sign_bits);
}

std::int64_t VertexFamily::emit_count() const {
  return mode_ == Mode::full ? static_cast<std::int64_t>(distinct_count()) : samples_;
}

void VertexFamily::pattern(std::int64_t index, Pattern* out) const {
  if (index < 0 || index >= emit_count()) throw std::out_of_range("vertex index out of range");
  auto& rows = out->rows;
  auto& cols = out->cols;
  auto& srow = out->srow;
  auto& scol = out->scol;
  rows.resize(static_cast<std::size_t>(r_));
  cols.resize(static_cast<std::size_t>(l_));
  srow.assign(static_cast<std::size_t>(r_), 1);
  scol.assign(static_cast<std::size_t>(l_), 1);

  if (mode_ == Mode::full) {
    const std::uint64_t signs = 1ULL << (r_ + l_ - 1);
    const std::uint64_t ck = binom(shape_.k, l_);
    std::uint64_t rest = static_cast<std::uint64_t>(index);
    const std::uint64_t sidx = rest % signs;
    rest /= signs;
    const std::uint64_t col_rank = rest % ck;
    const std::uint64_t row_rank = rest / ck;
    unrank_combination(shape_.m, r_, row_rank, rows.data());
    unrank_combination(shape_.k, l_, col_rank, cols.data());
    // first row sign pinned +1: quotient by the global flip
    for (std::int64_t a = 1; a < r_; ++a) {
      srow[static_cast<std::size_t>(a)] = (sidx >> (a - 1)) & 1 ? -1 : 1;
    }
    for (std::int64_t b = 0; b < l_; ++b) {
      scol[static_cast<std::size_t>(b)] = (sidx >> (r_ - 1 + b)) & 1 ? -1 : 1;
    }
  } else {
    Rng rng = Rng(seed_).stream(static_cast<std::uint64_t>(index) + 0x51edULL);
    sample_subset(shape_.m, r_, rng, rows);
    sample_subset(shape_.k, l_, rng, cols);
    for (auto& s : srow) s = rng.coin() ? 1 : -1;
    for (auto& s : scol) s = rng.coin() ? 1 : -1;
  }
}

MixedMatrix VertexFamily::vertex(std::int64_t index) const {
  Pattern pat;
  pattern(index, &pat);
  MixedMatrix v(shape_);
  for (std::int64_t b = 0; b < l_; ++b) {
    for (std::int64_t a = 0; a < r_; ++a) {
      v.at(pat.rows[static_cast<std::size_t>(a)], pat.cols[static_cast<std::size_t>(b)]) =
          pat.srow[static_cast<std::size_t>(a)] * pat.scol[static_cast<std::size_t>(b)];
    }
  }
  return v;
}

void VertexFamily::for_each(const std::function<void(const MixedMatrix&)>& fn) const {
  const std::int64_t count = emit_count();
  for (std::int64_t i = 0; i < count; ++i) fn(vertex(i));
}

double averaging_bound(Shape shape, std::int64_t r, std::int64_t l, std::int64_t n) {
  if (n < 0 || n > shape.size()) throw std::invalid_argument("need 0 <= n <= mk");
  if (r < 1 || r > shape.m || l < 1 || l > shape.k) {
    throw std::invalid_argument("block size out of range");
  }
  const double frac = 1.0 - static_cast<double>(n) / static_cast<double>(shape.size());
  return std::sqrt(std::max(0.0, static_cast<double>(r * l) * frac));
}

OrderEstimate family_lower_bound(Shape shape, std::int64_t r, std::int64_t l, std::int64_t n,
                                 const ExponentPair& target) {
  shape.validate();
  const double uq = target.p.recip(), us = target.theta.recip();
  if (target.p.is_infinite() || uq > 0.5) throw std::invalid_argument("outside theorem domain: need 2 <= q < inf");
  if (target.theta.is_infinite() || us > 0.5) {
    throw std::invalid_argument("outside theorem domain: need 2 <= sigma < inf");
  }
  if (n < 0 || 2 * n > shape.size()) throw std::invalid_argument("outside theorem domain: need 0 <= n <= mk/2");
  if (r < 1 || r > shape.m || l < 1 || l > shape.k) {
    throw std::invalid_argument("block size out of range");
  }
  const double lm = std::log(static_cast<double>(shape.m));
  const double lk = std::log(static_cast<double>(shape.k));
  const double lr = std::log(static_cast<double>(r));
  const double ll = std::log(static_cast<double>(l));
  OrderEstimate out;
  // threshold m^{2/q} k^{2/sigma} r^{1-2/q} l^{1-2/sigma}
  out.thresholds.t_flat = std::exp(2 * uq * lm + 2 * us * lk + (1 - 2 * uq) * lr + (1 - 2 * us) * ll);
  out.thresholds.t_p = out.thresholds.t_flat;
  out.thresholds.t_theta = out.thresholds.t_flat;
  out.trace.lambda_p = 0.0;
  out.trace.lambda_theta = 0.0;
  const double nn = static_cast<double>(n);
  out.trace.row_boundary = std::fabs(nn - out.thresholds.t_flat) <= 1e-9 * std::max(1.0, out.thresholds.t_flat);
  if (n == 0 || nn <= out.thresholds.t_flat) {
    out.trace.row = RegimeRow::flat;
    out.value = std::exp(uq * lr + us * ll);
  } else {
    out.trace.row = RegimeRow::mid;
    out.value = std::exp(uq * lm + us * lk + 0.5 * (lr + ll) - 0.5 * std::log(nn));
  }
  return out;
}

std::optional<double> solve_alpha(const ExponentPair& b1, const ExponentPair& b2, double nu1,
                                  double nu2, const LogAffineForm& r_form, const LogAffineForm& l_form) {
  if (!(nu1 > 0.0) || !(nu2 > 0.0)) throw std::invalid_argument("radii must be positive");
  const double gp = b1.p.recip() - b2.p.recip();
  const double gt = b1.theta.recip() - b2.theta.recip();
  const double target = std::log(nu1) - std::log(nu2);
  const auto h = [&](double a) { return gp * r_form.eval_log(a) + gt * l_form.eval_log(a) - target; };

  if (std::fabs(gp) <= 1e-15 && std::fabs(gt) <= 1e-15) {
    // degenerate: every alpha gives the same witness
    return std::fabs(target) <= 1e-12 ? std::optional<double>(0.0) : std::nullopt;
  }
  double h0 = h(0.0), h1 = h(1.0);
  if (std::fabs(h0) <= 1e-12) return 0.0;
  if (std::fabs(h1) <= 1e-12) return 1.0;
  if ((h0 > 0) == (h1 > 0)) return std::nullopt;  // ratio outside the band
  double lo = 0.0, hi = 1.0;
  // h is monotone (affine in alpha); bisect to 1e-12
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (hm == 0.0) return mid;
    if ((hm > 0) == (h0 > 0)) {
      lo = mid;
      h0 = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

struct CanonicalView {
  Shape shape;          // canonical (m, k)
  ExponentPair target;  // canonical (q, sigma)
  BallSpec b1, b2;      // after decision.swapped and recipe swap
  std::int64_t n = 0;
};

BallSpec transpose_ball(const BallSpec& b) {
  return BallSpec(b.nu, ExponentPair{b.exps.theta, b.exps.p}, Shape(b.shape.k, b.shape.m));
}

CanonicalView canonical_view(const WidthQuery& q, const CaseDecision& d) {
  CanonicalView v;
  BallSpec a = q.ball(d.swapped ? 1 : 0);
  BallSpec b = q.ball(d.swapped ? 0 : 1);
  if (d.recipe.swap_balls) std::swap(a, b);
  if (!d.mirrored) {
    v.shape = q.shape;
    v.target = q.target;
    v.b1 = a;
    v.b2 = b;
  } else {
    v.shape = Shape(q.shape.k, q.shape.m);
    v.target = ExponentPair{q.target.theta, q.target.p};
    v.b1 = transpose_ball(a);
    v.b2 = transpose_ball(b);
  }
  v.n = q.n;
  return v;
}

std::int64_t clamp_round(double t, bool ceil_mode, std::int64_t lo, std::int64_t hi) {
  double r = ceil_mode ? std::ceil(t - 1e-9) : std::floor(t + 1e-9);
  return std::clamp(static_cast<std::int64_t>(r), lo, hi);
}

}  // namespace

Witness single_ball_witness(const BallSpec& ball, const ExponentPair& target, std::int64_t n) {
  const Shape shape = ball.shape;
  const double up = ball.exps.p.recip(), ut = ball.exps.theta.recip();
  Witness w;
  w.factor = 1.0;
  w.rounding = "exact";
  std::int64_t r = up <= 0.5 ? shape.m : 1;  // p >= 2 spreads over all rows
  std::int64_t l = ut <= 0.5 ? shape.k : 1;
  w.family = VertexFamily::plan(shape, r, l);
  w.scale = ball.nu * std::exp(-up * std::log(static_cast<double>(r)) -
                               ut * std::log(static_cast<double>(l)));
  if (r == shape.m && l == shape.k) w.lemma = LemmaId::vmk_plain;
  else if (r == shape.m) w.lemma = LemmaId::vm1_plain;
  else if (l == shape.k) w.lemma = LemmaId::v1k_plain;
  else w.lemma = LemmaId::v11_min;
  w.r_tilde = static_cast<double>(r);
  w.l_tilde = static_cast<double>(l);
  w.claimed_value = w.scale * family_lower_bound(shape, r, l, n, target).value;
  w.decision.case_number = 0;
  return w;
}

std::optional<Witness> build_witness(const WidthQuery& query) {
  query.validate();
  if (query.balls.size() != 2) {
    throw std::invalid_argument("build_witness needs a two-ball query");
  }
  const CaseDecision d = predict_active_term(query);
  const CanonicalView v = canonical_view(query, d);

  const std::int64_t m = v.shape.m, k = v.shape.k, n = v.n;
  const double lm = std::log(static_cast<double>(m));
  const double lk = std::log(static_cast<double>(k));
  const double ln = n >= 1 ? std::log(static_cast<double>(n)) : 0.0;
  const double uq = v.target.p.recip(), us = v.target.theta.recip();
  const double up1 = v.b1.exps.p.recip(), ut1 = v.b1.exps.theta.recip();
  const double up2 = v.b2.exps.p.recip(), ut2 = v.b2.exps.theta.recip();
  const double nu1 = v.b1.nu, nu2 = v.b2.nu;
  const double logX = 0.5 * ln - uq * lm - us * lk;
  const double logY = 0.5 * ln - uq * lm - 0.5 * lk;
  const double logZ = 0.5 * ln - 0.5 * lm - us * lk;

  Witness w;
  w.lemma = d.recipe.lemma;
  w.decision = d;
  w.swapped = d.swapped != d.recipe.swap_balls;
  w.mirrored = d.mirrored;

  std::int64_t r = 1, l = 1;
  const auto geo_scale = [&](double t, double ur, double ul) {
    // nu1^{1-t} nu2^t r^{-ur} l^{-ul}
    return std::exp((1.0 - t) * std::log(nu1) + t * std::log(nu2) -
                    ur * std::log(static_cast<double>(r)) - ul * std::log(static_cast<double>(l)));
  };

  switch (d.recipe.lemma) {
    case LemmaId::v11_min: {
      r = l = 1;
      w.family = VertexFamily::plan(v.shape, 1, 1);
      w.scale = std::min(nu1, nu2);
      w.factor = 1.0;
      w.rounding = "exact";
      w.r_tilde = w.l_tilde = 1.0;
      break;
    }
    case LemmaId::vr1_ceil: {
      w.r_tilde = std::exp(logX / (0.5 - uq));
      w.l_tilde = 1.0;
      r = clamp_round(w.r_tilde, true, 1, m);
      l = 1;
      w.scale = nu1 * std::exp(-up1 * std::log(static_cast<double>(r)));
      w.factor = 2.0;
      w.rounding = "ceil";
      break;
    }
    case LemmaId::v1l_ceil: {
      w.l_tilde = std::exp(logX / (0.5 - us));
      w.r_tilde = 1.0;
      l = clamp_round(w.l_tilde, true, 1, k);
      r = 1;
      w.scale = nu1 * std::exp(-ut1 * std::log(static_cast<double>(l)));
      w.factor = 2.0;
      w.rounding = "ceil";
      break;
    }
    case LemmaId::vml_ceil: {
      w.l_tilde = std::exp(logZ / (0.5 - us));
      w.r_tilde = static_cast<double>(m);
      r = m;
      l = clamp_round(w.l_tilde, true, 1, k);
      w.scale = nu1 * std::exp(-up1 * lm - ut1 * std::log(static_cast<double>(l)));
      w.factor = 2.0;
      w.rounding = "ceil";
      break;
    }
    case LemmaId::vrk_ceil: {
      w.r_tilde = std::exp(logY / (0.5 - uq));
      w.l_tilde = static_cast<double>(k);
      r = clamp_round(w.r_tilde, true, 1, m);
      l = k;
      w.scale = nu1 * std::exp(-up1 * std::log(static_cast<double>(r)) - ut1 * lk);
      w.factor = 2.0;
      w.rounding = "ceil";
      break;
    }
    case LemmaId::vrl_interp:
    case LemmaId::vrl_interp_q:
    case LemmaId::vrl_interp_s:
    case LemmaId::vrl_corner: {
      LogAffineForm rf, lf;
      if (d.recipe.lemma == LemmaId::vrl_interp) {
        rf = {logX / (0.5 - uq), 0.0};
        lf = {0.0, logX / (0.5 - us)};
      } else if (d.recipe.lemma == LemmaId::vrl_interp_q) {
        rf = {logX / (0.5 - uq), logY / (0.5 - uq)};
        lf = {0.0, lk};
      } else if (d.recipe.lemma == LemmaId::vrl_interp_s) {
        rf = {0.0, lm};
        lf = {logX / (0.5 - us), logZ / (0.5 - us)};
      } else {
        rf = {lm, logY / (0.5 - uq)};
        lf = {logZ / (0.5 - us), lk};
      }
      const auto alpha = solve_alpha(v.b1.exps, v.b2.exps, nu1, nu2, rf, lf);
      if (!alpha) return std::nullopt;
      w.alpha = *alpha;
      const auto lam = solve_phi5_lambda(v.b1.exps, v.b2.exps, v.target);
      if (!lam) return std::nullopt;
      w.lambda = lam->parameter;
      w.r_tilde = std::exp(rf.eval_log(*alpha));
      w.l_tilde = std::exp(lf.eval_log(*alpha));
      r = clamp_round(w.r_tilde, true, 1, m);
      l = clamp_round(w.l_tilde, true, 1, k);
      w.scale = geo_scale(w.lambda, lam->derived.p.recip(), lam->derived.theta.recip());
      w.factor = 4.0;
      w.rounding = "ceil";
      break;
    }
    case LemmaId::vm1_plain: {
      r = m;
      l = 1;
      w.r_tilde = static_cast<double>(m);
      w.l_tilde = 1.0;
      w.scale = nu2 * std::exp(-up2 * lm);
      w.factor = 1.0;
      w.rounding = "exact";
      break;
    }
    case LemmaId::v1k_plain: {
      r = 1;
      l = k;
      w.r_tilde = 1.0;
      w.l_tilde = static_cast<double>(k);
      w.scale = nu2 * std::exp(-ut2 * lk);
      w.factor = 1.0;
      w.rounding = "exact";
      break;
    }
    case LemmaId::vml_floor: {
      const LogAffineForm rf{lm, lm};
      const LogAffineForm lf{logZ / (0.5 - us), 0.0};
      const auto alpha = solve_alpha(v.b1.exps, v.b2.exps, nu1, nu2, rf, lf);
      if (!alpha) return std::nullopt;
      const auto mu = solve_mu_tilde(v.b1.exps, v.b2.exps);
      if (!mu) return std::nullopt;
      w.alpha = *alpha;
      w.lambda = mu->parameter;
      w.r_tilde = static_cast<double>(m);
      w.l_tilde = std::exp(lf.eval_log(*alpha));
      r = m;
      l = clamp_round(w.l_tilde, false, 1, k);
      w.scale = geo_scale(w.lambda, mu->derived.p.recip(), 0.5);
      w.factor = 4.0;
      w.rounding = "floor";
      break;
    }
    case LemmaId::vrk_floor: {
      const LogAffineForm rf{logY / (0.5 - uq), 0.0};
      const LogAffineForm lf{lk, lk};
      const auto alpha = solve_alpha(v.b1.exps, v.b2.exps, nu1, nu2, rf, lf);
      if (!alpha) return std::nullopt;
      const auto lam = solve_lambda_tilde(v.b1.exps, v.b2.exps);
      if (!lam) return std::nullopt;
      w.alpha = *alpha;
      w.lambda = lam->parameter;
      w.r_tilde = std::exp(rf.eval_log(*alpha));
      w.l_tilde = static_cast<double>(k);
      r = clamp_round(w.r_tilde, false, 1, m);
      l = k;
      w.scale = geo_scale(w.lambda, 0.5, lam->derived.theta.recip());
      w.factor = 4.0;
      w.rounding = "floor";
      break;
    }
    case LemmaId::vr1_floor:
    case LemmaId::vr1_alpha: {
      const LogAffineForm rf =
          d.recipe.lemma == LemmaId::vr1_floor ? LogAffineForm{0.0, logX / (0.5 - uq)} : LogAffineForm{0.0, lm};
      const LogAffineForm lf{0.0, 0.0};
      const auto alpha = solve_alpha(v.b1.exps, v.b2.exps, nu1, nu2, rf, lf);
      if (!alpha) return std::nullopt;
      const auto lam = solve_lambda_tilde(v.b1.exps, v.b2.exps);
      if (!lam) return std::nullopt;
      w.alpha = *alpha;
      w.lambda = lam->parameter;
      w.r_tilde = std::exp(rf.eval_log(*alpha));
      w.l_tilde = 1.0;
      r = clamp_round(w.r_tilde, false, 1, m);
      l = 1;
      w.scale = geo_scale(w.lambda, 0.5, lam->derived.theta.recip());
      w.factor = 4.0;
      w.rounding = "floor";
      break;
    }
    case LemmaId::vmk_plain:
      throw std::logic_error("full-family recipe is single-ball only");
    case LemmaId::v1l_floor:
    case LemmaId::v1l_alpha: {
      const LogAffineForm lf =
          d.recipe.lemma == LemmaId::v1l_floor ? LogAffineForm{0.0, logX / (0.5 - us)} : LogAffineForm{0.0, lk};
      const LogAffineForm rf{0.0, 0.0};
      const auto alpha = solve_alpha(v.b1.exps, v.b2.exps, nu1, nu2, rf, lf);
      if (!alpha) return std::nullopt;
      const auto mu = solve_mu_tilde(v.b1.exps, v.b2.exps);
      if (!mu) return std::nullopt;
      w.alpha = *alpha;
      w.lambda = mu->parameter;
      w.r_tilde = 1.0;
      w.l_tilde = std::exp(lf.eval_log(*alpha));
      r = 1;
      l = clamp_round(w.l_tilde, false, 1, k);
      w.scale = geo_scale(w.lambda, mu->derived.p.recip(), 0.5);
      w.factor = 4.0;
      w.rounding = "floor";
      break;
    }
  }

  if (d.recipe.lemma != LemmaId::v11_min) {
    w.family = VertexFamily::plan(v.shape, r, l);
  }

  // Regime side condition the family bound needs (with the lemma's rounding).
  const OrderEstimate bound = family_lower_bound(v.shape, r, l, n, v.target);
  const double nn = static_cast<double>(n);
  const double slack = 1e-9 * std::max(1.0, bound.thresholds.t_flat);
  switch (d.recipe.lemma) {
    case LemmaId::v11_min:
      w.side_condition_ok = true;  // both regimes valid for V_{1,1}
      break;
    case LemmaId::vr1_ceil:
    case LemmaId::v1l_ceil:
    case LemmaId::vml_ceil:
    case LemmaId::vrk_ceil:
    case LemmaId::vrl_interp:
    case LemmaId::vrl_interp_q:
    case LemmaId::vrl_interp_s:
    case LemmaId::vrl_corner:
      w.side_condition_ok = nn <= bound.thresholds.t_flat + slack;
      break;
    default:
      w.side_condition_ok = nn >= bound.thresholds.t_flat - slack;
      break;
  }
  w.claimed_value = w.scale * bound.value;

  // Map the family back to the original orientation.
  if (d.mirrored) {
    w.family = VertexFamily::plan(query.shape, l, r);
  }
  return w;
}

VerifyDetail verify_witness_detail(const Witness& w, const BallSpec& b1, const BallSpec& b2,
                                   double tol) {
  VerifyDetail out;
  const std::int64_t count = w.family.emit_count();
  const double lim1 = w.factor * b1.nu * (1.0 + tol);
  const double lim2 = w.factor * b2.nu * (1.0 + tol);

  std::int64_t first_bad = count;
  double worst = -1.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(min : first_bad) reduction(max : worst) \
    num_threads(effective_threads())
#endif
  for (std::int64_t i = 0; i < count; ++i) {
    MixedMatrix v = w.family.vertex(i);
    for (double* e = v.data(); e != v.data() + v.size(); ++e) *e *= w.scale;
    const double n1 = mixed_norm(v, b1.exps);
    const double n2 = mixed_norm(v, b2.exps);
    const double excess = std::max(n1 / (w.factor * b1.nu), n2 / (w.factor * b2.nu)) - 1.0;
    worst = std::max(worst, excess);
    if ((n1 > lim1 || n2 > lim2) && i < first_bad) first_bad = i;
  }
  out.worst_excess = worst;
  out.ok = first_bad == count;
  out.first_bad = out.ok ? -1 : first_bad;
  return out;
}

bool verify_witness(const Witness& w, const BallSpec& b1, const BallSpec& b2, double tol) {
  return verify_witness_detail(w, b1, b2, tol).ok;
}

}  // namespace widthlab
