#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "widthlab/extremal.hpp"
#include "widthlab/rng.hpp"
#include "widthlab/suites.hpp"

using namespace widthlab;

namespace {

MixedMatrix random_matrix(Shape s, Rng& rng) {
  MixedMatrix x(s);
  for (double* e = x.data(); e != x.data() + x.size(); ++e) *e = rng.normal();
  return x;
}

std::vector<double> key_of(const MixedMatrix& v) { return v.entries(); }

}  // namespace

TEST_CASE("apply_gamma basics") {
  const Shape s(2, 2);
  const MixedMatrix e = e_matrix(s, 1, 1);

  SUBCASE("identity leaves x unchanged") {
    Rng rng(3);
    const MixedMatrix x = random_matrix(s, rng);
    CHECK(apply_gamma(identity_gamma(s), x) == x);
  }
  SUBCASE("all-minus signs cancel pairwise") {
    Rng rng(4);
    const MixedMatrix x = random_matrix(s, rng);
    SignedPermutation g = identity_gamma(s);
    for (auto& v : g.eps1) v = -1;
    for (auto& v : g.eps2) v = -1;
    CHECK(apply_gamma(g, x) == x);
  }
  SUBCASE("row swap moves the unit entry") {
    SignedPermutation g = identity_gamma(s);
    std::swap(g.tau1[0], g.tau1[1]);
    const MixedMatrix y = apply_gamma(g, e);
    CHECK(y.at(0, 0) == 0.0);
    CHECK(y.at(1, 0) == 1.0);
  }
  SUBCASE("invalid permutations are rejected") {
    SignedPermutation g = identity_gamma(s);
    g.tau1[0] = g.tau1[1];
    CHECK_THROWS_AS(apply_gamma(g, e), std::invalid_argument);
    SignedPermutation h = identity_gamma(s);
    h.eps2[0] = 0;
    CHECK_THROWS_AS(apply_gamma(h, e), std::invalid_argument);
  }
}

TEST_CASE("gamma preserves every mixed norm") {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const Shape s(1 + static_cast<std::int64_t>(rng.below(5)), 1 + static_cast<std::int64_t>(rng.below(5)));
    const MixedMatrix x = random_matrix(s, rng);
    const SignedPermutation g = random_gamma(s, rng);
    const ExponentPair e{rng.uniform() < 0.2 ? Exponent::infinity() : Exponent::from_recip(rng.uniform(0.0, 1.0)),
                         rng.uniform() < 0.2 ? Exponent::infinity() : Exponent::from_recip(rng.uniform(0.0, 1.0))};
    CHECK(mixed_norm(apply_gamma(g, x), e) == doctest::Approx(mixed_norm(x, e)).epsilon(1e-12));
  }
}

TEST_CASE("e_matrix") {
  CHECK(e_matrix(Shape(2, 2), 2, 2) == MixedMatrix(Shape(2, 2), 1.0));
  const MixedMatrix e = e_matrix(Shape(4, 3), 2, 1);
  CHECK(mixed_norm(e, ExponentPair::of(4, 4)) == doctest::Approx(std::pow(2.0, 0.25)));
  const MixedMatrix u = e_matrix(Shape(5, 7), 1, 1);
  for (double p : {1.0, 2.0, 7.0}) {
    CHECK(mixed_norm(u, ExponentPair::of(p, p)) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(e_matrix(Shape(4, 3), 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(e_matrix(Shape(4, 3), 1, 0), std::invalid_argument);
}

TEST_CASE("vertex family enumeration") {
  SUBCASE("cross-polytope vertices of V_{1,1}^{2,2}") {
    const VertexFamily f = VertexFamily::plan(Shape(2, 2), 1, 1);
    CHECK(f.distinct_count() == 8);  // 2mk
    std::set<std::vector<double>> seen;
    for (std::int64_t i = 0; i < f.emit_count(); ++i) {
      const MixedMatrix v = f.vertex(i);
      double sum = 0.0;
      for (double x : v.entries()) sum += std::fabs(x);
      CHECK(sum == 1.0);  // single +-1 entry
      seen.insert(key_of(v));
    }
    CHECK(seen.size() == 8);
  }

  SUBCASE("V_{2,2}^{2,2} gives the 8 rank-one sign matrices") {
    const VertexFamily f = VertexFamily::plan(Shape(2, 2), 2, 2);
    CHECK(f.distinct_count() == 8);
    std::set<std::vector<double>> seen;
    Rng rng(12);
    for (std::int64_t i = 0; i < f.emit_count(); ++i) seen.insert(key_of(f.vertex(i)));
    CHECK(seen.size() == 8);
    // oracle: enumerate group elements applied to e and deduplicate
    std::set<std::vector<double>> orbit;
    const MixedMatrix e = e_matrix(Shape(2, 2), 2, 2);
    for (int t = 0; t < 512; ++t) orbit.insert(key_of(apply_gamma(random_gamma(Shape(2, 2), rng), e)));
    CHECK(orbit == seen);
  }

  SUBCASE("distinct count formula versus dedup for all shapes mk <= 12") {
    for (std::int64_t m = 1; m <= 12; ++m) {
      for (std::int64_t k = 1; m * k <= 12; ++k) {
        for (std::int64_t r = 1; r <= m; ++r) {
          for (std::int64_t l = 1; l <= k; ++l) {
            const VertexFamily f = VertexFamily::plan(Shape(m, k), r, l, 1u << 20);
            REQUIRE(f.mode() == VertexFamily::Mode::full);
            std::set<std::vector<double>> seen;
            for (std::int64_t i = 0; i < f.emit_count(); ++i) seen.insert(key_of(f.vertex(i)));
            CHECK(seen.size() == f.distinct_count());
            CHECK(f.distinct_count() ==
                  (r == 1 && l == 1 ? 2ull * static_cast<std::uint64_t>(m * k) : f.distinct_count()));
          }
        }
      }
    }
  }

  SUBCASE("every vertex norm equals r^{1/q} l^{1/sigma}") {
    const VertexFamily f = VertexFamily::plan(Shape(4, 3), 2, 2);
    const ExponentPair e = ExponentPair::of(3, 5);
    const double expect = std::pow(2.0, 1.0 / 3.0) * std::pow(2.0, 1.0 / 5.0);
    for (std::int64_t i = 0; i < f.emit_count(); ++i) {
      CHECK(mixed_norm(f.vertex(i), e) == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("sampled mode emits valid patterns deterministically") {
    const VertexFamily f = VertexFamily::plan(Shape(40, 30), 7, 5, 1000, 64, 77);
    CHECK(f.mode() == VertexFamily::Mode::sampled);
    CHECK(f.emit_count() == 64);
    const VertexFamily g = VertexFamily::plan(Shape(40, 30), 7, 5, 1000, 64, 77);
    for (std::int64_t i = 0; i < f.emit_count(); ++i) {
      const MixedMatrix v = f.vertex(i);
      CHECK(v == g.vertex(i));
      std::int64_t nz = 0;
      std::set<std::int64_t> rows, cols;
      for (std::int64_t jj = 0; jj < v.cols(); ++jj) {
        for (std::int64_t ii = 0; ii < v.rows(); ++ii) {
          if (v.at(ii, jj) != 0.0) {
            CHECK(std::fabs(v.at(ii, jj)) == 1.0);
            ++nz;
            rows.insert(ii);
            cols.insert(jj);
          }
        }
      }
      CHECK(nz == 35);
      CHECK(rows.size() == 7);
      CHECK(cols.size() == 5);
    }
  }
}

TEST_CASE("averaging bound") {
  CHECK(averaging_bound(Shape(3, 4), 2, 3, 12) == doctest::Approx(0.0));
  CHECK(averaging_bound(Shape(3, 4), 2, 3, 0) == doctest::Approx(std::sqrt(6.0)));
  CHECK(averaging_bound(Shape(2, 2), 1, 1, 2) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(averaging_bound(Shape(2, 2), 1, 1, 5), std::invalid_argument);
}

TEST_CASE("family lower bound") {
  const ExponentPair target = ExponentPair::of(4, 4);
  // n = 0: flat value r^{1/q} l^{1/sigma}
  const auto a = family_lower_bound(Shape(8, 8), 2, 4, 0, target);
  CHECK(a.value == doctest::Approx(std::pow(2.0, 0.25) * std::pow(4.0, 0.25)));
  CHECK(a.trace.row == RegimeRow::flat);

  // rows agree at the threshold
  const Shape s(16, 4);
  const std::int64_t r = 4, l = 2;
  const auto thr = family_lower_bound(s, r, l, 0, target).thresholds.t_flat;
  const std::int64_t n_at = static_cast<std::int64_t>(std::llround(thr));
  if (std::fabs(thr - static_cast<double>(n_at)) < 1e-9 && 2 * n_at <= s.size()) {
    const auto lo = family_lower_bound(s, r, l, n_at, target);
    const double mid_formula = std::pow(static_cast<double>(n_at), -0.5) * std::pow(16.0, 0.25) *
                               std::pow(4.0, 0.25) * std::sqrt(static_cast<double>(r * l));
    CHECK(lo.value == doctest::Approx(mid_formula).epsilon(1e-9));
  }

  // q = sigma = 2 flat regime covers all n <= mk/2; order matches the averaging
  // bound up to the constant factor only
  const auto c = family_lower_bound(Shape(2, 2), 1, 1, 2, ExponentPair::of(2, 2));
  const double avg = averaging_bound(Shape(2, 2), 1, 1, 2);
  CHECK(c.value / avg >= 1.0);
  CHECK(c.value / avg <= 2.0);
}

TEST_CASE("solve_alpha") {
  // degenerate: equal exponent pairs and equal radii -> alpha = 0 convention
  const LogAffineForm rform{0.0, std::log(8.0)};
  const LogAffineForm lform{0.0, 0.0};
  const auto a0 = solve_alpha(ExponentPair::of(3, 2), ExponentPair::of(3, 2), 1.0, 1.0, rform, lform);
  REQUIRE(a0);
  CHECK(*a0 == doctest::Approx(0.0));

  const ExponentPair b1 = ExponentPair::of(2, 3);
  const ExponentPair b2 = ExponentPair::of(4, 2);
  // h(alpha) = (1/2 - 1/4) * alpha*log 8 + (1/3 - 1/2) * 0 - log(nu1/nu2)

  // band endpoints map to alpha = 0 and alpha = 1
  const auto lo = solve_alpha(b1, b2, 1.0, 1.0, rform, lform);
  REQUIRE(lo);
  CHECK(*lo == doctest::Approx(0.0));
  const auto hi = solve_alpha(b1, b2, std::pow(8.0, 0.25), 1.0, rform, lform);
  REQUIRE(hi);
  CHECK(*hi == doctest::Approx(1.0));

  // interior value: residual of the defining equation below 1e-10
  const double target_ratio = std::pow(8.0, 0.25 * 0.37);
  const auto mid = solve_alpha(b1, b2, target_ratio, 1.0, rform, lform);
  REQUIRE(mid);
  const double resid = 0.25 * (*mid) * std::log(8.0) - std::log(target_ratio);
  CHECK(std::fabs(resid) <= 1e-10);

  // grid-scan oracle for a two-sided form
  {
    const LogAffineForm rf{std::log(3.0), std::log(11.0)};
    const LogAffineForm lf{std::log(9.0), std::log(2.0)};
    const ExponentPair c1 = ExponentPair::of(2.2, 4.0);
    const ExponentPair c2 = ExponentPair::of(5.0, 2.1);
    const double gp = c1.p.recip() - c2.p.recip();
    const double gt = c1.theta.recip() - c2.theta.recip();
    const double alpha_true = 0.643;
    const double ratio = std::exp(gp * rf.eval_log(alpha_true) + gt * lf.eval_log(alpha_true));
    const auto got = solve_alpha(c1, c2, ratio, 1.0, rf, lf);
    REQUIRE(got);
    CHECK(std::fabs(*got - alpha_true) <= 1e-10);
  }

  // outside the band
  CHECK_FALSE(solve_alpha(b1, b2, 100.0, 1.0, rform, lform));
}

namespace {

WidthQuery sample_admissible(Rng& rng) {
  for (int c = 1;; c = c % 11 + 1) {
    auto q = sample_case_query(c, rng.coin(), rng.coin(), rng);
    if (q) return *q;
  }
}

}  // namespace

TEST_CASE("witness construction and verification") {
  SUBCASE("flat regime yields the min-radius unit family") {
    WidthQuery q;
    q.shape = Shape(16, 16);
    q.n = 3;
    q.target = ExponentPair::of(4, 4);
    q.balls = {BallSpec(0.7, ExponentPair::of(1.5, 3), q.shape),
               BallSpec(2.0, ExponentPair::of(3, 1.5), q.shape)};
    const auto w = build_witness(q);
    REQUIRE(w);
    CHECK(w->lemma == LemmaId::v11_min);
    CHECK(w->family.r() == 1);
    CHECK(w->family.l() == 1);
    CHECK(w->scale == doctest::Approx(0.7));
    CHECK(w->factor == 1.0);
    // single-entry vertices satisfy the inclusion with factor 1 already
    CHECK(verify_witness(*w, q.ball(0), q.ball(1), 0.0));
  }

  SUBCASE("seeded admissible queries verify vertex-exactly") {
    Rng rng(321);
    int done = 0;
    while (done < 150) {
      const WidthQuery q = sample_admissible(rng);
      auto w = build_witness(q);
      REQUIRE(w);
      w->family = VertexFamily::plan(w->family.shape(), w->family.r(), w->family.l(), 128, 96,
                                     rng.next_u64());
      CHECK(w->side_condition_ok);
      CHECK(verify_witness(*w, q.ball(0), q.ball(1), 1e-9));
      CHECK(w->claimed_value > 0.0);
      ++done;
    }
  }

  SUBCASE("corrupted witness fails verification") {
    WidthQuery q;
    q.shape = Shape(12, 12);
    q.n = 30;
    q.target = ExponentPair::of(4, 4);
    q.balls = {BallSpec(1.0, ExponentPair::of(3, 3), q.shape),
               BallSpec(1.1, ExponentPair::of(3.5, 2.5), q.shape)};
    auto w = build_witness(q);
    REQUIRE(w);
    REQUIRE(verify_witness(*w, q.ball(0), q.ball(1), 1e-9));
    w->scale *= 10.0;
    const auto detail = verify_witness_detail(*w, q.ball(0), q.ball(1), 1e-9);
    CHECK_FALSE(detail.ok);
    CHECK(detail.first_bad >= 0);
    CHECK(detail.worst_excess > 0.0);
  }
}

TEST_CASE("witness parameters match the displayed formulas") {
  // low-n band of the all-large case: V_{r,1} with r = ceil(X^{1/(1/2-1/q)})
  WidthQuery q;
  q.shape = Shape(14, 14);
  q.target = ExponentPair::of(4, 4);
  q.n = 30;  // t_flat = 14, t_p = t_theta = 14^{3/2} = 52.4
  q.balls = {BallSpec(1.0, ExponentPair::of(2.6, 2.4), q.shape),
             BallSpec(1.0, ExponentPair::of(3.0, 2.7), q.shape)};
  // lambda_{p_i,q} <= lambda_{theta_i,sigma} for both balls: p-dominant case,
  // and nu1/nu2 = 1 below the ratio threshold activates j = 1
  const auto d = predict_active_term(q);
  REQUIRE(d.case_number == 2);
  REQUIRE(d.active_j == 1);
  const auto w = build_witness(q);
  REQUIRE(w);
  CHECK(w->lemma == LemmaId::vr1_ceil);
  const double X = std::sqrt(30.0) * std::pow(14.0, -0.25) * std::pow(14.0, -0.25);
  const double r_tilde = std::pow(X, 1.0 / (0.5 - 0.25));
  CHECK(w->r_tilde == doctest::Approx(r_tilde).epsilon(1e-12));
  const std::int64_t r = static_cast<std::int64_t>(std::ceil(r_tilde - 1e-9));
  CHECK(w->family.r() == r);
  CHECK(w->family.l() == 1);
  CHECK(w->scale == doctest::Approx(std::pow(static_cast<double>(r), -1.0 / 2.6)));
  CHECK(w->factor == 2.0);
  // the family regime condition r >= X^{...} makes the flat bound apply
  CHECK(w->side_condition_ok);
  CHECK(w->claimed_value ==
        doctest::Approx(w->scale * std::pow(static_cast<double>(r), 0.25)).epsilon(1e-12));
}

TEST_CASE("interpolated witness satisfies its defining ratio equation") {
  Rng rng(1234);
  int done = 0;
  std::uint64_t stream = 0;
  while (done < 40) {
    Rng r = rng.stream(stream++);
    auto q = sample_case_query(3, false, false, r);
    if (!q) continue;
    const auto w = build_witness(*q);
    REQUIRE(w);
    if (w->rounding != "ceil" || w->family.l() == 1) continue;  // want the two-sided forms
    if (w->lemma != LemmaId::vrl_interp && w->lemma != LemmaId::vrl_interp_q &&
        w->lemma != LemmaId::vrl_interp_s && w->lemma != LemmaId::vrl_corner) {
      continue;
    }
    const double gp = q->ball(0).exps.p.recip() - q->ball(1).exps.p.recip();
    const double gt = q->ball(0).exps.theta.recip() - q->ball(1).exps.theta.recip();
    const double lhs = std::log(q->ball(0).nu / q->ball(1).nu);
    const double rhs = gp * std::log(w->r_tilde) + gt * std::log(w->l_tilde);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
    CHECK(w->r_tilde >= 1.0 - 1e-9);
    CHECK(w->l_tilde >= 1.0 - 1e-9);
    CHECK(w->family.r() == static_cast<std::int64_t>(std::ceil(w->r_tilde - 1e-9)));
    ++done;
  }
}

TEST_CASE("single ball witness families") {
  const ExponentPair target = ExponentPair::of(4, 4);
  const Shape s(6, 5);
  const auto big = single_ball_witness(BallSpec(2.0, ExponentPair::of(3, 3), s), target, 4);
  CHECK(big.family.r() == 6);
  CHECK(big.family.l() == 5);
  const auto rows = single_ball_witness(BallSpec(1.0, ExponentPair::of(3, 1.5), s), target, 4);
  CHECK(rows.family.r() == 6);
  CHECK(rows.family.l() == 1);
  const auto cols = single_ball_witness(BallSpec(1.0, ExponentPair::of(1.5, 3), s), target, 4);
  CHECK(cols.family.r() == 1);
  CHECK(cols.family.l() == 5);
  const auto unit = single_ball_witness(BallSpec(1.0, ExponentPair::of(1.5, 1.5), s), target, 4);
  CHECK(unit.family.r() == 1);
  CHECK(unit.family.l() == 1);

  // inclusion with factor 1: scaled vertices belong to the ball itself
  for (const Witness* w : {&big, &rows, &cols, &unit}) {
    const BallSpec ball(w == &big ? 2.0 : 1.0,
                        w == &big    ? ExponentPair::of(3, 3)
                        : w == &rows ? ExponentPair::of(3, 1.5)
                        : w == &cols ? ExponentPair::of(1.5, 3)
                                     : ExponentPair::of(1.5, 1.5),
                        s);
    for (std::int64_t i = 0; i < std::min<std::int64_t>(w->family.emit_count(), 64); ++i) {
      MixedMatrix v = w->family.vertex(i);
      for (double* e = v.data(); e != v.data() + v.size(); ++e) *e *= w->scale;
      CHECK(ball_membership(v, ball, 1e-12));
    }
  }
}

