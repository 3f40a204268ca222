#include <doctest.h>

#include <cmath>

#include "widthlab/extremal.hpp"
#include "widthlab/mixed_norm.hpp"
#include "widthlab/rng.hpp"

using namespace widthlab;

namespace {

MixedMatrix ones(Shape s) { return MixedMatrix(s, 1.0); }

MixedMatrix random_matrix(Shape s, Rng& rng) {
  MixedMatrix x(s);
  for (double* e = x.data(); e != x.data() + x.size(); ++e) *e = rng.normal();
  return x;
}

ExponentPair random_exps(Rng& rng, bool allow_inf = true) {
  const auto one = [&] {
    if (allow_inf && rng.uniform() < 0.2) return Exponent::infinity();
    return Exponent::from_recip(rng.uniform(0.0, 1.0));
  };
  return {one(), one()};
}

}  // namespace

TEST_CASE("mixed norm basic values") {
  CHECK(mixed_norm(ones(Shape(2, 2)), ExponentPair::of(1, 1)) == doctest::Approx(4.0));
  CHECK(mixed_norm(ones(Shape(2, 2)), ExponentPair::of(2, 2)) == doctest::Approx(2.0));

  // block of ones on rows 1..2 of column 1 in a 4x3 frame
  const MixedMatrix e = e_matrix(Shape(4, 3), 2, 1);
  CHECK(mixed_norm(e, ExponentPair::of(4, 4)) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
  CHECK(mixed_norm(MixedMatrix(Shape(3, 3)), ExponentPair::of(3, 2)) == 0.0);
}

TEST_CASE("infinite exponents reduce to maxima") {
  MixedMatrix x(Shape(2, 3));
  x.at(0, 0) = -5.0;
  x.at(1, 2) = 3.0;
  CHECK(mixed_norm(x, {Exponent::infinity(), Exponent::infinity()}) == doctest::Approx(5.0));
  CHECK(mixed_norm(x, {Exponent::from_value(1), Exponent::infinity()}) == doctest::Approx(5.0));
  CHECK(mixed_norm(x, {Exponent::infinity(), Exponent::from_value(1)}) == doctest::Approx(8.0));
}

TEST_CASE("ball membership") {
  const Shape s(2, 2);
  const BallSpec unit(1.0, ExponentPair::of(1, 1), s);
  CHECK(ball_membership(MixedMatrix(s), unit, 0.0));

  // boundary inclusive at tol = 0
  MixedMatrix x(s);
  x.at(0, 0) = 1.0;
  CHECK(ball_membership(x, unit, 0.0));

  CHECK_FALSE(ball_membership(ones(s), BallSpec(3.0, ExponentPair::of(1, 1), s), 0.0));
  CHECK_THROWS_AS(ball_membership(MixedMatrix(Shape(3, 2)), unit, 0.0), std::invalid_argument);
}

TEST_CASE("homogeneity and triangle inequality") {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    const Shape s(1 + static_cast<std::int64_t>(rng.below(6)), 1 + static_cast<std::int64_t>(rng.below(6)));
    const ExponentPair e = random_exps(rng);
    const MixedMatrix x = random_matrix(s, rng);
    const MixedMatrix y = random_matrix(s, rng);
    const double c = rng.uniform(-3.0, 3.0);

    MixedMatrix cx = x;
    for (double* v = cx.data(); v != cx.data() + cx.size(); ++v) *v *= c;
    CHECK(mixed_norm(cx, e) ==
          doctest::Approx(std::fabs(c) * mixed_norm(x, e)).epsilon(1e-12));

    MixedMatrix sum = x;
    for (std::int64_t i = 0; i < sum.size(); ++i) sum.data()[i] += y.data()[i];
    CHECK(mixed_norm(sum, e) <= mixed_norm(x, e) + mixed_norm(y, e) + 1e-9);
  }
}

TEST_CASE("monotonicity in the exponents") {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const Shape s(1 + static_cast<std::int64_t>(rng.below(5)), 1 + static_cast<std::int64_t>(rng.below(5)));
    const MixedMatrix x = random_matrix(s, rng);
    const double up = rng.uniform(0.0, 1.0), up2 = rng.uniform(0.0, up);  // p' >= p
    const double ut = rng.uniform(0.0, 1.0);
    CHECK(mixed_norm(x, {Exponent::from_recip(up2), Exponent::from_recip(ut)}) <=
          mixed_norm(x, {Exponent::from_recip(up), Exponent::from_recip(ut)}) + 1e-9);
    const double ut2 = rng.uniform(0.0, ut);
    CHECK(mixed_norm(x, {Exponent::from_recip(up), Exponent::from_recip(ut2)}) <=
          mixed_norm(x, {Exponent::from_recip(up), Exponent::from_recip(ut)}) + 1e-9);
  }
}

TEST_CASE("norm nesting with dimension factors") {
  Rng rng(13);
  for (int t = 0; t < 300; ++t) {
    const Shape s(1 + static_cast<std::int64_t>(rng.below(6)), 1 + static_cast<std::int64_t>(rng.below(6)));
    const MixedMatrix x = random_matrix(s, rng);
    const double uq = rng.uniform(0.0, 0.5), uqt = rng.uniform(uq, 0.5);  // 2 <= q~ <= q
    const double us = rng.uniform(0.0, 0.5), ust = rng.uniform(us, 0.5);
    const double lhs = mixed_norm(x, {Exponent::from_recip(uq), Exponent::from_recip(us)});
    const double rhs = std::pow(static_cast<double>(s.m), uq - uqt) *
                       std::pow(static_cast<double>(s.k), us - ust) *
                       mixed_norm(x, {Exponent::from_recip(uqt), Exponent::from_recip(ust)});
    CHECK(lhs >= rhs - 1e-9);
  }
}

namespace {

// extended-precision oracle: naive double loop evaluated in long double
long double naive_mixed_norm_ld(const MixedMatrix& x, const ExponentPair& e) {
  const std::int64_t m = x.rows(), k = x.cols();
  long double outer = 0.0L;
  long double outer_max = 0.0L;
  for (std::int64_t j = 0; j < k; ++j) {
    long double inner = 0.0L;
    long double inner_max = 0.0L;
    for (std::int64_t i = 0; i < m; ++i) {
      const long double a = fabsl(static_cast<long double>(x.at(i, j)));
      inner_max = std::max(inner_max, a);
      if (!e.p.is_infinite()) inner += powl(a, static_cast<long double>(e.p.value()));
    }
    const long double col =
        e.p.is_infinite() ? inner_max : powl(inner, 1.0L / static_cast<long double>(e.p.value()));
    outer_max = std::max(outer_max, col);
    if (!e.theta.is_infinite()) outer += powl(col, static_cast<long double>(e.theta.value()));
  }
  return e.theta.is_infinite() ? outer_max
                               : powl(outer, 1.0L / static_cast<long double>(e.theta.value()));
}

}  // namespace

TEST_CASE("double evaluation matches the extended-precision oracle") {
  // the block example evaluated in long double
  const MixedMatrix e = e_matrix(Shape(4, 3), 2, 1);
  const long double oracle = naive_mixed_norm_ld(e, ExponentPair::of(4, 4));
  CHECK(static_cast<double>(oracle) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  CHECK(mixed_norm(e, ExponentPair::of(4, 4)) == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-14));

  Rng rng(15);
  for (int t = 0; t < 400; ++t) {
    const Shape s(1 + static_cast<std::int64_t>(rng.below(8)), 1 + static_cast<std::int64_t>(rng.below(8)));
    MixedMatrix x(s);
    for (double* v = x.data(); v != x.data() + x.size(); ++v) *v = rng.normal() * std::exp(rng.uniform(-3, 3));
    const ExponentPair exps = random_exps(rng);
    const double got = mixed_norm(x, exps);
    const double want = static_cast<double>(naive_mixed_norm_ld(x, exps));
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("interpolation inequality gap") {
  const Shape s(2, 2);
  // equality case: all-ones, endpoints (1,1) and (inf,inf), lambda = 1/2
  const double g0 = interpolation_inequality_gap(ones(s), ExponentPair::of(1, 1),
                                                 {Exponent::infinity(), Exponent::infinity()}, 0.5);
  CHECK(g0 == doctest::Approx(0.0).epsilon(1e-12));

  Rng rng(14);
  for (int t = 0; t < 200; ++t) {
    const MixedMatrix x = random_matrix(Shape(3, 2), rng);
    CHECK(interpolation_inequality_gap(x, random_exps(rng), random_exps(rng), 0.0) ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  const MixedMatrix x = random_matrix(Shape(3, 2), rng);
  CHECK(interpolation_inequality_gap(x, ExponentPair::of(1, 2), ExponentPair::of(4, 3), 0.4) >= 0.0);
  CHECK_THROWS_AS(interpolation_inequality_gap(x, ExponentPair::of(1, 2), ExponentPair::of(4, 3), 1.5),
                  std::invalid_argument);
}
