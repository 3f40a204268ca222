#include "widthlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace widthlab {

namespace {

using Clock = std::chrono::steady_clock;

struct Stopwatch {
  Clock::time_point t0 = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

void note_failure(SuiteResult* r, const std::string& msg) {
  ++r->failures;
  if (r->messages.size() < 10) r->messages.push_back(msg);
}

void finish(SuiteResult* r, const Stopwatch& sw) {
  r->passed = r->failures == 0;
  r->seconds = sw.seconds();
}

Exponent random_exponent(Rng& rng, bool allow_inf) {
  if (allow_inf && rng.uniform() < 0.15) return Exponent::infinity();
  // reciprocal uniform keeps small p and large p both represented
  return Exponent::from_recip(rng.uniform(0.0, 1.0));
}

MixedMatrix random_matrix(Shape shape, Rng& rng) {
  MixedMatrix x(shape);
  for (double* e = x.data(); e != x.data() + x.size(); ++e) *e = rng.normal();
  return x;
}

// ---------------------------------------------------------------------------
// Case-aware query sampling
// ---------------------------------------------------------------------------

struct BallDraw {
  double up, ut;
};

constexpr double kMargin = 0.02;    // reciprocal-space distance to the p=2 wall
constexpr double kLamMargin = 5e-3; // margin on lambda comparisons

double lam(double u, double uq) { return uq >= 0.5 ? 1.0 : std::min((u - uq) / (0.5 - uq), 1.0); }

double draw_low(Rng& rng) { return rng.uniform(0.5 + kMargin, 1.0); }             // exponent in [1, 2)
double draw_high(Rng& rng, double uq) { return rng.uniform(uq + kMargin, 0.5 - kMargin); }

std::optional<double> tilde(double u1, double u2) {
  if (std::fabs(u1 - u2) <= 1e-12) return std::fabs(u1 - 0.5) <= 1e-12 ? std::optional<double>(0.0) : std::nullopt;
  const double t = (u1 - 0.5) / (u1 - u2);
  if (t < -1e-12 || t > 1 + 1e-12) return std::nullopt;
  return std::clamp(t, 0.0, 1.0);
}

}  // namespace

std::optional<WidthQuery> sample_case_query(int case_number, bool apply_swap, bool apply_mirror,
                                            Rng& rng) {
  for (int attempt = 0; attempt < 300; ++attempt) {
    const std::int64_t m = 6 + static_cast<std::int64_t>(rng.below(9));  // 6..14
    const std::int64_t k = 6 + static_cast<std::int64_t>(rng.below(9));
    const double uq = rng.uniform(0.18, 0.44);  // q in ~[2.27, 5.5]
    const double us = rng.uniform(0.18, 0.44);

    BallDraw b1{}, b2{};
    bool ok = true;
    switch (case_number) {
      case 1:
        b1 = {draw_low(rng), draw_low(rng)};
        b2 = {draw_low(rng), draw_low(rng)};
        break;
      case 2:
        b1 = {draw_high(rng, uq), draw_high(rng, us)};
        b2 = {draw_high(rng, uq), draw_high(rng, us)};
        ok = lam(b1.up, uq) < lam(b1.ut, us) - kLamMargin && lam(b2.up, uq) < lam(b2.ut, us) - kLamMargin;
        break;
      case 3:
        b1 = {draw_high(rng, uq), draw_high(rng, us)};
        b2 = {draw_high(rng, uq), draw_high(rng, us)};
        ok = lam(b1.up, uq) < lam(b1.ut, us) - kLamMargin && lam(b2.up, uq) > lam(b2.ut, us) + kLamMargin;
        break;
      case 4:
        b1 = {draw_high(rng, uq), draw_high(rng, us)};
        b2 = {draw_high(rng, uq), draw_low(rng)};
        ok = lam(b1.up, uq) < lam(b1.ut, us) - kLamMargin;
        break;
      case 5:
        b1 = {draw_high(rng, uq), draw_high(rng, us)};
        b2 = {draw_high(rng, uq), draw_low(rng)};
        ok = lam(b1.up, uq) > lam(b1.ut, us) + kLamMargin;
        break;
      case 6:
        b1 = {draw_low(rng), draw_low(rng)};
        b2 = {draw_high(rng, uq), draw_low(rng)};
        break;
      case 7:
      case 8: {
        b1 = {draw_high(rng, uq), draw_high(rng, us)};
        b2 = {draw_low(rng), draw_low(rng)};
        const auto lt = tilde(b1.up, b2.up);
        const auto mt = tilde(b1.ut, b2.ut);
        if (!lt || !mt) {
          ok = false;
          break;
        }
        ok = lam(b1.up, uq) < lam(b1.ut, us) - kLamMargin;
        if (case_number == 7) ok = ok && *mt > *lt + kLamMargin;
        if (case_number == 8) ok = ok && *mt < *lt - kLamMargin;
        break;
      }
      case 9:
        b1 = {draw_high(rng, uq), draw_low(rng)};
        b2 = {draw_high(rng, uq), draw_low(rng)};
        break;
      case 10:
      case 11: {
        b1 = {draw_high(rng, uq), draw_low(rng)};
        b2 = {draw_low(rng), draw_high(rng, us)};
        const auto lt = tilde(b1.up, b2.up);
        const auto mt = tilde(b1.ut, b2.ut);
        if (!lt || !mt) {
          ok = false;
          break;
        }
        if (case_number == 10) ok = *lt > *mt + kLamMargin;
        if (case_number == 11) ok = *lt < *mt - kLamMargin;
        break;
      }
      default:
        return std::nullopt;
    }
    if (!ok) continue;

    // regime choice: integer n strictly inside one of the nonempty regimes
    const double lm = std::log(static_cast<double>(m));
    const double lk = std::log(static_cast<double>(k));
    const double t0 = std::exp(2 * uq * lm + 2 * us * lk);
    const double t1 = std::exp(lm + 2 * us * lk);
    const double t2 = std::exp(2 * uq * lm + lk);
    const double half = static_cast<double>(m * k) / 2.0;

    std::vector<std::pair<double, double>> regimes;
    regimes.emplace_back(1.0, t0);                              // r0
    regimes.emplace_back(t0, std::min({t1, t2, half}));         // ra
    if (t2 < t1) regimes.emplace_back(t2, std::min(t1, half));  // rb
    if (t1 < t2) regimes.emplace_back(t1, std::min(t2, half));  // rc
    regimes.emplace_back(std::max(t1, t2), half);               // rd

    std::vector<std::int64_t> candidates;
    for (const auto& [lo, hi] : regimes) {
      const std::int64_t nlo = static_cast<std::int64_t>(std::floor(lo)) + 1;
      const std::int64_t nhi = static_cast<std::int64_t>(std::ceil(hi)) - 1;
      if (nlo > nhi) continue;
      const std::int64_t n = nlo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(nhi - nlo + 1)));
      const double nn = static_cast<double>(n);
      const auto off = [&](double t) { return std::fabs(nn - t) > 1e-6 * std::max(1.0, t); };
      if (off(t0) && off(t1) && off(t2)) candidates.push_back(n);
    }
    if (candidates.empty()) continue;
    const std::int64_t n = candidates[rng.below(candidates.size())];

    WidthQuery q;
    q.shape = apply_mirror ? Shape(k, m) : Shape(m, k);
    q.n = n;
    ExponentPair target{Exponent::from_recip(uq), Exponent::from_recip(us)};
    ExponentPair e1{Exponent::from_recip(b1.up), Exponent::from_recip(b1.ut)};
    ExponentPair e2{Exponent::from_recip(b2.up), Exponent::from_recip(b2.ut)};
    if (apply_mirror) {
      target = {target.theta, target.p};
      e1 = {e1.theta, e1.p};
      e2 = {e2.theta, e2.p};
    }
    q.target = target;
    q.balls = {BallSpec(1.0, e1, q.shape), BallSpec(1.0, e2, q.shape)};
    if (apply_swap) std::swap(q.balls[0], q.balls[1]);

    // place the ratio inside a random band of the classifier's thresholds
    CaseDecision d;
    try {
      d = predict_active_term(q);
    } catch (const std::exception&) {
      continue;
    }
    std::vector<double> edges = d.log_thresholds;
    if (edges.empty()) edges = {0.0};
    std::vector<std::pair<double, double>> bands;
    bands.emplace_back(edges.front() - 1.5, edges.front() - 0.01);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      if (edges[i + 1] - edges[i] > 0.04) bands.emplace_back(edges[i] + 0.01, edges[i + 1] - 0.01);
    }
    bands.emplace_back(edges.back() + 0.01, edges.back() + 1.5);
    const auto [blo, bhi] = bands[rng.below(bands.size())];
    const double t = rng.uniform(blo, bhi);
    const double scale = std::exp(rng.uniform(-0.5, 0.5));
    double nu1 = std::exp(t) * scale, nu2 = scale;
    if (d.swapped) std::swap(nu1, nu2);
    q.balls[0] = BallSpec(nu1, q.balls[0].exps, q.shape);
    q.balls[1] = BallSpec(nu2, q.balls[1].exps, q.shape);
    return q;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

SuiteResult suite_holder(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "holder";
  Rng rng(seed);
  for (int t = 0; t < 10000; ++t) {
    const Shape shape(1 + static_cast<std::int64_t>(rng.below(8)), 1 + static_cast<std::int64_t>(rng.below(8)));
    const MixedMatrix x = random_matrix(shape, rng);
    const ExponentPair e1{random_exponent(rng, true), random_exponent(rng, true)};
    const ExponentPair e2{random_exponent(rng, true), random_exponent(rng, true)};
    const double lambda = rng.uniform();
    const double gap = interpolation_inequality_gap(x, e1, e2, lambda);
    ++res.cases;
    if (!(gap >= -1e-9)) {
      std::ostringstream os;
      os << "gap " << gap << " at m=" << shape.m << " k=" << shape.k << " lambda=" << lambda;
      note_failure(&res, os.str());
    }
  }
  finish(&res, sw);
  return res;
}

SuiteResult suite_identity4(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "identity4";
  Rng rng(seed);
  int attempts = 0;
  while (res.cases < 1000 && ++attempts <= 1000000) {
    const double uq = rng.uniform(0.05, 0.45);
    const double us = rng.uniform(0.05, 0.45);
    const ExponentPair target{Exponent::from_recip(uq), Exponent::from_recip(us)};
    const ExponentPair e1{Exponent::from_recip(rng.uniform(uq, 0.5)), Exponent::from_recip(rng.uniform(us, 0.5))};
    const ExponentPair e2{Exponent::from_recip(rng.uniform(uq, 0.5)), Exponent::from_recip(rng.uniform(us, 0.5))};
    const auto sol = solve_phi5_lambda(e1, e2, target);
    if (!sol) continue;
    const Shape shape(2 + static_cast<std::int64_t>(rng.below(63)), 2 + static_cast<std::int64_t>(rng.below(63)));
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(shape.size() / 2)));
    const auto vals = branch_identity_values(sol->derived, target, shape, n);
    ++res.cases;
    const double ref = vals[0];
    for (double v : vals) {
      if (std::fabs(v - ref) > 1e-12 * std::max(std::fabs(v), std::fabs(ref))) {
        std::ostringstream os;
        os << "identity mismatch " << vals[0] << " " << vals[1] << " " << vals[2] << " " << vals[3];
        note_failure(&res, os.str());
        break;
      }
    }
  }
  if (res.cases < 1000) note_failure(&res, "sampler starvation: fewer than 1000 identity sets");
  finish(&res, sw);
  return res;
}

SuiteResult suite_averaging(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "averaging";
  Rng root(seed);
  for (std::int64_t m = 1; m <= 16; ++m) {
    for (std::int64_t k = 1; m * k <= 16; ++k) {
      const Shape shape(m, k);
      std::vector<VertexFamily> families;
      for (std::int64_t r = 1; r <= m; ++r) {
        for (std::int64_t l = 1; l <= k; ++l) families.push_back(VertexFamily::plan(shape, r, l));
      }
      for (std::int64_t n = 0; 2 * n <= m * k; ++n) {
        Rng rng = root.stream(static_cast<std::uint64_t>(m * 1000000 + k * 10000 + n));
        for (int draw = 0; draw < 1000; ++draw) {
          const Subspace L = n == 0 ? zero_subspace(shape.size()) : random_orthonormal(shape.size(), n, rng);
          for (const VertexFamily& fam : families) {
            const double mean = orbit_mean_sq_distance(fam, L);
            const double bound =
                static_cast<double>(fam.r() * fam.l()) * (1.0 - static_cast<double>(n) / static_cast<double>(m * k));
            ++res.cases;
            if (!(mean >= bound - 1e-9)) {
              std::ostringstream os;
              os << "mean " << mean << " < " << bound << " at m=" << m << " k=" << k << " r=" << fam.r()
                 << " l=" << fam.l() << " n=" << n;
              note_failure(&res, os.str());
            }
          }
          if (n == 0) break;  // the zero subspace is unique
        }
      }
    }
  }
  finish(&res, sw);
  return res;
}

SuiteResult suite_octahedron(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "octahedron";
  const Shape shape(2, 2);
  const VertexFamily fam = VertexFamily::plan(shape, 1, 1);
  WidthRun base;
  base.source = "octahedron";
  base.shape = shape;
  base.target = ExponentPair::of(2.0, 2.0);
  base.budget = {32, 1500};
  base.seed = seed;
  for (std::int64_t i = 0; i < fam.emit_count(); ++i) base.points.push_back(fam.vertex(i));

  const auto runs = estimate_width_chain(base, {0, 1, 2, 3});
  for (std::int64_t n = 0; n <= 3; ++n) {
    const double expected = std::sqrt(1.0 - static_cast<double>(n) / 4.0);
    const double got = runs[static_cast<std::size_t>(n)].upper_bound;
    ++res.cases;
    if (std::fabs(got - expected) > 5e-3) {
      std::ostringstream os;
      os << "octahedron width n=" << n << " got " << got << " expected " << expected;
      note_failure(&res, os.str());
    }
  }
  finish(&res, sw);
  return res;
}

SuiteResult suite_witnesses(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "witnesses";
  Rng root(seed);
  const int per_combo = 12;
  std::uint64_t stream_id = 0;
  int rounds = 0;
  while (res.cases < 2000 && ++rounds <= 64) {
    for (int number = 1; number <= 11 && res.cases < 2200; ++number) {
      for (int t = 0; t < 4; ++t) {
        for (int s = 0; s < per_combo; ++s) {
          Rng rng = root.stream(stream_id++);
          auto q = sample_case_query(number, (t & 1) != 0, (t & 2) != 0, rng);
          if (!q) continue;
          ++res.cases;
          try {
            auto w = build_witness(*q);
            if (!w) {
              note_failure(&res, "no witness for admissible query in case " + std::to_string(number));
              continue;
            }
            // verification budget: small seeded sample for the big orbits
            w->family = VertexFamily::plan(w->family.shape(), w->family.r(), w->family.l(), 256, 160,
                                           root.stream(stream_id).next_u64());
            if (!w->side_condition_ok) {
              note_failure(&res, "family regime side condition failed: " + w->decision.label());
              continue;
            }
            if (!verify_witness(*w, q->ball(0), q->ball(1), 1e-9)) {
              note_failure(&res, "vertex inclusion failed: " + w->decision.label());
            }
          } catch (const std::exception& e) {
            note_failure(&res, std::string("exception: ") + e.what());
          }
        }
      }
    }
  }
  if (res.cases < 2000) note_failure(&res, "sampler starvation: fewer than 2000 witness queries");
  finish(&res, sw);
  return res;
}

SuiteResult suite_thresholds(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "thresholds";
  Rng root(seed);

  // the argmin agreement over every case, all transforms
  std::uint64_t stream_id = 1;
  std::int64_t checked = 0;
  while (checked < 10000 && stream_id < 2000000) {
    for (int number = 1; number <= 11; ++number) {
      for (int t = 0; t < 4; ++t) {
        Rng rng = root.stream(stream_id++);
        auto q = sample_case_query(number, (t & 1) != 0, (t & 2) != 0, rng);
        if (!q) continue;
        const CaseDecision d = predict_active_term(*q);
        if (d.boundary) continue;
        const auto phi = phi_values(*q);
        int argmin = 1;
        for (int j = 2; j <= 5; ++j) {
          if (phi[static_cast<std::size_t>(j - 1)] < phi[static_cast<std::size_t>(argmin - 1)]) argmin = j;
        }
        // skip near-ties: those are band edges up to roundoff
        double second = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= 5; ++j) {
          if (j != argmin) second = std::min(second, phi[static_cast<std::size_t>(j - 1)]);
        }
        const double gap = second - phi[static_cast<std::size_t>(argmin - 1)];
        if (std::isfinite(second) && gap <= 1e-9 * second) continue;
        ++checked;
        ++res.cases;
        if (d.active_j != argmin) {
          std::ostringstream os;
          os << "predict " << d.active_j << " != argmin " << argmin << " at " << d.label() << " phi=[";
          for (double v : phi) os << v << ",";
          os << "]";
          note_failure(&res, os.str());
        }
      }
    }
  }

  if (checked < 10000) note_failure(&res, "sampler starvation: fewer than 1e4 argmin checks");

  // exact crossing of Phi1/Phi5 and Phi5/Phi2 at the displayed ratio thresholds
  std::int64_t flips = 0;
  while (flips < 400 && stream_id < 4000000) {
    Rng rng = root.stream(stream_id++);
    auto q0 = sample_case_query(3, false, false, rng);
    if (!q0) continue;
    const CaseDecision d = predict_active_term(*q0);
    if (d.regime != Regime::ra || d.log_thresholds.size() != 2) continue;
    for (int side = 0; side < 2; ++side) {
      const double edge = d.log_thresholds[static_cast<std::size_t>(side)];
      const auto phi_at = [&](double log_ratio) {
        WidthQuery q = *q0;
        q.balls[0] = BallSpec(std::exp(log_ratio), q.balls[0].exps, q.shape);
        q.balls[1] = BallSpec(1.0, q.balls[1].exps, q.shape);
        return phi_values(q);
      };
      const auto lo = phi_at(edge - 1e-6), at = phi_at(edge), hi = phi_at(edge + 1e-6);
      const int a = side == 0 ? 0 : 4;  // phi1 vs phi5, then phi5 vs phi2
      const int b = side == 0 ? 4 : 1;
      ++res.cases;
      ++flips;
      const bool flip_ok = lo[a] < lo[b] && hi[a] > hi[b];
      const bool touch_ok = std::fabs(at[a] - at[b]) <= 1e-9 * std::max(at[a], at[b]);
      if (!flip_ok || !touch_ok) {
        std::ostringstream os;
        os << "threshold crossing failed side " << side << " at " << d.label();
        note_failure(&res, os.str());
      }
    }
  }
  if (flips < 400) note_failure(&res, "sampler starvation: fewer than 400 crossing checks");
  finish(&res, sw);
  return res;
}

SuiteResult suite_sandwich(std::uint64_t seed, const WidthBudget& budget) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "sandwich";
  Rng root(seed);
  const std::vector<Shape> shapes = {{2, 2}, {4, 2}, {2, 4}, {4, 4}, {8, 2}, {2, 8}, {3, 4}, {4, 3}};
  std::uint64_t stream_id = 0;
  for (const Shape& shape : shapes) {
    for (int rep = 0; rep < 4; ++rep) {
      Rng rng = root.stream(stream_id++);
      const double uq = rng.uniform(0.23, 0.45);
      const double us = rng.uniform(0.23, 0.45);
      WidthQuery q;
      q.shape = shape;
      q.target = {Exponent::from_recip(uq), Exponent::from_recip(us)};
      q.n = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(shape.size() / 2 + 1)));
      const auto ball = [&] {
        return BallSpec(std::exp(rng.uniform(-1.0, 1.0)),
                        ExponentPair{Exponent::from_recip(rng.uniform(uq, 1.0)),
                                     Exponent::from_recip(rng.uniform(us, 1.0))},
                        shape);
      };
      q.balls = {ball(), ball()};
      ++res.cases;
      try {
        const SandwichReport rep2 = sandwich_check(q, budget, root.stream(stream_id).next_u64(), 1e-6);
        if (!rep2.ok) {
          std::ostringstream os;
          os << "lower " << rep2.lower_avg << " > upper " << rep2.upper_numeric << " at m=" << shape.m
             << " k=" << shape.k << " n=" << q.n;
          note_failure(&res, os.str());
        }
      } catch (const std::exception& e) {
        note_failure(&res, std::string("exception: ") + e.what());
      }
    }
  }
  finish(&res, sw);
  return res;
}

SuiteResult suite_monotonicity(std::uint64_t seed) {
  Stopwatch sw;
  SuiteResult res;
  res.name = "monotonicity";
  Rng rng(seed);

  // analytic order estimates, full n range
  for (int t = 0; t < 400; ++t) {
    const std::int64_t m = 2 + static_cast<std::int64_t>(rng.below(15));
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng.below(15));
    const double uq = rng.uniform(0.05, 0.5);
    const double us = rng.uniform(0.05, 0.5);
    const ExponentPair target{Exponent::from_recip(uq), Exponent::from_recip(us)};
    const ExponentPair ball{Exponent::from_recip(rng.uniform(uq, 1.0)), Exponent::from_recip(rng.uniform(us, 1.0))};
    const Shape shape(m, k);
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 0; 2 * n <= m * k; ++n) {
      const double v = ball_width_order(shape, n, ball, target).value;
      ++res.cases;
      if (v > prev * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "order estimate increased at n=" << n << ": " << prev << " -> " << v;
        note_failure(&res, os.str());
      }
      prev = v;
    }
  }

  // numeric estimator with shared seeds and warm-started chains
  const auto chain_check = [&](const Shape& shape, const ExponentPair& target, std::int64_t r,
                               std::int64_t l, double scale) {
    const VertexFamily fam = VertexFamily::plan(shape, r, l);
    WidthRun base;
    base.source = "monotonicity";
    base.shape = shape;
    base.target = target;
    base.budget = {6, 300};
    base.seed = seed;
    for (std::int64_t i = 0; i < fam.emit_count(); ++i) {
      MixedMatrix v = fam.vertex(i);
      for (double* e = v.data(); e != v.data() + v.size(); ++e) *e *= scale;
      base.points.push_back(std::move(v));
    }
    std::vector<std::int64_t> ns;
    for (std::int64_t n = 0; n <= shape.size(); ++n) ns.push_back(n);
    const auto runs = estimate_width_chain(base, ns);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& run : runs) {
      ++res.cases;
      if (run.upper_bound > prev + 1e-6) {
        std::ostringstream os;
        os << "numeric estimate increased at n=" << run.n << ": " << prev << " -> " << run.upper_bound;
        note_failure(&res, os.str());
      }
      prev = run.upper_bound;
    }
  };
  chain_check(Shape(2, 2), ExponentPair::of(2.0, 2.0), 1, 1, 1.0);
  chain_check(Shape(4, 2), ExponentPair::of(2.0, 2.0), 2, 1, 0.7);
  chain_check(Shape(4, 2), ExponentPair::of(4.0, 3.0), 2, 2, 1.0);
  finish(&res, sw);
  return res;
}

std::vector<std::string> verify_suite_names() {
  return {"holder", "identity4", "averaging", "witnesses", "sandwich", "thresholds"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, const WidthBudget& budget) {
  if (name == "holder") return suite_holder(seed);
  if (name == "identity4") return suite_identity4(seed);
  if (name == "averaging") return suite_averaging(seed);
  if (name == "witnesses") return suite_witnesses(seed);
  if (name == "sandwich") return suite_sandwich(seed, budget);
  if (name == "thresholds") return suite_thresholds(seed);
  if (name == "octahedron") return suite_octahedron(seed);
  if (name == "monotonicity") return suite_monotonicity(seed);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace widthlab
