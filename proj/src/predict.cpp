#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "widthlab/estimates.hpp"

// Regime case analysis: classify a two-ball query (up to ball swap and the
// axis mirror (m,q,p) <-> (k,sigma,theta)) into one of eleven canonical cases,
// then read the active Phi index and the matching witness construction off the
// per-regime band table. Every band edge is the exact crossing of two adjacent
// Phi displays, so the prediction must agree with argmin_j Phi_j away from
// boundaries; the test suites assert exactly that.

namespace widthlab {

namespace {

constexpr double kTypeEps = 1e-9;  // reciprocal-space "equals 2" tolerance
constexpr double kLamEps = 1e-9;   // lambda comparison tolerance
constexpr double kBandEps = 1e-9;  // log-space band-edge tolerance

struct Frame {
  double log_m = 0.0, log_k = 0.0, log_n = 0.0;
  std::int64_t m = 1, k = 1, n = 0;
  double uq = 0.5, us = 0.5;
  double up1 = 1, ut1 = 1, up2 = 1, ut2 = 1;
  double log_ratio = 0.0;  // log(nu1/nu2)
  bool swapped = false, mirrored = false;

  double lam_p1 = 1, lam_t1 = 1, lam_p2 = 1, lam_t2 = 1;
  std::optional<double> lam_tilde, mu_tilde;

  bool q_gt2() const { return uq < 0.5 - 1e-12; }
  bool s_gt2() const { return us < 0.5 - 1e-12; }

  // log n-thresholds
  double lt_flat() const { return 2.0 * uq * log_m + 2.0 * us * log_k; }
  double lt_p() const { return log_m + 2.0 * us * log_k; }      // m k^{2/sigma}
  double lt_theta() const { return 2.0 * uq * log_m + log_k; }  // k m^{2/q}

  double logX() const { return 0.5 * log_n - uq * log_m - us * log_k; }
  double logY() const { return 0.5 * log_n - uq * log_m - 0.5 * log_k; }
  double logZ() const { return 0.5 * log_n - 0.5 * log_m - us * log_k; }
  double sp() const { return (up1 - up2) / (0.5 - uq); }
  double st() const { return (ut1 - ut2) / (0.5 - us); }

  double A_p() const { return sp() * logX(); }
  double A_t() const { return st() * logX(); }
  double B_p() const { return (up1 - up2) * log_m; }
  double B_t() const { return (ut1 - ut2) * log_k; }
  double C_p() const { return B_t() + sp() * logY(); }
  double C_t() const { return B_p() + st() * logZ(); }
};

double lambda_from_recips(double up, double uq) {
  if (uq >= 0.5) return 1.0;
  return std::min((up - uq) / (0.5 - uq), 1.0);
}

std::optional<double> half_param_simple(double u1, double u2) {
  if (std::fabs(u1 - u2) <= 1e-12) {
    if (std::fabs(u1 - 0.5) <= 1e-12) return 0.0;
    return std::nullopt;
  }
  const double t = (u1 - 0.5) / (u1 - u2);
  if (t < -1e-12 || t > 1.0 + 1e-12) return std::nullopt;
  return std::clamp(t, 0.0, 1.0);
}

Frame make_frame(const WidthQuery& q, bool swap, bool mirror) {
  const BallSpec& a = q.ball(swap ? 1 : 0);
  const BallSpec& b = q.ball(swap ? 0 : 1);
  Frame f;
  f.swapped = swap;
  f.mirrored = mirror;
  f.n = q.n;
  if (!mirror) {
    f.m = q.shape.m;
    f.k = q.shape.k;
    f.uq = q.target.p.recip();
    f.us = q.target.theta.recip();
    f.up1 = a.exps.p.recip();
    f.ut1 = a.exps.theta.recip();
    f.up2 = b.exps.p.recip();
    f.ut2 = b.exps.theta.recip();
  } else {
    f.m = q.shape.k;
    f.k = q.shape.m;
    f.uq = q.target.theta.recip();
    f.us = q.target.p.recip();
    f.up1 = a.exps.theta.recip();
    f.ut1 = a.exps.p.recip();
    f.up2 = b.exps.theta.recip();
    f.ut2 = b.exps.p.recip();
  }
  f.log_m = std::log(static_cast<double>(f.m));
  f.log_k = std::log(static_cast<double>(f.k));
  f.log_n = f.n >= 1 ? std::log(static_cast<double>(f.n)) : 0.0;
  f.log_ratio = std::log(a.nu) - std::log(b.nu);
  f.lam_p1 = lambda_from_recips(f.up1, f.uq);
  f.lam_t1 = lambda_from_recips(f.ut1, f.us);
  f.lam_p2 = lambda_from_recips(f.up2, f.uq);
  f.lam_t2 = lambda_from_recips(f.ut2, f.us);
  f.lam_tilde = half_param_simple(f.up1, f.up2);
  f.mu_tilde = half_param_simple(f.ut1, f.ut2);
  return f;
}

bool le2(double u) { return u >= 0.5 - kTypeEps; }  // exponent <= 2
bool ge2(double u) { return u <= 0.5 + kTypeEps; }  // exponent >= 2
bool near2(double u) { return std::fabs(u - 0.5) <= kTypeEps; }

struct MatchInfo {
  bool boundary = false;
};

// Canonical-case matchers. Ball 1 carries the case's first-listed type.
std::optional<MatchInfo> match_case(int number, const Frame& f) {
  MatchInfo info;
  const auto types_boundary = [&] {
    return near2(f.up1) || near2(f.ut1) || near2(f.up2) || near2(f.ut2);
  };
  const auto lam_tie = [&](double a, double b) { return std::fabs(a - b) <= kLamEps; };

  switch (number) {
    case 1:
      if (le2(f.up1) && le2(f.ut1) && le2(f.up2) && le2(f.ut2)) {
        info.boundary = types_boundary();
        return info;
      }
      return std::nullopt;
    case 2:
      if (ge2(f.up1) && ge2(f.ut1) && ge2(f.up2) && ge2(f.ut2) && f.q_gt2() &&
          f.lam_p1 <= f.lam_t1 + kLamEps && f.lam_p2 <= f.lam_t2 + kLamEps) {
        info.boundary = types_boundary() || lam_tie(f.lam_p1, f.lam_t1) || lam_tie(f.lam_p2, f.lam_t2);
        return info;
      }
      return std::nullopt;
    case 3:
      if (ge2(f.up1) && ge2(f.ut1) && ge2(f.up2) && ge2(f.ut2) && f.q_gt2() && f.s_gt2() &&
          f.lam_p1 <= f.lam_t1 + kLamEps && f.lam_p2 >= f.lam_t2 - kLamEps) {
        info.boundary = types_boundary() || lam_tie(f.lam_p1, f.lam_t1) || lam_tie(f.lam_p2, f.lam_t2);
        return info;
      }
      return std::nullopt;
    case 4:
      if (ge2(f.up1) && ge2(f.up2) && ge2(f.ut1) && le2(f.ut2) && f.s_gt2() &&
          f.lam_p1 <= f.lam_t1 + kLamEps) {
        info.boundary = types_boundary() || lam_tie(f.lam_p1, f.lam_t1);
        return info;
      }
      return std::nullopt;
    case 5:
      if (ge2(f.up1) && ge2(f.up2) && ge2(f.ut1) && le2(f.ut2) && f.q_gt2() && f.s_gt2() &&
          f.lam_p1 >= f.lam_t1 - kLamEps) {
        info.boundary = types_boundary() || lam_tie(f.lam_p1, f.lam_t1);
        return info;
      }
      return std::nullopt;
    case 6:
      if (le2(f.up1) && le2(f.ut1) && le2(f.ut2) && ge2(f.up2) && f.q_gt2()) {
        info.boundary = types_boundary();
        return info;
      }
      return std::nullopt;
    case 7:
      if (ge2(f.up1) && ge2(f.ut1) && le2(f.up2) && le2(f.ut2) && f.q_gt2() && f.s_gt2() &&
          f.lam_tilde && f.mu_tilde && f.lam_p1 <= f.lam_t1 + kLamEps &&
          *f.mu_tilde > *f.lam_tilde + kLamEps) {
        info.boundary = types_boundary() || lam_tie(f.lam_p1, f.lam_t1);
        return info;
      }
      return std::nullopt;
    case 8:
      if (ge2(f.up1) && ge2(f.ut1) && le2(f.up2) && le2(f.ut2) && f.q_gt2() && f.s_gt2() &&
          f.lam_tilde && f.mu_tilde && f.lam_p1 <= f.lam_t1 + kLamEps &&
          *f.mu_tilde <= *f.lam_tilde + kLamEps) {
        info.boundary = types_boundary() || lam_tie(f.lam_p1, f.lam_t1) ||
                        std::fabs(*f.mu_tilde - *f.lam_tilde) <= kLamEps;
        return info;
      }
      return std::nullopt;
    case 9:
      if (ge2(f.up1) && ge2(f.up2) && le2(f.ut1) && le2(f.ut2) && f.q_gt2()) {
        info.boundary = types_boundary();
        return info;
      }
      return std::nullopt;
    case 10:
      if (ge2(f.up1) && le2(f.ut1) && le2(f.up2) && ge2(f.ut2) && f.q_gt2() && f.s_gt2() &&
          f.lam_tilde && f.mu_tilde && *f.lam_tilde >= *f.mu_tilde - kLamEps) {
        info.boundary = types_boundary() || std::fabs(*f.lam_tilde - *f.mu_tilde) <= kLamEps;
        return info;
      }
      return std::nullopt;
    case 11:
      if (ge2(f.up1) && le2(f.ut1) && le2(f.up2) && ge2(f.ut2) && f.q_gt2() && f.s_gt2() &&
          f.lam_tilde && f.mu_tilde && *f.lam_tilde <= *f.mu_tilde + kLamEps) {
        info.boundary = types_boundary() || std::fabs(*f.lam_tilde - *f.mu_tilde) <= kLamEps;
        return info;
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

Regime regime_of(const Frame& f, bool* boundary) {
  const double t0 = f.lt_flat(), t1 = f.lt_p(), t2 = f.lt_theta();
  if (f.n == 0) return Regime::r0;
  const double ln = f.log_n;
  const auto near = [&](double t) { return std::fabs(ln - t) <= kBandEps; };
  if (near(t0) || near(t1) || near(t2)) *boundary = true;
  const double slack = 1e-12;  // n equal to a threshold goes to the lower regime
  if (ln <= t0 + slack) return Regime::r0;
  if (ln <= std::min(t1, t2) + slack) return Regime::ra;
  if (ln <= t1 + slack) return Regime::rb;  // t2 < ln <= t1
  if (ln <= t2 + slack) return Regime::rc;
  return Regime::rd;
}

struct Band {
  int j;
  LemmaId lemma;
  bool lemma_swap;
};

struct BandTable {
  std::vector<double> edges;  // ascending log thresholds
  std::vector<Band> bands;    // edges.size() + 1 entries
};

BandTable case_table(int number, Regime regime, const Frame& f, bool* boundary) {
  const bool high = regime == Regime::rc || regime == Regime::rd;  // n >= m k^{2/sigma}
  switch (number) {
    case 1:
      return {{0.0}, {{1, LemmaId::v11_min, false}, {2, LemmaId::v11_min, false}}};
    case 2:
      if (!high) return {{f.A_p()}, {{1, LemmaId::vr1_ceil, false}, {2, LemmaId::vr1_ceil, true}}};
      return {{f.C_t()}, {{1, LemmaId::vml_ceil, false}, {2, LemmaId::vml_ceil, true}}};
    case 3:
      switch (regime) {
        case Regime::ra:
          return {{f.A_p(), f.A_t()},
                  {{1, LemmaId::vr1_ceil, false}, {5, LemmaId::vrl_interp, false}, {2, LemmaId::v1l_ceil, true}}};
        case Regime::rb:
          return {{f.A_p(), f.C_p()},
                  {{1, LemmaId::vr1_ceil, false}, {5, LemmaId::vrl_interp_q, false}, {2, LemmaId::vrk_ceil, true}}};
        case Regime::rc:
          return {{f.C_t(), f.A_t()},
                  {{1, LemmaId::vml_ceil, false}, {5, LemmaId::vrl_interp_s, false}, {2, LemmaId::v1l_ceil, true}}};
        default:
          return {{f.C_t(), f.C_p()},
                  {{1, LemmaId::vml_ceil, false}, {5, LemmaId::vrl_corner, false}, {2, LemmaId::vrk_ceil, true}}};
      }
    case 4:
      if (!high) return {{f.A_p()}, {{1, LemmaId::vr1_ceil, false}, {2, LemmaId::vr1_ceil, true}}};
      return {{f.C_t(), f.B_p()},
              {{1, LemmaId::vml_ceil, false}, {4, LemmaId::vml_floor, false}, {2, LemmaId::vm1_plain, false}}};
    case 5:
      switch (regime) {
        case Regime::ra:
          return {{f.A_t(), f.A_p()},
                  {{1, LemmaId::v1l_ceil, false}, {5, LemmaId::vrl_interp, false}, {2, LemmaId::vr1_ceil, true}}};
        case Regime::rc:
          return {{f.A_t(), f.C_t(), f.B_p()},
                  {{1, LemmaId::v1l_ceil, false},
                   {5, LemmaId::vrl_interp_s, false},
                   {4, LemmaId::vml_floor, false},
                   {2, LemmaId::vm1_plain, false}}};
        case Regime::rb:
          return {{f.C_p(), f.A_p()},
                  {{1, LemmaId::vrk_ceil, false}, {5, LemmaId::vrl_interp_q, false}, {2, LemmaId::vr1_ceil, true}}};
        default:
          return {{f.C_p(), f.C_t(), f.B_p()},
                  {{1, LemmaId::vrk_ceil, false},
                   {5, LemmaId::vrl_corner, false},
                   {4, LemmaId::vml_floor, false},
                   {2, LemmaId::vm1_plain, false}}};
      }
    case 6:
      if (!high)
        return {{0.0, f.A_p()},
                {{1, LemmaId::v11_min, false}, {3, LemmaId::vr1_floor, false}, {2, LemmaId::vr1_ceil, true}}};
      return {{0.0, f.B_p()},
              {{1, LemmaId::v11_min, false}, {3, LemmaId::vr1_alpha, false}, {2, LemmaId::vm1_plain, false}}};
    case 7:
      switch (regime) {
        case Regime::ra:
          return {{f.A_p(), f.A_t(), 0.0},
                  {{1, LemmaId::vr1_ceil, false},
                   {5, LemmaId::vrl_interp, false},
                   {4, LemmaId::v1l_floor, false},
                   {2, LemmaId::v11_min, false}}};
        case Regime::rc:
          return {{f.C_t(), f.A_t(), 0.0},
                  {{1, LemmaId::vml_ceil, false},
                   {5, LemmaId::vrl_interp_s, false},
                   {4, LemmaId::v1l_floor, false},
                   {2, LemmaId::v11_min, false}}};
        case Regime::rb:
          return {{f.A_p(), f.C_p(), f.B_t(), 0.0},
                  {{1, LemmaId::vr1_ceil, false},
                   {5, LemmaId::vrl_interp_q, false},
                   {3, LemmaId::vrk_floor, false},
                   {4, LemmaId::v1l_alpha, false},
                   {2, LemmaId::v11_min, false}}};
        default:
          return {{f.C_t(), f.C_p(), f.B_t(), 0.0},
                  {{1, LemmaId::vml_ceil, false},
                   {5, LemmaId::vrl_corner, false},
                   {3, LemmaId::vrk_floor, false},
                   {4, LemmaId::v1l_alpha, false},
                   {2, LemmaId::v11_min, false}}};
      }
    case 8:
      if (!high)
        return {{f.A_p(), 0.0},
                {{1, LemmaId::vr1_ceil, false}, {3, LemmaId::vr1_floor, false}, {2, LemmaId::v11_min, false}}};
      return {{f.C_t(), f.B_p(), 0.0},
              {{1, LemmaId::vml_ceil, false},
               {4, LemmaId::vml_floor, false},
               {3, LemmaId::vr1_alpha, false},
               {2, LemmaId::v11_min, false}}};
    case 9:
      if (!high) return {{f.A_p()}, {{1, LemmaId::vr1_ceil, false}, {2, LemmaId::vr1_ceil, true}}};
      return {{f.B_p()}, {{1, LemmaId::vm1_plain, true}, {2, LemmaId::vm1_plain, false}}};
    case 10:
      switch (regime) {
        case Regime::ra:
          return {{f.A_p(), f.A_t()},
                  {{1, LemmaId::vr1_ceil, false}, {5, LemmaId::vrl_interp, false}, {2, LemmaId::v1l_ceil, true}}};
        case Regime::rc:
          return {{f.B_p(), f.C_t(), f.A_t()},
                  {{1, LemmaId::vm1_plain, true},
                   {4, LemmaId::vml_floor, false},
                   {5, LemmaId::vrl_interp_s, false},
                   {2, LemmaId::v1l_ceil, true}}};
        case Regime::rb:
          return {{f.A_p(), f.C_p(), f.B_t()},
                  {{1, LemmaId::vr1_ceil, false},
                   {5, LemmaId::vrl_interp_q, false},
                   {3, LemmaId::vrk_floor, false},
                   {2, LemmaId::v1k_plain, false}}};
        default:
          return {{f.B_p(), f.C_t(), f.C_p(), f.B_t()},
                  {{1, LemmaId::vm1_plain, true},
                   {4, LemmaId::vml_floor, false},
                   {5, LemmaId::vrl_corner, false},
                   {3, LemmaId::vrk_floor, false},
                   {2, LemmaId::v1k_plain, false}}};
      }
    case 11:
      switch (regime) {
        case Regime::ra:
          return {{f.A_p(), 0.0, f.A_t()},
                  {{1, LemmaId::vr1_ceil, false},
                   {3, LemmaId::vr1_floor, false},
                   {4, LemmaId::v1l_floor, false},
                   {2, LemmaId::v1l_ceil, true}}};
        case Regime::rc:
          return {{f.B_p(), 0.0, f.A_t()},
                  {{1, LemmaId::vm1_plain, true},
                   {3, LemmaId::vr1_alpha, false},
                   {4, LemmaId::v1l_floor, false},
                   {2, LemmaId::v1l_ceil, true}}};
        case Regime::rb:
          return {{f.A_p(), 0.0, f.B_t()},
                  {{1, LemmaId::vr1_ceil, false},
                   {3, LemmaId::vr1_floor, false},
                   {4, LemmaId::v1l_alpha, false},
                   {2, LemmaId::v1k_plain, false}}};
        default:
          return {{f.B_p(), 0.0, f.B_t()},
                  {{1, LemmaId::vm1_plain, true},
                   {3, LemmaId::vr1_alpha, false},
                   {4, LemmaId::v1l_alpha, false},
                   {2, LemmaId::v1k_plain, false}}};
      }
    default:
      break;
  }
  *boundary = true;
  return {{0.0}, {{1, LemmaId::v11_min, false}, {2, LemmaId::v11_min, false}}};
}

}  // namespace

std::string lemma_name(LemmaId id) {
  switch (id) {
    case LemmaId::v11_min: return "v11_min";
    case LemmaId::vr1_ceil: return "vr1_ceil";
    case LemmaId::v1l_ceil: return "v1l_ceil";
    case LemmaId::vml_ceil: return "vml_ceil";
    case LemmaId::vrk_ceil: return "vrk_ceil";
    case LemmaId::vrl_interp: return "vrl_interp";
    case LemmaId::vrl_interp_q: return "vrl_interp_q";
    case LemmaId::vrl_interp_s: return "vrl_interp_s";
    case LemmaId::vrl_corner: return "vrl_corner";
    case LemmaId::vm1_plain: return "vm1_plain";
    case LemmaId::v1k_plain: return "v1k_plain";
    case LemmaId::vml_floor: return "vml_floor";
    case LemmaId::vrk_floor: return "vrk_floor";
    case LemmaId::vr1_floor: return "vr1_floor";
    case LemmaId::v1l_floor: return "v1l_floor";
    case LemmaId::vr1_alpha: return "vr1_alpha";
    case LemmaId::v1l_alpha: return "v1l_alpha";
    case LemmaId::vmk_plain: return "vmk_plain";
  }
  return "unknown";
}

std::string CaseDecision::label() const {
  std::ostringstream os;
  if (case_number == 0) {
    os << "single-ball";
    return os.str();
  }
  os << "case" << case_number;
  if (variant_b) os << "b";
  switch (regime) {
    case Regime::r0: os << "/flat"; break;
    case Regime::ra: os << "/mid"; break;
    case Regime::rb: os << "/mid-q"; break;
    case Regime::rc: os << "/mid-sigma"; break;
    case Regime::rd: os << "/tail"; break;
  }
  os << "/band" << band << "/j" << active_j;
  if (swapped) os << "+swap";
  if (mirrored) os << "+mirror";
  if (boundary) os << "+boundary";
  return os.str();
}

CaseDecision predict_active_term(const WidthQuery& query) {
  query.validate();
  if (query.balls.size() != 2) {
    throw std::invalid_argument("predict_active_term needs a two-ball query");
  }

  for (int number = 1; number <= 11; ++number) {
    for (int t = 0; t < 4; ++t) {
      const bool swap = (t & 1) != 0;
      const bool mirror = (t & 2) != 0;
      Frame f = make_frame(query, swap, mirror);
      const auto match = match_case(number, f);
      if (!match) continue;

      CaseDecision d;
      d.case_number = number;
      d.swapped = swap;
      d.mirrored = mirror;
      d.variant_b = mirror && (number == 2 || (number >= 4 && number <= 9));
      d.boundary = match->boundary;
      d.regime = regime_of(f, &d.boundary);

      if (d.regime == Regime::r0) {
        // Width order 1 for every candidate; min{nu1, nu2} decides. Decided in
        // the original ball order so exact ties resolve toward j = 1.
        const double orig_ratio = std::log(query.ball(0).nu) - std::log(query.ball(1).nu);
        d.band = orig_ratio <= 0.0 ? 0 : 1;
        d.boundary = d.boundary || std::fabs(orig_ratio) <= kBandEps;
        d.recipe = {LemmaId::v11_min, false};
        d.active_j = orig_ratio <= 0.0 ? 1 : 2;
        d.log_thresholds = {0.0};
        return d;
      }
      {
        BandTable table = case_table(number, d.regime, f, &d.boundary);
        // The case hypotheses force ascending edges; tolerate roundoff ties.
        for (std::size_t i = 0; i + 1 < table.edges.size(); ++i) {
          if (table.edges[i] > table.edges[i + 1] + 1e-6) {
            throw std::logic_error("band edges out of order; case table inconsistent");
          }
          if (table.edges[i] > table.edges[i + 1]) {
            std::swap(table.edges[i], table.edges[i + 1]);
            d.boundary = true;
          }
        }
        std::size_t band = 0;
        while (band < table.edges.size() && f.log_ratio > table.edges[band]) ++band;
        for (double e : table.edges) {
          if (std::fabs(f.log_ratio - e) <= kBandEps) d.boundary = true;
        }
        const Band& b = table.bands[band];
        d.band = static_cast<int>(band);
        d.active_j = b.j;
        d.recipe = {b.lemma, b.lemma_swap};
        d.log_thresholds = table.edges;
      }

      // Map the Phi index back through the transforms: the mirror exchanges
      // Phi3 and Phi4, the ball swap exchanges Phi1 and Phi2.
      if (mirror) {
        if (d.active_j == 3) d.active_j = 4;
        else if (d.active_j == 4) d.active_j = 3;
      }
      if (swap) {
        if (d.active_j == 1) d.active_j = 2;
        else if (d.active_j == 2) d.active_j = 1;
      }
      return d;
    }
  }
  throw std::logic_error("no regime case matched an admissible query");
}

namespace detail {
Regime classify_regime(Shape shape, std::int64_t n, const ExponentPair& target, bool* boundary) {
  WidthQuery q;
  q.shape = shape;
  q.n = n;
  q.target = target;
  q.balls = {BallSpec(1.0, ExponentPair::of(2.0, 2.0), shape), BallSpec(1.0, ExponentPair::of(2.0, 2.0), shape)};
  Frame f = make_frame(q, false, false);
  bool b = false;
  const Regime r = regime_of(f, &b);
  if (boundary) *boundary = b;
  return r;
}
}  // namespace detail

}  // namespace widthlab
