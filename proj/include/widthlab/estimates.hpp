#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "widthlab/mixed_norm.hpp"

namespace widthlab {

// ---------------------------------------------------------------------------
// Single-ball order estimate
// ---------------------------------------------------------------------------

/// Which displayed formula family applies to d_n(B_{p,theta}, l_{q,sigma}).
enum class BallBranch {
  small_ball,    // max{p,theta} <= 2
  p_branch,      // p >= 2, lambda_{p,q} <= lambda_{theta,sigma}
  theta_branch,  // theta >= 2, lambda_{theta,sigma} <= lambda_{p,q}
};

enum class RegimeRow { flat, mid, tail };

/// The three n-thresholds m^{2/q}k^{2/sigma}, m k^{2/sigma}, k m^{2/q}.
struct RegimeThresholds {
  double t_flat = 1.0;   // m^{2/q} k^{2/sigma}
  double t_p = 1.0;      // m k^{2/sigma}   (row split of the p-branch)
  double t_theta = 1.0;  // k m^{2/q}       (row split of the theta-branch)
};

struct BranchTrace {
  BallBranch branch = BallBranch::small_ball;
  RegimeRow row = RegimeRow::flat;
  double lambda_p = 0.0;      // lambda_{p,q}
  double lambda_theta = 0.0;  // lambda_{theta,sigma}
  bool branch_tie = false;    // both branch conditions held; values asserted equal
  bool row_boundary = false;  // n sits on a row threshold
  std::string label() const;
};

/// Order value with constants suppressed (every hidden constant set to 1).
struct OrderEstimate {
  double value = 1.0;
  BranchTrace trace;
  RegimeThresholds thresholds;
};

/// Order of d_n(B_{p,theta}^{m,k}, l_{q,sigma}^{m,k}) for 2<=q,sigma<inf,
/// 1<=p<=q, 1<=theta<=sigma, 0<=n<=mk/2. Throws std::invalid_argument with
/// the violated hypothesis otherwise.
OrderEstimate ball_width_order(Shape shape, std::int64_t n, const ExponentPair& ball,
                               const ExponentPair& target);

/// The four tail expressions that coincide when 2<=p<=q, 2<=theta<=sigma and
/// lambda_{p,q} = lambda_{theta,sigma}. Throws on a lambda mismatch.
std::array<double, 4> branch_identity_values(const ExponentPair& ball, const ExponentPair& target,
                                             Shape shape, std::int64_t n);

// ---------------------------------------------------------------------------
// Two-ball queries and the five Phi terms
// ---------------------------------------------------------------------------

struct WidthQuery {
  Shape shape;
  std::int64_t n = 0;
  ExponentPair target;          // (q, sigma)
  std::vector<BallSpec> balls;  // one or two

  const BallSpec& ball(int i) const { return balls.at(static_cast<std::size_t>(i)); }

  /// Hypotheses of the two-sided estimates; throws naming the violation.
  void validate() const;
};

enum class InterpolationKind { lambda_tilde, mu_tilde, phi5_lambda };

struct InterpolationSolution {
  InterpolationKind kind = InterpolationKind::lambda_tilde;
  double parameter = 0.0;         // in [0,1]
  ExponentPair derived;           // (2, theta~), (p~, 2), or (p(lambda), theta(lambda))
  double interval_lo = 0.0;       // full solution interval (diagnostics)
  double interval_hi = 0.0;
  bool degenerate = false;        // every parameter solved; convention picked 0
};

/// lambda~ with 1/2 = (1-lambda~)/p1 + lambda~/p2, companion theta~.
/// Empty when 1/2 is not between 1/p1 and 1/p2. p1 = p2 = 2 returns 0 by convention.
std::optional<InterpolationSolution> solve_lambda_tilde(const ExponentPair& b1, const ExponentPair& b2);

/// Mirror of solve_lambda_tilde on the theta components; companion p~.
std::optional<InterpolationSolution> solve_mu_tilde(const ExponentPair& b1, const ExponentPair& b2);

/// lambda in [0,1] with p(lambda) in [2,q], theta(lambda) in [2,sigma] and
/// lambda_{p(lambda),q} = lambda_{theta(lambda),sigma}. Smallest solution;
/// the full solution interval is reported for diagnostics.
std::optional<InterpolationSolution> solve_phi5_lambda(const ExponentPair& b1, const ExponentPair& b2,
                                                       const ExponentPair& target);

/// Phi_j for j in 1..5; +inf when the required interpolation solution is empty.
double phi_value(const WidthQuery& query, int j);
std::array<double, 5> phi_values(const WidthQuery& query);

// ---------------------------------------------------------------------------
// Case prediction (regime analysis) and the intersection estimate
// ---------------------------------------------------------------------------

enum class Regime { r0, ra, rb, rc, rd };

/// Which lower-bound construction backs a band (family + rounding rule).
enum class LemmaId {
  v11_min,        // min{nu} * V_{1,1}
  vr1_ceil,       // V_{r,1}, r from the q-side display, ceil
  v1l_ceil,       // V_{1,l}, sigma-side, ceil
  vml_ceil,       // V_{m,l}, ceil
  vrk_ceil,       // V_{r,k}, ceil
  vrl_interp,     // V_{r,l}, both sides from the central display
  vrl_interp_q,   // V_{r,l}, l~ saturating to k
  vrl_interp_s,   // V_{r,l}, r~ saturating to m
  vrl_corner,     // V_{r,l}, both sides saturating
  vm1_plain,      // V_{m,1}
  v1k_plain,      // V_{1,k}
  vml_floor,      // V_{m,l}, floor, mu~ scale
  vrk_floor,      // V_{r,k}, floor, lambda~ scale
  vr1_floor,      // V_{r,1}, floor, lambda~ scale
  v1l_floor,      // V_{1,l}, floor, mu~ scale
  vr1_alpha,      // V_{r,1}, r~ = m^alpha, floor
  v1l_alpha,      // V_{1,l}, l~ = k^alpha, floor
  vmk_plain,      // V_{m,k}, single-ball inclusion only
};

std::string lemma_name(LemmaId id);

struct WitnessRecipe {
  LemmaId lemma = LemmaId::v11_min;
  bool swap_balls = false;  // apply with ball indices exchanged
};

struct CaseDecision {
  int case_number = 1;          // 1..11
  bool variant_b = false;       // reached through the axis mirror
  bool swapped = false;         // ball indices 1<->2 exchanged to match
  bool mirrored = false;        // axes (m,q,p) <-> (k,sigma,theta) exchanged
  bool boundary = false;        // some defining comparison was a near-tie
  Regime regime = Regime::r0;
  int band = 0;                 // 0-based band between sorted thresholds
  int active_j = 1;             // predicted argmin Phi index, original ball order
  WitnessRecipe recipe;         // construction for the active band
  std::vector<double> log_thresholds;  // canonical-frame band edges, log scale
  std::string label() const;
};

/// Classifies the query into the regime case analysis and returns the Phi index
/// it proves active, with the matching witness recipe.
CaseDecision predict_active_term(const WidthQuery& query);

struct IntersectionOrder {
  double value = 1.0;
  int argmin_j = 1;                  // ties toward the smallest j
  std::array<double, 5> phi{};       // all five candidates
  RegimeThresholds thresholds;
  CaseDecision decision;
  std::string trace;                 // branch label of the winning Phi
};

/// min_j Phi_j with the argmin trace. One-ball queries reduce to ball_width_order.
IntersectionOrder intersection_width_order(const WidthQuery& query);

namespace detail {
/// Regime of n against the thresholds; boundaries resolve downward.
Regime classify_regime(Shape shape, std::int64_t n, const ExponentPair& target, bool* boundary);
}  // namespace detail

}  // namespace widthlab
