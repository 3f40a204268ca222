#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "widthlab/estimates.hpp"
#include "widthlab/mixed_norm.hpp"
#include "widthlab/rng.hpp"

namespace widthlab {

/// Element of the symmetry group: row/column permutations with row/column signs.
struct SignedPermutation {
  std::vector<std::int64_t> tau1;  // permutation of 0..m-1
  std::vector<std::int64_t> tau2;  // permutation of 0..k-1
  std::vector<int> eps1;           // in {+1,-1}^m
  std::vector<int> eps2;           // in {+1,-1}^k

  void validate(const Shape& shape) const;
};

SignedPermutation identity_gamma(const Shape& shape);
SignedPermutation random_gamma(const Shape& shape, Rng& rng);

/// gamma(x)_{i,j} = eps1_i * eps2_j * x_{tau1(i), tau2(j)}; preserves every mixed norm.
MixedMatrix apply_gamma(const SignedPermutation& g, const MixedMatrix& x);

/// Top-left r x l block of ones.
MixedMatrix e_matrix(Shape shape, std::int64_t r, std::int64_t l);

/// The orbit polytope conv{gamma(e)}: vertices are +-1 rectangles with
/// rank-one sign pattern on an r-row x l-column support.
class VertexFamily {
 public:
  enum class Mode { full, sampled };

  VertexFamily() = default;

  /// Full enumeration when the distinct-vertex count fits under `cap`,
  /// else seeded uniform pattern sampling with `samples` draws.
  static VertexFamily plan(Shape shape, std::int64_t r, std::int64_t l,
                           std::uint64_t cap = 200000, std::int64_t samples = 10000,
                           std::uint64_t seed = 0);

  const Shape& shape() const { return shape_; }
  std::int64_t r() const { return r_; }
  std::int64_t l() const { return l_; }
  Mode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

  /// C(m,r) * C(k,l) * 2^{r+l-1}, saturating at uint64 max.
  std::uint64_t distinct_count() const;

  /// Number of vertices emitted by vertex(): distinct_count in full mode,
  /// the sample count otherwise.
  std::int64_t emit_count() const;

  /// Vertex by index: combinatorial unranking in full mode, an independent
  /// seeded draw per index in sampled mode.
  MixedMatrix vertex(std::int64_t index) const;

  /// Sparse form of vertex(index): entry (rows[a], cols[b]) = srow[a]*scol[b].
  struct Pattern {
    std::vector<std::int64_t> rows, cols;
    std::vector<int> srow, scol;
  };
  void pattern(std::int64_t index, Pattern* out) const;

  void for_each(const std::function<void(const MixedMatrix&)>& fn) const;

 private:
  Shape shape_;
  std::int64_t r_ = 1, l_ = 1;
  Mode mode_ = Mode::full;
  std::int64_t samples_ = 10000;
  std::uint64_t seed_ = 0;
};

/// sqrt(max(0, r*l*(1 - n/(mk)))): the mean-square lower bound on the l_{2,2}
/// distance from the orbit of e to any subspace of dimension <= n.
double averaging_bound(Shape shape, std::int64_t r, std::int64_t l, std::int64_t n);

/// Lower bound for d_n(V_{r,l}, l_{q,sigma}) with constants suppressed:
/// r^{1/q} l^{1/sigma} below the threshold m^{2/q}k^{2/sigma}r^{1-2/q}l^{1-2/sigma},
/// n^{-1/2} m^{1/q} k^{1/sigma} (rl)^{1/2} above it.
OrderEstimate family_lower_bound(Shape shape, std::int64_t r, std::int64_t l, std::int64_t n,
                                 const ExponentPair& target);

/// Log-affine parameterization t(alpha) = exp((1-alpha)*log_at0 + alpha*log_at1).
struct LogAffineForm {
  double log_at0 = 0.0;
  double log_at1 = 0.0;
  double eval_log(double alpha) const { return (1.0 - alpha) * log_at0 + alpha * log_at1; }
};

/// Solves nu1/nu2 = r~(alpha)^{1/p1-1/p2} * l~(alpha)^{1/theta1-1/theta2} for
/// alpha in [0,1] by bisection (|d alpha| <= 1e-12). Empty when the ratio lies
/// outside the band swept by alpha. Degenerate (both exponent gaps zero): 0.
std::optional<double> solve_alpha(const ExponentPair& b1, const ExponentPair& b2, double nu1,
                                  double nu2, const LogAffineForm& r_form, const LogAffineForm& l_form);

/// A lower-bound certificate: scale * V_{r,l} sits inside factor * (ball intersection).
struct Witness {
  VertexFamily family;
  double scale = 1.0;
  LemmaId lemma = LemmaId::v11_min;
  double factor = 1.0;  // 1, 2 or 4, carried explicitly
  double alpha = 0.0;
  double lambda = 0.0;  // interpolation parameter entering the scale
  double r_tilde = 1.0;
  double l_tilde = 1.0;
  std::string rounding;  // "exact", "ceil" or "floor"
  double claimed_value = 0.0;
  bool side_condition_ok = true;  // regime condition needed by the family bound
  bool swapped = false;
  bool mirrored = false;
  CaseDecision decision;
};

/// Dispatches on the predicted case/band and constructs the matching scaled
/// family. Empty only outside every band, which admissible queries never hit.
std::optional<Witness> build_witness(const WidthQuery& query);

/// Single-ball inclusion family by ball type (V_{m,k}, V_{m,1}, V_{1,k} or V_{1,1}).
Witness single_ball_witness(const BallSpec& ball, const ExponentPair& target, std::int64_t n);

/// Every enumerated/sampled vertex v must satisfy
/// mixed_norm(scale*v, exps_i) <= factor * nu_i * (1+tol) for both balls.
bool verify_witness(const Witness& w, const BallSpec& b1, const BallSpec& b2, double tol);

struct VerifyDetail {
  bool ok = true;
  std::int64_t first_bad = -1;
  double worst_excess = 0.0;  // max over vertices of norm/(factor*nu) - 1
};
VerifyDetail verify_witness_detail(const Witness& w, const BallSpec& b1, const BallSpec& b2,
                                   double tol);

}  // namespace widthlab
