#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "widthlab/extremal.hpp"
#include "widthlab/mixed_norm.hpp"
#include "widthlab/rng.hpp"

namespace widthlab {

/// Column-orthonormal basis of a subspace of R^{mk} (column-major storage).
struct Subspace {
  std::int64_t ambient = 0;
  std::int64_t dim = 0;
  std::vector<double> basis;  // ambient x dim

  void validate(double tol = 1e-10) const;
};

Subspace zero_subspace(std::int64_t ambient);
Subspace random_orthonormal(std::int64_t ambient, std::int64_t dim, Rng& rng);

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best) : std::runtime_error(what), best_value(best) {}
  double best_value;  // still a valid upper bound on the distance
};

struct DistanceResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  std::vector<double> coeffs;
};

/// min over y in span(L) of ||x - y||_{q,sigma}. Exact orthogonal projection at
/// (2,2); otherwise convex descent over the n coefficients to first-order
/// stationarity <= tol. `init` warm-starts the coefficients; the result never
/// exceeds the value at the warm start.
DistanceResult try_dist_to_subspace(const MixedMatrix& x, const Subspace& L, const ExponentPair& target,
                                    double tol = 1e-9, int max_iters = 2000,
                                    const std::vector<double>* init = nullptr);

/// Throwing wrapper: ConvergenceError (carrying the best value) on nonconvergence.
double dist_to_subspace(const MixedMatrix& x, const Subspace& L, const ExponentPair& target,
                        double tol = 1e-9, int max_iters = 2000);

struct WidthBudget {
  int restarts = 32;
  int iterations = 2000;
};

struct RestartLog {
  std::uint64_t index = 0;
  std::vector<double> best_values;  // best-so-far per iteration; nonincreasing
  double final_value = std::numeric_limits<double>::infinity();
};

struct WidthRun {
  // inputs
  std::string source;  // provenance note for the report
  std::vector<MixedMatrix> points;
  Shape shape;
  std::int64_t n = 0;
  ExponentPair target;
  WidthBudget budget;
  std::uint64_t seed = 0;
  std::optional<Subspace> warm_start;  // optional initial basis for restart 0

  // outputs
  bool completed = false;
  double upper_bound = std::numeric_limits<double>::infinity();
  Subspace best;
  std::vector<std::vector<double>> best_coeffs;  // per-point coefficients at `best`
  std::vector<RestartLog> logs;
};

/// Minimizes the soft-max of subspace distances over n-dimensional bases with
/// seeded random restarts. The result is a certified upper bound on d_n of the
/// point set (and of its convex hull).
WidthRun estimate_width(WidthRun run);

/// Runs estimate_width over ascending n values, warm-starting each run with the
/// previous best basis extended by one column; values are nonincreasing in n.
std::vector<WidthRun> estimate_width_chain(const WidthRun& base, const std::vector<std::int64_t>& n_values);

/// Boundary points of nu*B_{p,theta}: all signed axis matrices, orbit images of
/// block patterns, then normalized heavy-tailed directions, `count` in total
/// (at least the deterministic prefix). Every point has norm nu to 1e-10.
std::vector<MixedMatrix> ball_boundary_sample(const BallSpec& ball, std::int64_t count, std::uint64_t seed);

/// Run over a family's vertices: the result certifies d_n of the polytope.
WidthRun make_family_run(const VertexFamily& family, double scale, std::int64_t n,
                         const ExponentPair& target, const WidthBudget& budget, std::uint64_t seed);

/// Run over a boundary sample: the sup is evaluated on finitely many samples
/// only, so the result is labeled a heuristic upper bound for the ball.
WidthRun make_ball_sample_run(const BallSpec& ball, std::int64_t n, const ExponentPair& target,
                              std::int64_t count, const WidthBudget& budget, std::uint64_t seed);

/// Exact full-orbit mean of squared l_{2,2} distance to span(L).
/// Brute enumeration when the family is small; exact sign/support averaging
/// otherwise (the statistic is linear over the orbit).
double orbit_mean_sq_distance(const VertexFamily& family, const Subspace& L);

/// Brute-force enumerated path, for cross-checks (family must be full-mode).
double orbit_mean_sq_distance_enumerated(const VertexFamily& family, const Subspace& L);

struct SandwichReport {
  WidthQuery query;
  Witness witness;
  double lower_avg = 0.0;     // averaging certificate, nested into (q, sigma)
  double upper_numeric = 0.0; // estimate_width on witness vertices + axis points
  std::int64_t points_used = 0;
  std::uint64_t seed = 0;
  bool ok = false;
};

/// Builds the witness, certifies the averaging lower bound, runs the numeric
/// upper-bound search, and asserts lower <= upper * (1 + tol).
SandwichReport sandwich_check(const WidthQuery& query, const WidthBudget& budget, std::uint64_t seed,
                              double tol = 1e-6);

}  // namespace widthlab
