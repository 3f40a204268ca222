#include "widthlab/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "widthlab/kernels.hpp"
#include "widthlab/parallel.hpp"

namespace widthlab {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd to_matrix(const Subspace& L) {
  return Eigen::Map<const MatrixXd>(L.basis.data(), L.ambient, L.dim);
}

Subspace from_matrix(const MatrixXd& B) {
  Subspace L;
  L.ambient = B.rows();
  L.dim = B.cols();
  L.basis.assign(B.data(), B.data() + B.size());
  return L;
}

MatrixXd orthonormalize(const MatrixXd& B) {
  if (B.cols() == 0) return B;
  Eigen::HouseholderQR<MatrixXd> qr(B);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(B.rows(), B.cols());
  // drift guard: re-factor once if the columns degraded
  if ((Q.transpose() * Q - MatrixXd::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    Eigen::HouseholderQR<MatrixXd> qr2(Q);
    Q = qr2.householderQ() * MatrixXd::Identity(Q.rows(), Q.cols());
  }
  return Q;
}

// Gradient (subgradient at kinks) of y -> ||y||_{q,sigma} at y != 0.
void norm_gradient(const MixedMatrix& y, const ExponentPair& e, double norm_value, MixedMatrix* out) {
  const std::int64_t m = y.rows(), k = y.cols();
  for (double* g = out->data(); g != out->data() + out->size(); ++g) *g = 0.0;
  if (norm_value <= 0.0) return;

  std::vector<double> col(static_cast<std::size_t>(k));
  for (std::int64_t j = 0; j < k; ++j) col[static_cast<std::size_t>(j)] = column_norm(y, j, e.p);

  const bool theta_inf = e.theta.is_infinite();
  const double sigma = theta_inf ? 0.0 : e.theta.value();
  const bool p_inf = e.p.is_infinite();
  const double q = p_inf ? 0.0 : e.p.value();

  std::int64_t jstar = 0;
  if (theta_inf) {
    for (std::int64_t j = 1; j < k; ++j) {
      if (col[static_cast<std::size_t>(j)] > col[static_cast<std::size_t>(jstar)]) jstar = j;
    }
  }
  for (std::int64_t j = 0; j < k; ++j) {
    const double sj = col[static_cast<std::size_t>(j)];
    if (sj <= 0.0) continue;
    double outer;  // d||.||_theta / d s_j
    if (theta_inf) {
      if (j != jstar) continue;
      outer = 1.0;
    } else {
      outer = std::pow(sj / norm_value, sigma - 1.0);
    }
    if (p_inf) {
      std::int64_t istar = 0;
      for (std::int64_t i = 1; i < m; ++i) {
        if (std::fabs(y.at(i, j)) > std::fabs(y.at(istar, j))) istar = i;
      }
      out->at(istar, j) = outer * (y.at(istar, j) >= 0.0 ? 1.0 : -1.0);
    } else {
      for (std::int64_t i = 0; i < m; ++i) {
        const double a = y.at(i, j);
        if (a == 0.0) continue;
        out->at(i, j) = outer * std::pow(std::fabs(a) / sj, q - 1.0) * (a >= 0.0 ? 1.0 : -1.0);
      }
    }
  }
}

double residual_into(const MixedMatrix& x, const MatrixXd& B, const VectorXd& c, MixedMatrix* res) {
  Eigen::Map<const VectorXd> xv(x.data(), x.size());
  Eigen::Map<VectorXd> rv(res->data(), res->size());
  rv = xv - B * c;
  return 0.0;
}

}  // namespace

void Subspace::validate(double tol) const {
  if (dim < 0 || dim > ambient) throw std::invalid_argument("subspace dim must lie in [0, ambient]");
  if (static_cast<std::int64_t>(basis.size()) != ambient * dim) {
    throw std::invalid_argument("basis storage size mismatch");
  }
  if (dim == 0) return;
  const MatrixXd B = to_matrix(*this);
  const double drift = (B.transpose() * B - MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (drift > tol) throw std::invalid_argument("basis columns are not orthonormal");
}

Subspace zero_subspace(std::int64_t ambient) {
  Subspace L;
  L.ambient = ambient;
  L.dim = 0;
  return L;
}

Subspace random_orthonormal(std::int64_t ambient, std::int64_t dim, Rng& rng) {
  MatrixXd G(ambient, dim);
  for (std::int64_t c = 0; c < dim; ++c) {
    for (std::int64_t t = 0; t < ambient; ++t) G(t, c) = rng.normal();
  }
  return from_matrix(orthonormalize(G));
}

DistanceResult try_dist_to_subspace(const MixedMatrix& x, const Subspace& L, const ExponentPair& target,
                                    double tol, int max_iters, const std::vector<double>* init) {
  if (L.ambient != x.size()) throw std::invalid_argument("subspace ambient dimension mismatch");
  DistanceResult out;
  if (L.dim == 0) {
    out.value = mixed_norm(x, target);
    return out;
  }
  const MatrixXd B = to_matrix(L);
  Eigen::Map<const VectorXd> xv(x.data(), x.size());

  const bool euclid = target.p.recip() == 0.5 && target.theta.recip() == 0.5;
  VectorXd c = B.transpose() * xv;  // exact minimizer at (2,2); warm start otherwise
  if (euclid) {
    out.value = (xv - B * c).norm();
    out.coeffs.assign(c.data(), c.data() + c.size());
    return out;
  }

  MixedMatrix res(x.shape());
  MixedMatrix grad(x.shape());
  const auto f_at = [&](const VectorXd& cc) {
    residual_into(x, B, cc, &res);
    return mixed_norm(res, target);
  };

  double f = f_at(c);
  if (init && static_cast<std::int64_t>(init->size()) == L.dim) {
    VectorXd ci = Eigen::Map<const VectorXd>(init->data(), L.dim);
    const double fi = f_at(ci);
    if (fi < f) {
      c = ci;
      f = fi;
    }
  }

  double step = 1.0;
  const double gtol = std::max(tol, 1e-12);
  int it = 0;
  for (; it < max_iters; ++it) {
    residual_into(x, B, c, &res);
    const double fc = mixed_norm(res, target);
    if (fc <= gtol) {  // x essentially inside the span
      f = fc;
      out.converged = true;
      break;
    }
    norm_gradient(res, target, fc, &grad);
    Eigen::Map<const VectorXd> gv(grad.data(), grad.size());
    VectorXd gc = -(B.transpose() * gv);
    const double gnorm = gc.norm();
    if (gnorm <= gtol) {
      f = fc;
      out.converged = true;
      break;
    }
    // backtracking descent step on the coefficients
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls) {
      VectorXd cn = c - step * gc;
      const double fn = f_at(cn);
      if (fn < fc - 1e-4 * step * gnorm * gnorm) {
        c = cn;
        f = fn;
        step = std::min(step * 1.5, 1e6);
        moved = true;
        break;
      }
      step *= 0.5;
      if (step < 1e-18) break;
    }
    if (!moved) {
      out.converged = gnorm <= std::max(1e-7, gtol * 10);  // stalled at a kink
      break;
    }
  }
  if (it == max_iters) out.converged = false;
  out.iterations = it;
  out.value = f;
  out.coeffs.assign(c.data(), c.data() + c.size());
  return out;
}

double dist_to_subspace(const MixedMatrix& x, const Subspace& L, const ExponentPair& target,
                        double tol, int max_iters) {
  const DistanceResult r = try_dist_to_subspace(x, L, target, tol, max_iters);
  if (!r.converged) {
    throw ConvergenceError("distance minimization did not reach stationarity", r.value);
  }
  return r.value;
}

namespace {

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  MatrixXd basis;
  RestartLog log;
};

// Exact sup over points at basis B. Points are visited in decreasing order of
// their cheap proxy distance (the (q,sigma)-norm of the l2 residual); once the
// proxy falls below the best exact value the rest cannot raise the sup, since
// the solver never exceeds its projection init.
double exact_sup(const std::vector<MixedMatrix>& points, const MatrixXd& B, const ExponentPair& target,
                 const std::vector<std::vector<double>>* warm, std::vector<std::vector<double>>* coeffs_out) {
  Subspace L = from_matrix(B);
  const std::size_t npts = points.size();
  if (coeffs_out) coeffs_out->assign(npts, {});
  std::vector<double> proxy(npts);
  MixedMatrix res(points.empty() ? Shape(1, 1) : points[0].shape());
  for (std::size_t i = 0; i < npts; ++i) {
    Eigen::Map<const VectorXd> xv(points[i].data(), points[i].size());
    Eigen::Map<VectorXd> rv(res.data(), res.size());
    rv = xv - B * (B.transpose() * xv);
    proxy[i] = mixed_norm(res, target);
    if (coeffs_out) {
      const VectorXd c = B.transpose() * xv;
      (*coeffs_out)[i].assign(c.data(), c.data() + c.size());
    }
  }
  std::vector<std::size_t> order(npts);
  for (std::size_t i = 0; i < npts; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return proxy[a] > proxy[b]; });

  double top = 0.0;
  for (std::size_t oi = 0; oi < npts; ++oi) {
    const std::size_t i = order[oi];
    if (proxy[i] <= top) break;
    const std::vector<double>* init = (warm && i < warm->size() && !(*warm)[i].empty()) ? &(*warm)[i] : nullptr;
    const DistanceResult r = try_dist_to_subspace(points[i], L, target, 1e-10, 400, init);
    top = std::max(top, r.value);
    if (coeffs_out) (*coeffs_out)[i] = r.coeffs;
  }
  return top;
}

RestartOutcome run_restart(const std::vector<MixedMatrix>& points, const std::vector<double>& flat,
                           const Shape& shape, std::int64_t n, const ExponentPair& target,
                           int iterations, Rng rng, const MatrixXd* warm_basis,
                           const std::vector<std::vector<double>>* warm_coeffs) {
  const std::int64_t ambient = shape.size();
  const std::int64_t npts = static_cast<std::int64_t>(points.size());
  Eigen::Map<const MatrixXd> P(flat.data(), ambient, npts);

  MatrixXd B;
  if (warm_basis) {
    B = *warm_basis;
  } else {
    MatrixXd G(ambient, n);
    for (std::int64_t c = 0; c < n; ++c) {
      for (std::int64_t t = 0; t < ambient; ++t) G(t, c) = rng.normal();
    }
    B = orthonormalize(G);
  }
  const MatrixXd B_init = B;

  MixedMatrix res(shape), grad(shape);
  VectorXd d(npts), w(npts);
  MatrixXd G(ambient, n);

  const auto proxy_distances = [&](const MatrixXd& BB, VectorXd* dd) {
    const MatrixXd C = BB.transpose() * P;
    const MatrixXd R = P - BB * C;
    for (std::int64_t i = 0; i < npts; ++i) {
      std::copy(R.col(i).data(), R.col(i).data() + ambient, res.data());
      (*dd)(i) = mixed_norm(res, target);
    }
  };

  proxy_distances(B, &d);
  double best_proxy = d.maxCoeff();
  MatrixXd best_B = B;

  RestartOutcome out;
  out.log.best_values.reserve(static_cast<std::size_t>(iterations) + 1);
  out.log.best_values.push_back(best_proxy);

  double tau = std::max(1e-6, 0.1 * best_proxy);
  double step = 0.1;
  int plateau = 0;
  double plateau_ref = best_proxy;

  for (int it = 0; it < iterations; ++it) {
    // soft-max weights at temperature tau
    const double dmax = d.maxCoeff();
    double wsum = 0.0;
    for (std::int64_t i = 0; i < npts; ++i) {
      w(i) = std::exp((d(i) - dmax) / tau);
      wsum += w(i);
    }
    w /= wsum;
    const double fsoft = dmax + tau * std::log(wsum / npts);

    // gradient of the soft objective in the basis
    const MatrixXd C = B.transpose() * P;
    G.setZero();
    for (std::int64_t i = 0; i < npts; ++i) {
      if (w(i) < 1e-14 || d(i) <= 0.0) continue;
      Eigen::Map<VectorXd> rv(res.data(), ambient);
      rv = P.col(i) - B * C.col(i);
      norm_gradient(res, target, d(i), &grad);
      Eigen::Map<const VectorXd> gv(grad.data(), ambient);
      const VectorXd btg = B.transpose() * gv;
      G.noalias() -= w(i) * (gv * C.col(i).transpose() + P.col(i) * btg.transpose());
    }

    bool moved = false;
    for (int ls = 0; ls < 12; ++ls) {
      const MatrixXd Bn = orthonormalize(B - step * G);
      VectorXd dn(npts);
      proxy_distances(Bn, &dn);
      const double dnmax = dn.maxCoeff();
      double wsn = 0.0;
      for (std::int64_t i = 0; i < npts; ++i) wsn += std::exp((dn(i) - dnmax) / tau);
      const double fn = dnmax + tau * std::log(wsn / npts);
      if (fn < fsoft - 1e-12) {
        B = Bn;
        d = dn;
        step = std::min(step * 1.4, 10.0);
        moved = true;
        if (dnmax < best_proxy) {
          best_proxy = dnmax;
          best_B = B;
        }
        break;
      }
      step *= 0.5;
      if (step < 1e-14) break;
    }
    out.log.best_values.push_back(best_proxy);
    if (!moved) step = std::max(step, 1e-12);

    // temperature halves on plateau: relative improvement < 1e-7 over 50 iters
    if (++plateau >= 50) {
      if (best_proxy > plateau_ref * (1.0 - 1e-7)) tau = std::max(tau * 0.5, 1e-9);
      plateau = 0;
      plateau_ref = best_proxy;
    }
  }

  // Certify with exact distances at the candidate bases; min is still an
  // upper bound because every candidate is a genuine subspace.
  double v_best = exact_sup(points, best_B, target, nullptr, nullptr);
  out.value = v_best;
  out.basis = best_B;
  const double v_init = exact_sup(points, B_init, target, warm_coeffs, nullptr);
  if (v_init < out.value) {
    out.value = v_init;
    out.basis = B_init;
  }
  out.log.final_value = out.value;
  return out;
}

}  // namespace

WidthRun estimate_width(WidthRun run) {
  if (run.budget.restarts < 1 || run.budget.iterations < 1) {
    throw std::invalid_argument("width run needs a positive budget");
  }
  if (run.points.empty()) throw std::invalid_argument("width run needs at least one point");
  const std::int64_t ambient = run.shape.size();
  for (const MixedMatrix& p : run.points) {
    if (p.shape() != run.shape) throw std::invalid_argument("point shape mismatch");
  }
  if (run.n < 0) throw std::invalid_argument("need n >= 0");

  if (run.n >= ambient) {
    MatrixXd I = MatrixXd::Identity(ambient, ambient);
    run.best = from_matrix(I);
    run.upper_bound = 0.0;
    run.completed = true;
    RestartLog lg;
    lg.best_values = {0.0};
    lg.final_value = 0.0;
    run.logs = {lg};
    return run;
  }
  if (run.n == 0) {
    double top = 0.0;
    for (const MixedMatrix& p : run.points) top = std::max(top, mixed_norm(p, run.target));
    run.best = zero_subspace(ambient);
    run.upper_bound = top;
    run.completed = true;
    RestartLog lg;
    lg.best_values = {top};
    lg.final_value = top;
    run.logs = {lg};
    return run;
  }

  std::vector<double> flat(static_cast<std::size_t>(ambient) * run.points.size());
  for (std::size_t i = 0; i < run.points.size(); ++i) {
    std::copy(run.points[i].data(), run.points[i].data() + ambient,
              flat.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(ambient)));
  }

  MatrixXd warm;
  const bool have_warm = run.warm_start.has_value();
  if (have_warm) {
    run.warm_start->validate();
    if (run.warm_start->ambient != ambient || run.warm_start->dim != run.n) {
      throw std::invalid_argument("warm start basis has wrong dimensions");
    }
    warm = to_matrix(*run.warm_start);
  }

  const int R = run.budget.restarts;
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(R));
  const Rng root(run.seed);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
#endif
  for (int r = 0; r < R; ++r) {
    const bool use_warm = have_warm && r == 0;
    outcomes[static_cast<std::size_t>(r)] =
        run_restart(run.points, flat, run.shape, run.n, run.target, run.budget.iterations,
                    root.stream(static_cast<std::uint64_t>(r)), use_warm ? &warm : nullptr,
                    use_warm && !run.best_coeffs.empty() ? &run.best_coeffs : nullptr);
    outcomes[static_cast<std::size_t>(r)].log.index = static_cast<std::uint64_t>(r);
  }

  int argbest = 0;
  for (int r = 1; r < R; ++r) {
    if (outcomes[static_cast<std::size_t>(r)].value < outcomes[static_cast<std::size_t>(argbest)].value) {
      argbest = r;
    }
  }
  run.upper_bound = outcomes[static_cast<std::size_t>(argbest)].value;
  run.best = from_matrix(outcomes[static_cast<std::size_t>(argbest)].basis);
  exact_sup(run.points, outcomes[static_cast<std::size_t>(argbest)].basis, run.target, nullptr,
            &run.best_coeffs);
  run.logs.clear();
  for (auto& o : outcomes) run.logs.push_back(std::move(o.log));
  run.completed = true;
  return run;
}

std::vector<WidthRun> estimate_width_chain(const WidthRun& base, const std::vector<std::int64_t>& n_values) {
  std::vector<WidthRun> out;
  Rng ext_rng = Rng(base.seed).stream(0xc01dULL);
  for (std::size_t s = 0; s < n_values.size(); ++s) {
    WidthRun run = base;
    run.n = n_values[s];
    if (!out.empty() && n_values[s] > n_values[s - 1]) {
      // extend the previous best basis by fresh orthonormalized columns
      const WidthRun& prev = out.back();
      const std::int64_t ambient = run.shape.size();
      if (run.n <= ambient && prev.best.dim <= run.n) {
        MatrixXd B(ambient, run.n);
        B.leftCols(prev.best.dim) = to_matrix(prev.best);
        for (std::int64_t c = prev.best.dim; c < run.n; ++c) {
          for (std::int64_t t = 0; t < ambient; ++t) B(t, c) = ext_rng.normal();
        }
        // re-orthonormalize only the appended block so the old span is kept
        for (std::int64_t c = prev.best.dim; c < run.n; ++c) {
          for (std::int64_t rpt = 0; rpt < 2; ++rpt) {
            for (std::int64_t b = 0; b < c; ++b) {
              const double dot = B.col(c).dot(B.col(b));
              B.col(c) -= dot * B.col(b);
            }
          }
          const double nrm = B.col(c).norm();
          if (nrm > 1e-12) B.col(c) /= nrm;
        }
        run.warm_start = from_matrix(B);
        run.best_coeffs = prev.best_coeffs;
        for (auto& c : run.best_coeffs) c.resize(static_cast<std::size_t>(run.n), 0.0);
      }
    }
    out.push_back(estimate_width(std::move(run)));
  }
  return out;
}

std::vector<MixedMatrix> ball_boundary_sample(const BallSpec& ball, std::int64_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("need count >= 1");
  const Shape shape = ball.shape;
  std::vector<MixedMatrix> pts;
  const auto push_normalized = [&](MixedMatrix x) {
    const double nrm = mixed_norm(x, ball.exps);
    if (nrm <= 0.0) return false;
    const double f = ball.nu / nrm;
    for (double* e = x.data(); e != x.data() + x.size(); ++e) *e *= f;
    pts.push_back(std::move(x));
    return true;
  };

  // signed axis points first
  for (std::int64_t j = 0; j < shape.k; ++j) {
    for (std::int64_t i = 0; i < shape.m; ++i) {
      MixedMatrix plus(shape);
      plus.at(i, j) = ball.nu;
      MixedMatrix minus(shape);
      minus.at(i, j) = -ball.nu;
      pts.push_back(std::move(plus));
      pts.push_back(std::move(minus));
    }
  }

  Rng rng(seed);
  // orbit images of block patterns (includes a rank-one sign matrix at (m,k))
  std::vector<std::pair<std::int64_t, std::int64_t>> blocks = {
      {1, 1}, {shape.m, 1}, {1, shape.k}, {shape.m, shape.k}};
  for (const auto& [r, l] : blocks) {
    SignedPermutation g = random_gamma(shape, rng);
    push_normalized(apply_gamma(g, e_matrix(shape, r, l)));
  }

  for (std::int64_t t = 0; t < count; ++t) {
    Rng draw = Rng(seed).stream(static_cast<std::uint64_t>(t) + 17);
    MixedMatrix x(shape);
    bool nonzero = false;
    for (double* e = x.data(); e != x.data() + x.size(); ++e) {
      *e = draw.cauchy();
      nonzero = nonzero || *e != 0.0;
    }
    if (!nonzero) x.at(0, 0) = 1.0;
    push_normalized(std::move(x));
  }
  return pts;
}

WidthRun make_family_run(const VertexFamily& family, double scale, std::int64_t n,
                         const ExponentPair& target, const WidthBudget& budget, std::uint64_t seed) {
  WidthRun run;
  run.source = family.mode() == VertexFamily::Mode::full
                   ? "orbit-vertices (certified for the hull)"
                   : "orbit-vertex sample (heuristic upper bound)";
  run.shape = family.shape();
  run.n = n;
  run.target = target;
  run.budget = budget;
  run.seed = seed;
  const std::int64_t count = family.emit_count();
  run.points.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    MixedMatrix v = family.vertex(i);
    for (double* e = v.data(); e != v.data() + v.size(); ++e) *e *= scale;
    run.points.push_back(std::move(v));
  }
  return run;
}

WidthRun make_ball_sample_run(const BallSpec& ball, std::int64_t n, const ExponentPair& target,
                              std::int64_t count, const WidthBudget& budget, std::uint64_t seed) {
  WidthRun run;
  run.source = "ball-boundary sample (heuristic upper bound)";
  run.shape = ball.shape;
  run.n = n;
  run.target = target;
  run.budget = budget;
  run.seed = seed;
  run.points = ball_boundary_sample(ball, count, seed);
  return run;
}

double orbit_mean_sq_distance_enumerated(const VertexFamily& family, const Subspace& L) {
  if (family.mode() != VertexFamily::Mode::full) {
    throw std::invalid_argument("enumerated mean needs a full-mode family");
  }
  L.validate();
  const double total = kernels::family_sq_residual_sum(family, L.basis, L.dim);
  return total / static_cast<double>(family.emit_count());
}

double orbit_mean_sq_distance(const VertexFamily& family, const Subspace& L) {
  L.validate();
  const Shape shape = family.shape();
  if (L.ambient != shape.size()) throw std::invalid_argument("ambient dimension mismatch");
  const std::int64_t m = shape.m, k = shape.k, r = family.r(), l = family.l();

  if (family.mode() == VertexFamily::Mode::full && family.distinct_count() <= 512) {
    return orbit_mean_sq_distance_enumerated(family, L);
  }

  // Exact sign-averaged residual: mean ||B^T v||^2 over the orbit reduces to
  // support sums of G(i,j) = sum_c B(i+j*m, c)^2.
  std::vector<double> G(static_cast<std::size_t>(m * k), 0.0);
  for (std::int64_t c = 0; c < L.dim; ++c) {
    const double* b = L.basis.data() + c * L.ambient;
    for (std::int64_t t = 0; t < m * k; ++t) G[static_cast<std::size_t>(t)] += b[t] * b[t];
  }
  const double rl = static_cast<double>(r * l);

  // support-pair count
  const auto comb_count = [](std::int64_t n_, std::int64_t r_) {
    double c = 1.0;
    for (std::int64_t i = 1; i <= r_; ++i) c = c * static_cast<double>(n_ - r_ + i) / static_cast<double>(i);
    return c;
  };
  const double supports = comb_count(m, r) * comb_count(k, l);
  if (supports > 4096) {
    // all-support average: each entry appears with probability (r/m)(l/k)
    double gsum = 0.0;
    for (double g : G) gsum += g;
    return rl - (rl / static_cast<double>(m * k)) * gsum;
  }

  // enumerate column supports, then row supports
  std::vector<std::int64_t> T(static_cast<std::size_t>(l));
  std::vector<std::int64_t> S(static_cast<std::size_t>(r));
  std::vector<double> row_agg(static_cast<std::size_t>(m));
  const auto first_comb = [](std::vector<std::int64_t>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<std::int64_t>(i);
  };
  const auto next_comb = [](std::vector<std::int64_t>& v, std::int64_t n_) {
    const std::int64_t r_ = static_cast<std::int64_t>(v.size());
    std::int64_t i = r_ - 1;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == n_ - r_ + i) --i;
    if (i < 0) return false;
    ++v[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < r_; ++j) {
      v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
  };

  double acc = 0.0;
  double pairs = 0.0;
  first_comb(T);
  do {
    for (std::int64_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::int64_t b = 0; b < l; ++b) s += G[static_cast<std::size_t>(i + T[static_cast<std::size_t>(b)] * m)];
      row_agg[static_cast<std::size_t>(i)] = s;
    }
    first_comb(S);
    do {
      double s = 0.0;
      for (std::int64_t a = 0; a < r; ++a) s += row_agg[static_cast<std::size_t>(S[static_cast<std::size_t>(a)])];
      acc += s;
      pairs += 1.0;
    } while (next_comb(S, m));
  } while (next_comb(T, k));

  return rl - acc / pairs;
}

SandwichReport sandwich_check(const WidthQuery& query, const WidthBudget& budget, std::uint64_t seed,
                              double tol) {
  query.validate();
  SandwichReport rep;
  rep.query = query;
  rep.seed = seed;

  auto w = build_witness(query);
  if (!w) throw std::logic_error("admissible query produced no witness");
  rep.witness = *w;
  const VertexFamily& fam = w->family;
  if (fam.mode() != VertexFamily::Mode::full) {
    throw std::invalid_argument("sandwich check needs a fully enumerable witness family");
  }

  const Shape shape = query.shape;
  const double uq = query.target.p.recip(), us = query.target.theta.recip();
  const double nest = std::exp((uq - 0.5) * std::log(static_cast<double>(shape.m)) +
                               (us - 0.5) * std::log(static_cast<double>(shape.k)));
  rep.lower_avg = w->scale * averaging_bound(shape, fam.r(), fam.l(), query.n) * nest;

  WidthRun run;
  run.source = "sandwich:" + lemma_name(w->lemma);
  run.shape = shape;
  run.n = query.n;
  run.target = query.target;
  run.budget = budget;
  run.seed = seed;
  const std::int64_t count = fam.emit_count();
  run.points.reserve(static_cast<std::size_t>(count) + 2 * static_cast<std::size_t>(shape.size()));
  for (std::int64_t i = 0; i < count; ++i) {
    MixedMatrix v = fam.vertex(i);
    for (double* e = v.data(); e != v.data() + v.size(); ++e) *e *= w->scale;
    run.points.push_back(std::move(v));
  }
  const double numin = std::min(query.ball(0).nu, query.ball(1).nu);
  for (std::int64_t j = 0; j < shape.k; ++j) {
    for (std::int64_t i = 0; i < shape.m; ++i) {
      MixedMatrix plus(shape);
      plus.at(i, j) = numin;
      MixedMatrix minus(shape);
      minus.at(i, j) = -numin;
      run.points.push_back(std::move(plus));
      run.points.push_back(std::move(minus));
    }
  }
  rep.points_used = static_cast<std::int64_t>(run.points.size());

  const WidthRun done = estimate_width(std::move(run));
  rep.upper_numeric = done.upper_bound;
  rep.ok = rep.lower_avg <= rep.upper_numeric * (1.0 + tol) + 1e-12;
  return rep;
}

}  // namespace widthlab
