#include "widthlab/kernels.hpp"

#include <cmath>

#include "widthlab/parallel.hpp"

namespace widthlab::kernels {

namespace {

// (q,sigma)-norm of the residual of column `idx` of `points` against `basis`.
double residual_norm_one(const double* x, std::int64_t ambient, const std::vector<double>& basis,
                         std::int64_t dim, const Shape& shape, const ExponentPair& target) {
  MixedMatrix res(shape);
  double* r = res.data();
  for (std::int64_t t = 0; t < ambient; ++t) r[t] = x[t];
  for (std::int64_t c = 0; c < dim; ++c) {
    const double* b = basis.data() + c * ambient;
    double dot = 0.0;
    for (std::int64_t t = 0; t < ambient; ++t) dot += b[t] * x[t];
    for (std::int64_t t = 0; t < ambient; ++t) r[t] -= dot * b[t];
  }
  return mixed_norm(res, target);
}

// ||v||^2 - ||B^T v||^2 computed on the r x l support only.
double sq_residual_pattern(const VertexFamily::Pattern& pat, std::int64_t m, std::int64_t ambient,
                           const std::vector<double>& basis, std::int64_t dim) {
  const std::size_t r = pat.rows.size(), l = pat.cols.size();
  double sq = static_cast<double>(r * l);
  for (std::int64_t c = 0; c < dim; ++c) {
    const double* b = basis.data() + c * ambient;
    double dot = 0.0;
    for (std::size_t bb = 0; bb < l; ++bb) {
      const double* col = b + pat.cols[bb] * m;
      double inner = 0.0;
      for (std::size_t aa = 0; aa < r; ++aa) inner += pat.srow[aa] * col[pat.rows[aa]];
      dot += pat.scol[bb] * inner;
    }
    sq -= dot * dot;
  }
  return sq;
}

}  // namespace

double sup_residual_norm_serial(const std::vector<double>& points, std::int64_t npts,
                                const std::vector<double>& basis, std::int64_t dim, const Shape& shape,
                                const ExponentPair& target) {
  const std::int64_t ambient = shape.size();
  double top = 0.0;
  for (std::int64_t i = 0; i < npts; ++i) {
    top = std::max(top, residual_norm_one(points.data() + i * ambient, ambient, basis, dim, shape, target));
  }
  return top;
}

double sup_residual_norm(const std::vector<double>& points, std::int64_t npts,
                         const std::vector<double>& basis, std::int64_t dim, const Shape& shape,
                         const ExponentPair& target) {
#ifdef _OPENMP
  const std::int64_t ambient = shape.size();
  double top = 0.0;
#pragma omp parallel for schedule(static) reduction(max : top) num_threads(effective_threads())
  for (std::int64_t i = 0; i < npts; ++i) {
    const double d = residual_norm_one(points.data() + i * ambient, ambient, basis, dim, shape, target);
    top = std::max(top, d);
  }
  return top;
#else
  return sup_residual_norm_serial(points, npts, basis, dim, shape, target);
#endif
}

double family_sq_residual_sum_serial(const VertexFamily& family, const std::vector<double>& basis,
                                     std::int64_t dim) {
  const std::int64_t count = family.emit_count();
  const std::int64_t m = family.shape().m;
  const std::int64_t ambient = family.shape().size();
  VertexFamily::Pattern pat;
  double sum = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    family.pattern(i, &pat);
    sum += sq_residual_pattern(pat, m, ambient, basis, dim);
  }
  return sum;
}

double family_sq_residual_sum(const VertexFamily& family, const std::vector<double>& basis,
                              std::int64_t dim) {
#ifdef _OPENMP
  const std::int64_t count = family.emit_count();
  const std::int64_t m = family.shape().m;
  const std::int64_t ambient = family.shape().size();
  double sum = 0.0;
#pragma omp parallel num_threads(effective_threads())
  {
    VertexFamily::Pattern pat;  // per-thread scratch
#pragma omp for schedule(static) reduction(+ : sum)
    for (std::int64_t i = 0; i < count; ++i) {
      family.pattern(i, &pat);
      sum += sq_residual_pattern(pat, m, ambient, basis, dim);
    }
  }
  return sum;
#else
  return family_sq_residual_sum_serial(family, basis, dim);
#endif
}

}  // namespace widthlab::kernels
