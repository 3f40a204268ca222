#pragma once

// Data-parallel inner loops shared by the numeric module and the suites.
// Each kernel has an OpenMP build (used when available) and a plain serial
// reference; the tests hold them equal and bench_kernels times them side by
// side. Reductions are max/min/all-true so thread count never changes results.

#include <cstdint>
#include <vector>

#include "widthlab/extremal.hpp"
#include "widthlab/mixed_norm.hpp"

namespace widthlab::kernels {

/// max over points of the (q,sigma)-norm of the l2 residual x - B B^T x.
/// `points` is ambient x npts column-major, `basis` ambient x dim column-major.
double sup_residual_norm(const std::vector<double>& points, std::int64_t npts,
                         const std::vector<double>& basis, std::int64_t dim, const Shape& shape,
                         const ExponentPair& target);
double sup_residual_norm_serial(const std::vector<double>& points, std::int64_t npts,
                                const std::vector<double>& basis, std::int64_t dim, const Shape& shape,
                                const ExponentPair& target);

/// Sum over enumerated/sampled family vertices of squared l2 residual norm.
double family_sq_residual_sum(const VertexFamily& family, const std::vector<double>& basis,
                              std::int64_t dim);
double family_sq_residual_sum_serial(const VertexFamily& family, const std::vector<double>& basis,
                                     std::int64_t dim);

}  // namespace widthlab::kernels
