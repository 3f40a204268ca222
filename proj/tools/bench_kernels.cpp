// Times the OpenMP kernels against their serial references on a synthetic
// workload and checks they agree. Build with/without WIDTHLAB_OPENMP to see
// the difference; WIDTHLAB_THREADS caps the parallel side.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "widthlab/extremal.hpp"
#include "widthlab/kernels.hpp"
#include "widthlab/numeric.hpp"
#include "widthlab/parallel.hpp"
#include "widthlab/rng.hpp"

using namespace widthlab;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const Shape shape(16, 16);
  const std::int64_t ambient = shape.size();
  const std::int64_t npts = 4096;
  const std::int64_t dim = 24;
  Rng rng(7);

  std::vector<double> points(static_cast<std::size_t>(ambient * npts));
  for (double& v : points) v = rng.normal();
  const Subspace L = random_orthonormal(ambient, dim, rng);
  const ExponentPair target = ExponentPair::of(4.0, 3.0);

  std::printf("threads: %d\n", effective_threads());

  double a = 0, b = 0;
  const double t_par = time_ms(
      [&] { a = kernels::sup_residual_norm(points, npts, L.basis, dim, shape, target); }, 5);
  const double t_ser = time_ms(
      [&] { b = kernels::sup_residual_norm_serial(points, npts, L.basis, dim, shape, target); }, 5);
  std::printf("sup_residual_norm      parallel %8.2f ms  serial %8.2f ms  speedup %5.2fx  (diff %.3g)\n",
              t_par, t_ser, t_ser / t_par, std::fabs(a - b));

  const VertexFamily fam = VertexFamily::plan(shape, 4, 4, /*cap=*/1, /*samples=*/20000, /*seed=*/3);
  double c = 0, d = 0;
  const double t_par2 = time_ms([&] { c = kernels::family_sq_residual_sum(fam, L.basis, dim); }, 5);
  const double t_ser2 = time_ms([&] { d = kernels::family_sq_residual_sum_serial(fam, L.basis, dim); }, 5);
  std::printf("family_sq_residual_sum parallel %8.2f ms  serial %8.2f ms  speedup %5.2fx  (diff %.3g)\n",
              t_par2, t_ser2, t_ser2 / t_par2, std::fabs(c - d));
  return 0;
}
