#pragma once

#include <cstdint>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace widthlab {

/// Thread budget: min(OpenMP max threads, WIDTHLAB_THREADS). Returns 1 when
/// built without OpenMP.
inline int effective_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("WIDTHLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && cap < n) n = static_cast<int>(cap);
  }
  return n;
#else
  return 1;
#endif
}

}  // namespace widthlab
