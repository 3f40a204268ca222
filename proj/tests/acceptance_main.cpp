// Acceptance suite: every criterion at its stated tolerance, one line each.
// Exit code 0 iff all pass.

#include <cstdio>
#include <string>

#include "widthlab/suites.hpp"

using namespace widthlab;

namespace {

int failures = 0;

void report(int index, const char* title, const SuiteResult& res, double budget_s) {
  const bool in_time = res.seconds < budget_s;
  const bool ok = res.passed && in_time;
  if (!ok) ++failures;
  std::printf("[%s] criterion %d: %-46s cases=%-7lld failures=%-5lld %6.1fs (budget %.0fs)\n",
              ok ? "PASS" : "FAIL", index, title, static_cast<long long>(res.cases),
              static_cast<long long>(res.failures), res.seconds, budget_s);
  for (const std::string& msg : res.messages) std::printf("       - %s\n", msg.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const std::uint64_t seed = 20240809;

  report(1, "interpolation inequality, 1e4 draws, gap >= -1e-9", suite_holder(seed), 10.0);
  report(2, "four-form identity, 1e3 draws, rel 1e-12", suite_identity4(seed + 1), 5.0);
  report(3, "averaging certificate, mk <= 16, 1e3 subspaces/n", suite_averaging(seed + 2), 60.0);
  report(4, "octahedron widths within 5e-3", suite_octahedron(seed + 3), 30.0);
  report(5, "witness soundness, >= 2e3 queries, tol 1e-9", suite_witnesses(seed + 4), 120.0);
  report(6, "threshold iffs and argmin agreement, 1e4 queries", suite_thresholds(seed + 5), 30.0);
  report(7, "sandwich: averaging bound <= numeric bound", suite_sandwich(seed + 6, {6, 250}), 300.0);
  report(8, "monotonicity in n, analytic and numeric", suite_monotonicity(seed + 7), 120.0);

  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria failed\n", failures);
  return 1;
}
