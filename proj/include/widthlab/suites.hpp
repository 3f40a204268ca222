#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "widthlab/estimates.hpp"
#include "widthlab/numeric.hpp"

namespace widthlab {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::vector<std::string> messages;  // first few failure details
  double seconds = 0.0;
};

SuiteResult suite_holder(std::uint64_t seed);
SuiteResult suite_identity4(std::uint64_t seed);
SuiteResult suite_averaging(std::uint64_t seed);
SuiteResult suite_octahedron(std::uint64_t seed);
SuiteResult suite_witnesses(std::uint64_t seed);
SuiteResult suite_thresholds(std::uint64_t seed);
SuiteResult suite_sandwich(std::uint64_t seed, const WidthBudget& budget);
SuiteResult suite_monotonicity(std::uint64_t seed);

/// Names accepted by the CLI `verify` subcommand.
std::vector<std::string> verify_suite_names();
SuiteResult run_suite(const std::string& name, std::uint64_t seed, const WidthBudget& budget);

/// Seeded admissible two-ball queries for a canonical case, optionally
/// transformed (ball swap / axis mirror), spread over regimes and nu-bands.
/// Used by the witness and threshold suites and exposed for tests.
std::optional<WidthQuery> sample_case_query(int case_number, bool apply_swap, bool apply_mirror,
                                            Rng& rng);

}  // namespace widthlab
