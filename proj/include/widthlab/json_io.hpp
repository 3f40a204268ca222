#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "widthlab/estimates.hpp"
#include "widthlab/extremal.hpp"
#include "widthlab/numeric.hpp"

namespace widthlab::io {

/// Accepts "inf", fractions like "8/3" (kept exact in the double division),
/// and plain decimals. Values must be >= 1.
Exponent parse_exponent(const std::string& text);

nlohmann::json query_json(const WidthQuery& query);
WidthQuery query_from_json(const nlohmann::json& j);

/// QueryFile v1: {"version": 1, "queries": [...]}. Exponents accept "inf".
std::vector<WidthQuery> load_query_file(std::istream& in);

/// Witness JSON v1: lemma_id, m, k, r, l, n, q, sigma, alpha, scale,
/// claimed_value, verified, seed.
nlohmann::json witness_json(const Witness& w, const WidthQuery& query, bool verified);

nlohmann::json estimate_json(const WidthQuery& query, const IntersectionOrder& est,
                             std::uint64_t seed);

/// Width-run report: inputs, seed, per-restart best values, final value.
nlohmann::json width_run_json(const WidthRun& run);

/// Convergence logs as CSV: restart, iteration, best_value.
void write_convergence_csv(const WidthRun& run, std::ostream& out);

}  // namespace widthlab::io
