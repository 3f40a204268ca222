#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "widthlab/estimates.hpp"
#include "widthlab/numeric.hpp"

namespace widthlab::cli {

// exit codes: 0 pass, 1 property failure, 2 usage/domain error
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

enum class EstimateFormat { text, json, csv };

int cmd_estimate(const WidthQuery& query, EstimateFormat format, std::uint64_t seed, std::ostream& out,
                 std::ostream& err);

struct SweepAxis {
  std::string name;  // one of n, ratio, p1, p2, theta1, theta2
  std::vector<double> values;
};

struct SweepSpec {
  WidthQuery base;
  std::vector<SweepAxis> axes;  // cartesian product; last axis varies fastest
  std::uint64_t seed = 0;
};

int cmd_sweep(const SweepSpec& spec, std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& suite, std::uint64_t seed, const WidthBudget& budget,
               const std::string& report_path, std::ostream& out, std::ostream& err);

int cmd_witness(const WidthQuery& query, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace widthlab::cli
