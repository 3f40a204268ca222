#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "widthlab/cli_commands.hpp"
#include "widthlab/json_io.hpp"

namespace {

using namespace widthlab;

struct QueryArgs {
  std::int64_t m = 2, k = 2, n = 0;
  std::string q = "2", sigma = "2";
  std::vector<std::string> balls;  // "nu,p,theta"
};

void add_query_flags(CLI::App* app, QueryArgs* args) {
  app->add_option("-m", args->m, "inner dimension m");
  app->add_option("-k", args->k, "outer dimension k");
  app->add_option("-n", args->n, "approximating dimension n");
  app->add_option("-q", args->q, "target inner exponent q (number, fraction, or inf)");
  app->add_option("-s,--sigma", args->sigma, "target outer exponent sigma");
  app->add_option("--ball", args->balls, "ball as nu,p,theta (repeat for the intersection)")
      ->expected(-1);
}

WidthQuery parse_query(const QueryArgs& args) {
  WidthQuery query;
  query.shape = Shape(args.m, args.k);
  query.n = args.n;
  query.target = {io::parse_exponent(args.q), io::parse_exponent(args.sigma)};
  for (const std::string& spec : args.balls) {
    std::stringstream ss(spec);
    std::string nu, p, theta;
    if (!std::getline(ss, nu, ',') || !std::getline(ss, p, ',') || !std::getline(ss, theta)) {
      throw std::invalid_argument("ball spec must be nu,p,theta: " + spec);
    }
    query.balls.emplace_back(std::stod(nu),
                             ExponentPair{io::parse_exponent(p), io::parse_exponent(theta)}, query.shape);
  }
  return query;
}

WidthBudget parse_budget(const std::string& text) {
  WidthBudget b;
  const auto x = text.find('x');
  if (x == std::string::npos) throw std::invalid_argument("budget must look like RESTARTSxITERATIONS");
  b.restarts = std::stoi(text.substr(0, x));
  b.iterations = std::stoi(text.substr(x + 1));
  return b;
}

std::vector<double> parse_axis_values(const std::string& text, bool log_scale) {
  // "lo:hi:count" (inclusive, count points) or comma-separated values
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string lo_s, hi_s, count_s;
    std::getline(ss, lo_s, ':');
    std::getline(ss, hi_s, ':');
    std::getline(ss, count_s);
    const double lo = std::stod(lo_s), hi = std::stod(hi_s);
    const int count = std::stoi(count_s);
    if (count < 1) throw std::invalid_argument("axis needs at least one point");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      out.push_back(log_scale ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                              : lo + t * (hi - lo));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::invalid_argument("empty axis: " + text);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"widthlab: order estimates, certificates and numeric cross-checks for "
               "Kolmogorov widths of mixed-norm balls and their intersections"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags (--seed, --budget, -o) may follow the subcommand

  std::uint64_t seed = 0;
  std::string budget_text = "32x2000";
  std::string out_path;
  app.add_option("--seed", seed, "seed for every stochastic component")->capture_default_str();
  auto* budget_opt =
      app.add_option("--budget", budget_text, "numeric budget RESTARTSxITERATIONS")->capture_default_str();
  app.add_option("-o,--output", out_path, "write the primary output to this file");

  QueryArgs est_args;
  bool est_json = false;
  bool est_csv = false;
  auto* est = app.add_subcommand("estimate", "evaluate the width order of a query");
  add_query_flags(est, &est_args);
  est->add_flag("--json", est_json, "emit JSON instead of text");
  est->add_flag("--csv", est_csv, "emit a CSV row (sweep column order) instead of text");
  std::string query_file;
  est->add_option("--queries", query_file, "QueryFile JSON v1 with a list of queries");

  QueryArgs sweep_args;
  std::string grid_n, grid_ratio, grid_p1, grid_p2, grid_t1, grid_t2;
  auto* sweep = app.add_subcommand("sweep", "CSV sweep over a parameter grid");
  add_query_flags(sweep, &sweep_args);
  sweep->add_option("--grid-n", grid_n, "n axis: lo:hi:count or comma list");
  sweep->add_option("--grid-ratio", grid_ratio, "nu1/nu2 axis (log spaced): lo:hi:count or list");
  sweep->add_option("--grid-p1", grid_p1, "p1 axis: lo:hi:count or list");
  sweep->add_option("--grid-p2", grid_p2, "p2 axis");
  sweep->add_option("--grid-theta1", grid_t1, "theta1 axis");
  sweep->add_option("--grid-theta2", grid_t2, "theta2 axis");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a property suite and report pass/fail");
  verify->add_option("suite", suite, "one of: holder identity4 averaging witnesses sandwich thresholds")
      ->required();

  QueryArgs wit_args;
  auto* wit = app.add_subcommand("witness", "emit the verified lower-bound certificate as JSON");
  add_query_flags(wit, &wit_args);

  CLI11_PARSE(app, argc, argv);

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) {
      std::cerr << "cannot open output file: " << out_path << "\n";
      return widthlab::cli::kExitUsage;
    }
    out = &out_file;
  }

  try {
    const WidthBudget budget = parse_budget(budget_text);
    if (est->parsed()) {
      const auto format = est_json   ? widthlab::cli::EstimateFormat::json
                          : est_csv  ? widthlab::cli::EstimateFormat::csv
                                     : widthlab::cli::EstimateFormat::text;
      if (!query_file.empty()) {
        std::ifstream f(query_file);
        if (!f) throw std::invalid_argument("cannot open query file: " + query_file);
        int rc = widthlab::cli::kExitOk;
        for (const WidthQuery& q : io::load_query_file(f)) {
          rc = std::max(rc, widthlab::cli::cmd_estimate(q, format, seed, *out, std::cerr));
        }
        return rc;
      }
      return widthlab::cli::cmd_estimate(parse_query(est_args), format, seed, *out, std::cerr);
    }
    if (sweep->parsed()) {
      widthlab::cli::SweepSpec spec;
      spec.base = parse_query(sweep_args);
      spec.seed = seed;
      if (!grid_n.empty()) spec.axes.push_back({"n", parse_axis_values(grid_n, false)});
      if (!grid_ratio.empty()) spec.axes.push_back({"ratio", parse_axis_values(grid_ratio, true)});
      if (!grid_p1.empty()) spec.axes.push_back({"p1", parse_axis_values(grid_p1, false)});
      if (!grid_p2.empty()) spec.axes.push_back({"p2", parse_axis_values(grid_p2, false)});
      if (!grid_t1.empty()) spec.axes.push_back({"theta1", parse_axis_values(grid_t1, false)});
      if (!grid_t2.empty()) spec.axes.push_back({"theta2", parse_axis_values(grid_t2, false)});
      return widthlab::cli::cmd_sweep(spec, *out, std::cerr);
    }
    if (verify->parsed()) {
      // the full estimator budget is overkill for the suite's grid of tiny runs
      const WidthBudget suite_budget = budget_opt->count() ? budget : WidthBudget{6, 250};
      return widthlab::cli::cmd_verify(suite, seed, suite_budget, out_path, std::cout, std::cerr);
    }
    if (wit->parsed()) {
      return widthlab::cli::cmd_witness(parse_query(wit_args), seed, *out, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return widthlab::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return widthlab::cli::kExitFail;
  }
  return widthlab::cli::kExitUsage;
}
