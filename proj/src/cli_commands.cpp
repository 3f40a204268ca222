#include "widthlab/cli_commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "widthlab/json_io.hpp"
#include "widthlab/parallel.hpp"
#include "widthlab/suites.hpp"

namespace widthlab::cli {

namespace {

std::string fmt_exponent(const Exponent& e) {
  if (e.is_infinite()) return "inf";
  std::ostringstream os;
  os << std::setprecision(12) << e.value();
  return os.str();
}

const char* kSweepHeader =
    "m,k,n,q,sigma,nu1,p1,theta1,nu2,p2,theta2,phi1,phi2,phi3,phi4,phi5,min_value,argmin_j,"
    "predicted_j,case_label";

std::string csv_row(const WidthQuery& q, const IntersectionOrder& est) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << q.shape.m << "," << q.shape.k << "," << q.n << "," << fmt_exponent(q.target.p) << ","
     << fmt_exponent(q.target.theta);
  for (std::size_t b = 0; b < 2; ++b) {
    const BallSpec& ball = q.balls[std::min(b, q.balls.size() - 1)];
    os << "," << ball.nu << "," << fmt_exponent(ball.exps.p) << "," << fmt_exponent(ball.exps.theta);
  }
  for (double v : est.phi) {
    if (std::isinf(v)) {
      os << ",inf";
    } else {
      os << "," << v;
    }
  }
  os << "," << est.value << "," << est.argmin_j << "," << est.decision.active_j << ","
     << est.decision.label();
  return os.str();
}

}  // namespace

int cmd_estimate(const WidthQuery& query, EstimateFormat format, std::uint64_t seed, std::ostream& out,
                 std::ostream& err) {
  try {
    const IntersectionOrder est = intersection_width_order(query);
    if (format == EstimateFormat::json) {
      out << io::estimate_json(query, est, seed).dump(2) << "\n";
    } else if (format == EstimateFormat::csv) {
      out << "# estimate CSV v1, seed=" << seed << "\n" << kSweepHeader << "\n";
      out << csv_row(query, est) << "\n";
    } else {
      out << std::setprecision(12);
      out << "value " << est.value << "  argmin j=" << est.argmin_j << "  " << est.decision.label() << "\n";
      out << "phi:";
      for (double v : est.phi) {
        if (std::isinf(v)) {
          out << " inf";
        } else {
          out << " " << v;
        }
      }
      out << "\n";
      out << "thresholds: flat=" << est.thresholds.t_flat << " mid_p=" << est.thresholds.t_p
          << " mid_theta=" << est.thresholds.t_theta << "\n";
      out << "trace: " << est.trace << "\n";
      out << "seed: " << seed << "\n";
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_sweep(const SweepSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    spec.base.validate();
    if (spec.base.balls.size() != 2) throw std::invalid_argument("sweep needs a two-ball base query");
    std::size_t total = 1;
    for (const SweepAxis& ax : spec.axes) {
      if (ax.values.empty()) throw std::invalid_argument("empty grid axis: " + ax.name);
      total *= ax.values.size();
    }
    if (spec.axes.empty()) throw std::invalid_argument("empty grid: no axes given");

    std::vector<std::string> rows(total);
    std::vector<std::string> row_errors(total);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
#endif
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(total); ++idx) {
      try {
        WidthQuery q = spec.base;
        std::size_t rest = static_cast<std::size_t>(idx);
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
          const SweepAxis& ax = spec.axes[a];
          const double v = ax.values[rest % ax.values.size()];
          rest /= ax.values.size();
          if (ax.name == "n") {
            q.n = static_cast<std::int64_t>(std::llround(v));
          } else if (ax.name == "ratio") {
            q.balls[0] = BallSpec(q.balls[1].nu * v, q.balls[0].exps, q.shape);
          } else if (ax.name == "p1") {
            q.balls[0] = BallSpec(q.balls[0].nu, {Exponent::from_value(v), q.balls[0].exps.theta}, q.shape);
          } else if (ax.name == "p2") {
            q.balls[1] = BallSpec(q.balls[1].nu, {Exponent::from_value(v), q.balls[1].exps.theta}, q.shape);
          } else if (ax.name == "theta1") {
            q.balls[0] = BallSpec(q.balls[0].nu, {q.balls[0].exps.p, Exponent::from_value(v)}, q.shape);
          } else if (ax.name == "theta2") {
            q.balls[1] = BallSpec(q.balls[1].nu, {q.balls[1].exps.p, Exponent::from_value(v)}, q.shape);
          } else {
            throw std::invalid_argument("unknown axis: " + ax.name);
          }
        }
        rows[static_cast<std::size_t>(idx)] = csv_row(q, intersection_width_order(q));
      } catch (const std::exception& e) {
        row_errors[static_cast<std::size_t>(idx)] = e.what();
      }
    }

    for (const std::string& e : row_errors) {
      if (!e.empty()) throw std::invalid_argument(e);
    }
    out << "# sweep CSV v1, seed=" << spec.seed << "\n" << kSweepHeader << "\n";
    for (const std::string& r : rows) out << r << "\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const WidthBudget& budget,
               const std::string& report_path, std::ostream& out, std::ostream& err) {
  const auto names = verify_suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    err << "unknown suite: " << suite << " (have";
    for (const auto& n : names) err << " " << n;
    err << ")\n";
    return kExitUsage;
  }
  const SuiteResult res = run_suite(suite, seed, budget);
  nlohmann::json report{{"version", 1},
                        {"suite", res.name},
                        {"seed", seed},
                        {"budget", {{"restarts", budget.restarts}, {"iterations", budget.iterations}}},
                        {"cases", res.cases},
                        {"failures", res.failures},
                        {"passed", res.passed},
                        {"seconds", res.seconds},
                        {"messages", res.messages}};
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << report.dump(2) << "\n";
  }
  out << report.dump(2) << "\n";
  return res.passed ? kExitOk : kExitFail;
}

int cmd_witness(const WidthQuery& query, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    if (query.balls.size() != 2) throw std::invalid_argument("witness emission needs a two-ball query");
    auto w = build_witness(query);
    if (!w) throw std::invalid_argument("query is outside every certificate band");
    // re-plan with the caller's seed so sampled verification is reproducible
    w->family = VertexFamily::plan(w->family.shape(), w->family.r(), w->family.l(), 200000, 10000, seed);
    const VerifyDetail detail = verify_witness_detail(*w, query.ball(0), query.ball(1), 1e-9);
    out << io::witness_json(*w, query, detail.ok).dump(2) << "\n";
    if (!detail.ok) {
      err << "witness verification failed at vertex " << detail.first_bad << " (excess "
          << detail.worst_excess << ")\n";
      return kExitFail;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace widthlab::cli
