#include "widthlab/json_io.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

namespace widthlab::io {

using nlohmann::json;

Exponent parse_exponent(const std::string& text) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t == "inf" || t == "Inf" || t == "INF" || t == "infinity") return Exponent::infinity();
  const auto slash = t.find('/');
  if (slash != std::string::npos) {
    const double num = std::stod(t.substr(0, slash));
    const double den = std::stod(t.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("exponent fraction with zero denominator");
    return Exponent::from_value(num / den);
  }
  return Exponent::from_value(std::stod(t));
}

namespace {

Exponent exponent_from_json(const json& j) {
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  return Exponent::from_value(j.get<double>());
}

json exponent_to_json(const Exponent& e) {
  if (e.is_infinite()) return json("inf");
  return json(e.value());
}

}  // namespace

json query_json(const WidthQuery& query) {
  json balls = json::array();
  for (const BallSpec& b : query.balls) {
    balls.push_back({{"nu", b.nu}, {"p", exponent_to_json(b.exps.p)}, {"theta", exponent_to_json(b.exps.theta)}});
  }
  return json{{"m", query.shape.m}, {"k", query.shape.k},       {"n", query.n},
              {"q", exponent_to_json(query.target.p)},          {"sigma", exponent_to_json(query.target.theta)},
              {"balls", balls}};
}

WidthQuery query_from_json(const json& j) {
  WidthQuery q;
  q.shape = Shape(j.at("m").get<std::int64_t>(), j.at("k").get<std::int64_t>());
  q.n = j.at("n").get<std::int64_t>();
  q.target = {exponent_from_json(j.at("q")), exponent_from_json(j.at("sigma"))};
  for (const json& bj : j.at("balls")) {
    q.balls.emplace_back(bj.at("nu").get<double>(),
                         ExponentPair{exponent_from_json(bj.at("p")), exponent_from_json(bj.at("theta"))},
                         q.shape);
  }
  return q;
}

std::vector<WidthQuery> load_query_file(std::istream& in) {
  json doc = json::parse(in);
  if (!doc.contains("version") || doc.at("version").get<int>() != 1) {
    throw std::invalid_argument("query file must declare version 1");
  }
  std::vector<WidthQuery> out;
  for (const json& qj : doc.at("queries")) out.push_back(query_from_json(qj));
  return out;
}

json witness_json(const Witness& w, const WidthQuery& query, bool verified) {
  return json{{"version", 1},
              {"lemma_id", lemma_name(w.lemma)},
              {"m", query.shape.m},
              {"k", query.shape.k},
              {"r", w.family.r()},
              {"l", w.family.l()},
              {"n", query.n},
              {"q", exponent_to_json(query.target.p)},
              {"sigma", exponent_to_json(query.target.theta)},
              {"alpha", w.alpha},
              {"scale", w.scale},
              {"claimed_value", w.claimed_value},
              {"verified", verified},
              {"seed", w.family.seed()},
              {"factor", w.factor},
              {"lambda", w.lambda},
              {"rounding", w.rounding},
              {"case", w.decision.label()}};
}

json width_run_json(const WidthRun& run) {
  json restarts = json::array();
  for (const RestartLog& lg : run.logs) {
    restarts.push_back({{"index", lg.index},
                        {"final_value", lg.final_value},
                        {"iterations", lg.best_values.empty() ? 0 : lg.best_values.size() - 1},
                        {"best_start", lg.best_values.empty() ? 0.0 : lg.best_values.front()},
                        {"best_end", lg.best_values.empty() ? 0.0 : lg.best_values.back()}});
  }
  return json{{"version", 1},
              {"source", run.source},
              {"m", run.shape.m},
              {"k", run.shape.k},
              {"n", run.n},
              {"q", run.target.p.is_infinite() ? json("inf") : json(run.target.p.value())},
              {"sigma", run.target.theta.is_infinite() ? json("inf") : json(run.target.theta.value())},
              {"points", run.points.size()},
              {"budget", {{"restarts", run.budget.restarts}, {"iterations", run.budget.iterations}}},
              {"seed", run.seed},
              {"completed", run.completed},
              {"upper_bound", run.upper_bound},
              {"restart_results", restarts}};
}

void write_convergence_csv(const WidthRun& run, std::ostream& out) {
  out << "restart,iteration,best_value\n";
  for (const RestartLog& lg : run.logs) {
    for (std::size_t t = 0; t < lg.best_values.size(); ++t) {
      out << lg.index << "," << t << "," << lg.best_values[t] << "\n";
    }
  }
}

json estimate_json(const WidthQuery& query, const IntersectionOrder& est, std::uint64_t seed) {
  json phi = json::array();
  for (double v : est.phi) {
    phi.push_back(std::isinf(v) ? json("inf") : json(v));
  }
  return json{{"query", query_json(query)},
              {"value", est.value},
              {"argmin_j", est.argmin_j},
              {"phi", phi},
              {"trace", est.trace},
              {"case", est.decision.label()},
              {"predicted_j", est.decision.active_j},
              {"thresholds",
               {{"flat", est.thresholds.t_flat}, {"mid_p", est.thresholds.t_p}, {"mid_theta", est.thresholds.t_theta}}},
              {"seed", seed}};
}

}  // namespace widthlab::io
