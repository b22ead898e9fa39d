#include "prover/report.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace prover {

using nlohmann::ordered_json;

std::string RunReport::to_json() const {
  ordered_json j;
  j["problem"] = problem;
  j["rule"] = rule;
  j["ur_polarity"] = ur_polarity;
  j["pick_given"] = pick_given;
  j["pick_ratio"] = pick_ratio;
  j["budget"] = budget;
  j["denial"] = denial;
  ordered_json lim;
  lim["max_given"] = limits.max_given ? ordered_json(*limits.max_given) : ordered_json(nullptr);
  lim["max_seconds"] =
      limits.max_seconds ? ordered_json(*limits.max_seconds) : ordered_json(nullptr);
  lim["max_weight"] = limits.max_weight ? ordered_json(*limits.max_weight) : ordered_json(nullptr);
  lim["max_retained"] =
      limits.max_retained ? ordered_json(*limits.max_retained) : ordered_json(nullptr);
  j["limits"] = lim;
  j["outcome"] = outcome;
  j["limit"] = limit;
  ordered_json st;
  st["clauses_generated"] = stats.clauses_generated;
  st["clauses_forward_subsumed"] = stats.clauses_forward_subsumed;
  st["subsumed_by_sos"] = stats.subsumed_by_sos;
  st["sos_size_final"] = stats.sos_size_final;
  st["sos_size_peak"] = stats.sos_size_peak;
  st["given_count"] = stats.given_count;
  st["clauses_retained"] = stats.clauses_retained;
  st["clauses_discarded"] = stats.clauses_discarded;
  st["wall_seconds"] = stats.wall_seconds;
  st["cpu_seconds"] = stats.cpu_seconds;
  j["stats"] = st;
  j["artifacts"] = artifacts;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

RunReport RunReport::from_json(const std::string& text) {
  ordered_json j = ordered_json::parse(text);
  RunReport r;
  r.problem = j.at("problem");
  r.rule = j.at("rule");
  r.ur_polarity = j.at("ur_polarity");
  r.pick_given = j.at("pick_given");
  r.pick_ratio = j.at("pick_ratio");
  r.budget = j.at("budget");
  r.denial = j.at("denial");
  const auto& lim = j.at("limits");
  if (!lim.at("max_given").is_null()) r.limits.max_given = lim.at("max_given").get<long>();
  if (!lim.at("max_seconds").is_null()) r.limits.max_seconds = lim.at("max_seconds").get<double>();
  if (!lim.at("max_weight").is_null()) r.limits.max_weight = lim.at("max_weight").get<int>();
  if (!lim.at("max_retained").is_null())
    r.limits.max_retained = lim.at("max_retained").get<long>();
  r.outcome = j.at("outcome");
  r.limit = j.at("limit");
  const auto& st = j.at("stats");
  r.stats.clauses_generated = st.at("clauses_generated");
  r.stats.clauses_forward_subsumed = st.at("clauses_forward_subsumed");
  r.stats.subsumed_by_sos = st.at("subsumed_by_sos");
  r.stats.sos_size_final = st.at("sos_size_final");
  r.stats.sos_size_peak = st.at("sos_size_peak");
  r.stats.given_count = st.at("given_count");
  r.stats.clauses_retained = st.at("clauses_retained");
  r.stats.clauses_discarded = st.at("clauses_discarded");
  r.stats.wall_seconds = st.at("wall_seconds");
  r.stats.cpu_seconds = st.at("cpu_seconds");
  r.artifacts = j.at("artifacts").get<std::map<std::string, std::string>>();
  r.seed = j.at("seed");
  return r;
}

void write_stats(std::ostream& os, const Stats& s) {
  os << "clauses generated " << s.clauses_generated << "\n";
  os << "clauses forward subsumed " << s.clauses_forward_subsumed << "\n";
  os << "subsumed by sos " << s.subsumed_by_sos << "\n";
  os << "sos size (final) " << s.sos_size_final << "\n";
  os << "sos size (peak) " << s.sos_size_peak << "\n";
  os << "user CPU time " << std::fixed << std::setprecision(2) << s.cpu_seconds << "\n";
  os << "wall clock time " << std::fixed << std::setprecision(2) << s.wall_seconds << "\n";
}

void write_compare_csv(std::ostream& os, const RunReport& ur, const RunReport& hyper) {
  bool comparable =
      (ur.outcome == hyper.outcome) && (ur.outcome != "limit_hit" || ur.limit == hyper.limit);
  os << "metric,ur,hyper,ratio_hyper_over_ur\n";
  auto row = [&](const char* name, double u, double h, bool is_int) {
    os << name << ',';
    if (is_int)
      os << static_cast<long>(u) << ',' << static_cast<long>(h);
    else
      os << std::fixed << std::setprecision(4) << u << ',' << h;
    os << ',';
    if (comparable && u > 0) os << std::defaultfloat << std::setprecision(6) << (h / u);
    os << '\n';
  };
  row("clauses_generated", ur.stats.clauses_generated, hyper.stats.clauses_generated, true);
  row("clauses_forward_subsumed", ur.stats.clauses_forward_subsumed,
      hyper.stats.clauses_forward_subsumed, true);
  row("subsumed_by_sos", ur.stats.subsumed_by_sos, hyper.stats.subsumed_by_sos, true);
  row("sos_size_final", ur.stats.sos_size_final, hyper.stats.sos_size_final, true);
  row("sos_size_peak", ur.stats.sos_size_peak, hyper.stats.sos_size_peak, true);
  row("given_count", ur.stats.given_count, hyper.stats.given_count, true);
  row("user_cpu_time", ur.stats.cpu_seconds, hyper.stats.cpu_seconds, false);
}

}  // namespace prover
