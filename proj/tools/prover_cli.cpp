#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "prover/circuits.hpp"
#include "prover/report.hpp"

namespace fs = std::filesystem;
using namespace prover;

namespace {

struct RunOptions {
  std::string problem;
  std::string rule = "ur";
  std::string ur_polarity = "both";
  std::string pick_given = "weight";
  std::string denial = "table-derived";
  long max_given = -1;
  double max_seconds = -1;
  int max_weight = -1;
  int budget = -1;  // override
  std::string out_dir = "out";
};

RuleConfig rule_config(const RunOptions& opt) {
  RuleConfig rc;
  if (opt.rule == "hyper")
    rc.rule = RuleKind::Hyper;
  else if (opt.rule == "ur")
    rc.rule = RuleKind::UR;
  else
    throw CLI::ValidationError("--rule must be hyper or ur");
  if (opt.ur_polarity == "both")
    rc.ur_polarity = UrPolarity::Both;
  else if (opt.ur_polarity == "pos")
    rc.ur_polarity = UrPolarity::PositiveOnly;
  else if (opt.ur_polarity == "neg")
    rc.ur_polarity = UrPolarity::NegativeOnly;
  else
    throw CLI::ValidationError("--ur-polarity must be both, pos or neg");
  return rc;
}

SelectStrategy select_strategy(const RunOptions& opt, int* ratio_out) {
  SelectStrategy sel;
  if (opt.pick_given == "weight") {
    sel.mode = PickGiven::Weight;
  } else if (opt.pick_given == "fifo") {
    sel.mode = PickGiven::Fifo;
  } else if (opt.pick_given.rfind("ratio:", 0) == 0) {
    sel.mode = PickGiven::Ratio;
    sel.ratio = std::stoi(opt.pick_given.substr(6));
    if (sel.ratio < 1) throw CLI::ValidationError("ratio must be >= 1");
  } else {
    throw CLI::ValidationError("--pick-given must be weight, fifo or ratio:<r>");
  }
  *ratio_out = sel.ratio;
  return sel;
}

circuits::CircuitProblem resolve_problem(const RunOptions& opt) {
  circuits::CircuitProblem p;
  if (opt.problem == "bcd" && opt.denial == "paper-literal")
    p = circuits::bcd_problem(circuits::DenialVariant::PaperLiteral);
  else
    p = circuits::load_problem(opt.problem);
  if (opt.budget >= 0) p.budget = opt.budget;
  return p;
}

void write_proof(std::ostream& os, const TermStore& ts, const std::vector<Clause>& proof) {
  for (const Clause& c : proof) {
    os << c.id << " [" << c.origin.rule;
    for (int p : c.origin.parents) os << ' ' << p;
    os << "] " << clause_to_string(ts, c) << ".\n";
  }
}

void write_circuit(std::ostream& os, const circuits::Circuit& c,
                   const circuits::CircuitProblem& p, bool verified) {
  os << "# " << p.name << ": " << c.nodes.size() << " nodes, " << c.not_count()
     << " NOT (budget " << p.budget << "), verified=" << (verified ? "yes" : "no") << "\n";
  for (size_t i = 0; i < c.nodes.size(); ++i) {
    const auto& g = c.nodes[i];
    os << 'n' << i << " = ";
    switch (g.kind) {
      case circuits::Gate::Input:
        os << "INPUT " << g.a << "  # " << p.inputs[g.a].str();
        break;
      case circuits::Gate::And:
        os << "AND n" << g.a << " n" << g.b;
        break;
      case circuits::Gate::Or:
        os << "OR n" << g.a << " n" << g.b;
        break;
      case circuits::Gate::Not:
        os << "NOT n" << g.a;
        break;
    }
    os << "\n";
  }
  for (size_t k = 0; k < c.outputs.size(); ++k)
    os << "output " << k << " = n" << c.outputs[k] << "  # " << p.outputs[k].str() << "\n";
}

// Returns the report and the process exit code.
std::pair<RunReport, int> do_run(const RunOptions& opt) {
  circuits::CircuitProblem problem = resolve_problem(opt);
  RuleConfig rc = rule_config(opt);
  int ratio = 0;
  SelectStrategy sel = select_strategy(opt, &ratio);
  Limits limits;
  if (opt.max_given >= 0) limits.max_given = opt.max_given;
  if (opt.max_seconds >= 0) limits.max_seconds = opt.max_seconds;
  if (opt.max_weight >= 0) limits.max_weight = opt.max_weight;

  fs::create_directories(opt.out_dir);
  TermStore ts;
  circuits::Encoding enc(ts, problem);
  Prover prover(ts, rc, sel, limits, enc.hooks());
  for (Clause& c : enc.usable) prover.add_usable(std::move(c));
  for (Clause& c : enc.sos) prover.add_sos(std::move(c));

  std::ofstream trace(fs::path(opt.out_dir) / "trace.csv");
  Outcome res = prover.run(&trace);
  trace.close();

  RunReport rep;
  rep.problem = problem.name;
  rep.rule = opt.rule;
  rep.ur_polarity = opt.ur_polarity;
  rep.pick_given = opt.pick_given;
  rep.pick_ratio = ratio;
  rep.budget = problem.budget;
  rep.denial = opt.denial;
  rep.limits = limits;
  rep.outcome = outcome_name(res.kind);
  rep.limit = limit_name(res.limit);
  rep.stats = res.stats;
  rep.artifacts["trace_csv"] = (fs::path(opt.out_dir) / "trace.csv").string();
  rep.artifacts["stats_txt"] = (fs::path(opt.out_dir) / "stats.txt").string();

  {
    std::ofstream st(fs::path(opt.out_dir) / "stats.txt");
    write_stats(st, res.stats);
  }

  int code = 1;
  if (res.kind == OutcomeKind::Refutation) {
    code = 0;
    std::ofstream pf(fs::path(opt.out_dir) / "proof.txt");
    write_proof(pf, ts, res.proof);
    rep.artifacts["proof_txt"] = (fs::path(opt.out_dir) / "proof.txt").string();
    circuits::Circuit circ = circuits::extract_circuit(ts, enc, res.proof);
    bool ok = circuits::verify_circuit(circ, problem);
    std::ofstream cf(fs::path(opt.out_dir) / "circuit.txt");
    write_circuit(cf, circ, problem, ok);
    rep.artifacts["circuit_txt"] = (fs::path(opt.out_dir) / "circuit.txt").string();
    std::cout << problem.name << " " << opt.rule << ": refutation found, circuit "
              << (ok ? "verified" : "FAILED VERIFICATION") << " (" << circ.not_count()
              << " NOT, " << res.stats.given_count << " iterations, "
              << res.stats.clauses_generated << " clauses generated)\n";
  } else if (res.kind == OutcomeKind::SosExhausted) {
    code = 1;
    std::cout << problem.name << " " << opt.rule << ": sos exhausted, no proof ("
              << res.stats.given_count << " iterations)\n";
  } else {
    code = 2;
    std::cout << problem.name << " " << opt.rule << ": limit hit (" << limit_name(res.limit)
              << ", " << res.stats.given_count << " iterations)\n";
  }
  {
    std::ofstream rj(fs::path(opt.out_dir) / "report.json");
    rj << rep.to_json();
    rep.artifacts["report_json"] = (fs::path(opt.out_dir) / "report.json").string();
  }
  return {rep, code};
}

int do_compare(RunOptions opt) {
  fs::create_directories(opt.out_dir);
  RunOptions ur = opt, hy = opt;
  ur.rule = "ur";
  ur.out_dir = (fs::path(opt.out_dir) / "ur").string();
  hy.rule = "hyper";
  hy.out_dir = (fs::path(opt.out_dir) / "hyper").string();
  auto [ur_rep, ur_code] = do_run(ur);
  auto [hy_rep, hy_code] = do_run(hy);
  std::ofstream cc(fs::path(opt.out_dir) / "compare.csv");
  write_compare_csv(cc, ur_rep, hy_rep);
  std::cout << "compare written to " << (fs::path(opt.out_dir) / "compare.csv").string() << "\n";
  return ur_code == 0 && hy_code == 0 ? 0 : std::max(ur_code, hy_code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Given-clause saturation prover for negation-limited inverter synthesis"};
  app.require_subcommand(1);

  RunOptions opt;
  auto add_common = [&](CLI::App* cmd, bool with_rule) {
    cmd->add_option("--problem", opt.problem, "builtin (2inv, bcd, ninv <n> <budget>) or file")
        ->required();
    if (with_rule) cmd->add_option("--rule", opt.rule, "hyper|ur")->required();
    cmd->add_option("--ur-polarity", opt.ur_polarity, "both|pos|neg");
    cmd->add_option("--pick-given", opt.pick_given, "weight|fifo|ratio:<r>");
    cmd->add_option("--max-given", opt.max_given, "given-clause iteration cap");
    cmd->add_option("--max-seconds", opt.max_seconds, "wall clock cap");
    cmd->add_option("--max-weight", opt.max_weight, "retention weight cap");
    cmd->add_option("--budget", opt.budget, "inverter budget override");
    cmd->add_option("--denial", opt.denial, "table-derived|paper-literal");
    cmd->add_option("--out", opt.out_dir, "output directory");
  };
  CLI::App* run = app.add_subcommand("run", "single-strategy saturation run");
  add_common(run, true);
  CLI::App* cmp = app.add_subcommand("compare", "UR vs hyper head-to-head");
  add_common(cmp, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors are exit code 3; --help stays 0.
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  try {
    if (run->parsed()) return do_run(opt).second;
    return do_compare(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
