// Acceptance harness: nine end-to-end checks, one PASS/FAIL line each.
// Exit status is the number of failed checks.

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "prover/circuits.hpp"
#include "prover/report.hpp"

namespace fs = std::filesystem;
using namespace prover;
using namespace prover::circuits;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail) {
  std::cout << "criterion " << n << " (" << what << "): " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << "\n" << std::flush;
  if (!ok) ++failures;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(PROVER_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

RunReport load_report(const fs::path& dir) {
  std::ifstream f(dir / "report.json");
  std::ostringstream ss;
  ss << f.rdbuf();
  return RunReport::from_json(ss.str());
}

bool circuit_verified(const fs::path& dir) {
  std::ifstream f(dir / "circuit.txt");
  std::string head;
  std::getline(f, head);
  return head.find("verified=yes") != std::string::npos;
}

// In-process saturation of a circuit problem; returns the outcome, and the
// extracted circuit's verification verdict when a refutation was found.
struct Solved {
  Outcome outcome;
  bool circuit_ok = false;
};

Solved solve(const CircuitProblem& p, RuleKind rule, Limits lim = {}) {
  TermStore ts;
  Encoding enc(ts, p);
  Solved s{saturate(ts, enc.usable, enc.sos, {rule}, lim, {}, enc.hooks()), false};
  if (s.outcome.kind == OutcomeKind::Refutation) {
    Circuit c = extract_circuit(ts, enc, s.outcome.proof);
    s.circuit_ok = verify_circuit(c, p);
  }
  return s;
}

// ---- criteria 1 & 2: the two-inverter puzzle through the CLI ----

void criteria_1_2(const fs::path& work) {
  fs::path ur_dir = work / "c1-ur", hy_dir = work / "c1-hyper";
  int ur_code = run_cli("run --problem 2inv --rule ur --out " + ur_dir.string());
  int hy_code = run_cli("run --problem 2inv --rule hyper --out " + hy_dir.string());
  bool ok = ur_code == 0 && hy_code == 0 && circuit_verified(ur_dir) && circuit_verified(hy_dir);
  std::ostringstream d;
  if (ok) {
    RunReport ur = load_report(ur_dir), hy = load_report(hy_dir);
    d << "ur: " << ur.stats.given_count << " iterations, " << ur.stats.cpu_seconds
      << "s cpu; hyper: " << hy.stats.given_count << " iterations, " << hy.stats.cpu_seconds
      << "s cpu; both circuits verified";
    report(1, "two-inverter puzzle end-to-end, both rules", true, d.str());
    double ratio = double(hy.stats.clauses_generated) / double(ur.stats.clauses_generated);
    std::ostringstream d2;
    d2 << "clauses generated ur=" << ur.stats.clauses_generated
       << " hyper=" << hy.stats.clauses_generated << " ratio=" << ratio
       << (ratio >= 2 ? "" : " (< 2: the rules walk near-identical forward chains here)");
    report(2, "hyper generates at least twice as many clauses on 2inv", ratio >= 2.0, d2.str());
  } else {
    d << "ur exit=" << ur_code << " hyper exit=" << hy_code;
    report(1, "two-inverter puzzle end-to-end, both rules", false, d.str());
    report(2, "hyper generates at least twice as many clauses on 2inv", false,
           "skipped: criterion 1 runs unavailable");
  }
}

// ---- criterion 3: decade counter, capped iteration budget ----

void criterion_3(const fs::path& work) {
  // A wall-clock valve keeps the harness bounded; without it an unfinished
  // search runs for days and exhausts memory before the iteration cap.
  const std::string caps = "--max-given 200000 --max-seconds 600";
  fs::path ur_dir = work / "c3-ur", hy_dir = work / "c3-hyper";
  int ur_code = run_cli("run --problem bcd " + caps + " --rule ur --out " + ur_dir.string());
  int hy_code = run_cli("run --problem bcd " + caps + " --rule hyper --out " + hy_dir.string());
  std::ostringstream d;
  bool ok = false;
  auto describe = [&](const char* tag, int code, const fs::path& dir) {
    d << tag << ": exit " << code;
    if (code < 0 || code == 3) return;
    RunReport r = load_report(dir);
    d << " (" << r.outcome;
    if (r.outcome == "limit_hit") d << " on " << r.limit;
    d << ", " << r.stats.given_count << " iterations, sos peak " << r.stats.sos_size_peak << ")";
  };
  describe("ur", ur_code, ur_dir);
  d << "; ";
  describe("hyper", hy_code, hy_dir);
  if (ur_code == 0 && hy_code == 2) {
    ok = true;
  } else if (ur_code == 0 && hy_code == 0) {
    RunReport ur = load_report(ur_dir), hy = load_report(hy_dir);
    ok = hy.stats.given_count > ur.stats.given_count;
    if (!ok) d << " (reversal: hyper needed no more iterations than ur)";
  }
  report(3, "decade counter: ur refutes within cap, hyper needs more or caps", ok, d.str());
}

// ---- criterion 4: exhaustive oracle against the inverter-count bound ----

double seconds(std::clock_t t0) { return double(std::clock() - t0) / CLOCKS_PER_SEC; }

void criterion_4() {
  std::clock_t t0 = std::clock();
  auto w32 = brute_force_search(ninv_problem(3, 2));
  bool ok32 = w32 && verify_circuit(*w32, ninv_problem(3, 2));
  bool ok31 = !brute_force_search(ninv_problem(3, 1));
  bool ok21 = !brute_force_search(ninv_problem(2, 1));
  double dt = seconds(t0);
  std::ostringstream d;
  d << "(3 inputs, budget 2) witness " << (ok32 ? "verified" : "MISSING") << "; (3,1) "
    << (ok31 ? "unsat" : "SAT?") << "; (2,1) " << (ok21 ? "unsat" : "SAT?") << "; " << dt
    << "s total";
  report(4, "exhaustive oracle matches the inverter-count bound", ok32 && ok31 && ok21 && dt < 60,
         d.str());
}

// ---- criterion 5: prover/oracle agreement ----

void criterion_5() {
  Solved sat = solve(ninv_problem(3, 2), RuleKind::UR);
  bool ok_sat = sat.outcome.kind == OutcomeKind::Refutation && sat.circuit_ok;
  Solved unsat = solve(ninv_problem(2, 1), RuleKind::UR);
  bool ok_unsat = unsat.outcome.kind == OutcomeKind::SosExhausted;
  std::ostringstream d;
  d << "(3,2): " << outcome_name(sat.outcome.kind)
    << (sat.circuit_ok ? ", circuit verified" : ", circuit NOT verified") << "; (2,1): "
    << outcome_name(unsat.outcome.kind);
  report(5, "saturation agrees with the oracle and never fakes a proof", ok_sat && ok_unsat,
         d.str());
}

// ---- criterion 6: random ground Horn sets vs a truth-table oracle ----

void criterion_6() {
  std::mt19937 rng(7);
  int mismatches = 0, unsat_seen = 0, sat_seen = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int atoms = 3 + rng() % 6;
    int nclauses = 3 + rng() % 8;
    std::vector<std::vector<int>> neg(nclauses);
    std::vector<int> head(nclauses, -1);
    for (int i = 0; i < nclauses; ++i) {
      int nn = rng() % 4;
      for (int j = 0; j < nn; ++j) neg[i].push_back(rng() % atoms);
      std::sort(neg[i].begin(), neg[i].end());
      neg[i].erase(std::unique(neg[i].begin(), neg[i].end()), neg[i].end());
      if (rng() % 3 != 0) head[i] = rng() % atoms;
      if (neg[i].empty() && head[i] < 0) head[i] = rng() % atoms;
    }
    bool satisfiable = false;
    for (int world = 0; world < (1 << atoms) && !satisfiable; ++world) {
      bool all = true;
      for (int i = 0; i < nclauses && all; ++i) {
        bool cs = head[i] >= 0 && ((world >> head[i]) & 1);
        for (int a : neg[i])
          if (!((world >> a) & 1)) cs = true;
        all = cs;
      }
      satisfiable = all;
    }
    TermStore ts;
    std::vector<Clause> sos;
    for (int i = 0; i < nclauses; ++i) {
      std::vector<Literal> lits;
      for (int a : neg[i]) lits.push_back({false, ts.constant("A" + std::to_string(a))});
      if (head[i] >= 0) lits.push_back({true, ts.constant("A" + std::to_string(head[i]))});
      sos.push_back(make_clause(ts, std::move(lits), Origin{"input", {}, {}}));
    }
    Limits lim;
    lim.max_given = 20000;
    Outcome o = saturate(ts, {}, sos, {RuleKind::UR}, lim);
    (satisfiable ? sat_seen : unsat_seen)++;
    bool refuted = o.kind == OutcomeKind::Refutation;
    if (refuted == satisfiable || o.kind == OutcomeKind::LimitHit) ++mismatches;
  }
  std::ostringstream d;
  d << "200 trials (" << unsat_seen << " unsat, " << sat_seen << " sat), " << mismatches
    << " mismatches";
  report(6, "ur saturation matches a truth-table oracle on random ground Horn sets",
         mismatches == 0 && unsat_seen > 10 && sat_seen > 10, d.str());
}

// ---- criterion 7: worked examples ----

std::set<std::string> resolvent_union(TermStore& ts, RuleKind rule,
                                      const std::vector<const Clause*>& set) {
  std::set<std::string> out;
  for (const Clause* g : set) {
    auto rs = rule == RuleKind::Hyper ? hyper_resolve(ts, *g, set) : ur_resolve(ts, *g, set);
    for (const Clause& c : rs) out.insert(clause_to_string(ts, c));
  }
  return out;
}

void criterion_7() {
  TermStore ts;
  auto lit = [&](bool pos, const char* p) { return Literal{pos, ts.constant(p)}; };
  auto mk = [&](std::vector<Literal> ls) {
    static int id = 0;
    return make_clause(ts, std::move(ls), Origin{"input", {}, {}}, ++id);
  };

  Clause hn = mk({lit(false, "P"), lit(false, "Q"), lit(false, "R"), lit(true, "S")});
  Clause h1 = mk({lit(true, "P"), lit(true, "T")});
  Clause h2 = mk({lit(true, "Q"), lit(true, "W")});
  Clause h3 = mk({lit(true, "R")});
  auto hyper_set = resolvent_union(ts, RuleKind::Hyper, {&hn, &h1, &h2, &h3});
  std::string tws = clause_to_string(ts, mk({lit(true, "T"), lit(true, "W"), lit(true, "S")}));
  bool ok_h = hyper_set == std::set<std::string>{tws};

  Clause un = mk({lit(false, "P"), lit(false, "Q"), lit(true, "R")});
  Clause u1 = mk({lit(true, "P")});
  Clause u2 = mk({lit(false, "R")});
  auto ur_set = resolvent_union(ts, RuleKind::UR, {&un, &u1, &u2});
  bool ok_u = ur_set == std::set<std::string>{"-Q"};

  bool ok_none = hyper_resolve(ts, un, {&un, &u1}).empty() &&
                 hyper_resolve(ts, u1, {&un, &u1}).empty();

  std::ostringstream d;
  d << "hyper gives exactly {" << tws << "}: " << (ok_h ? "yes" : "no")
    << "; ur gives exactly {-Q}: " << (ok_u ? "yes" : "no")
    << "; hyper with satellite P alone derives nothing: " << (ok_none ? "yes" : "no");
  report(7, "worked examples produce exactly the expected resolvents", ok_h && ok_u && ok_none,
         d.str());
}

// ---- criterion 8: structural invariants ----

void criterion_8() {
  // Resolvent shapes on random propositional sets, straight from the
  // generators.
  std::mt19937 rng(99);
  const char* preds[6] = {"A", "B", "C", "D", "E", "F"};
  bool shapes_ok = true;
  for (int trial = 0; trial < 150 && shapes_ok; ++trial) {
    TermStore ts;
    std::vector<Clause> cs;
    int n = 3 + rng() % 4;
    for (int i = 0; i < n; ++i) {
      std::vector<Literal> lits;
      int k = 1 + rng() % 3;
      for (int j = 0; j < k; ++j)
        lits.push_back({rng() % 2 == 0, ts.constant(preds[rng() % 6])});
      Clause c = make_clause(ts, std::move(lits), Origin{"input", {}, {}}, i + 1);
      if (!c.tautology) cs.push_back(std::move(c));
    }
    std::vector<const Clause*> set;
    for (const Clause& c : cs) set.push_back(&c);
    for (const Clause* g : set) {
      for (const Clause& r : hyper_resolve(ts, *g, set))
        if (!r.positive()) shapes_ok = false;
      for (const Clause& r : ur_resolve(ts, *g, set))
        if (r.lits.size() != 1) shapes_ok = false;
    }
  }

  // Support discipline: in a refutation every derived step descends from the
  // initial support set (the input facts of the circuit encoding).
  Solved s = solve(ninv_problem(2, 2), RuleKind::UR);
  bool support_ok = s.outcome.kind == OutcomeKind::Refutation;
  if (support_ok) {
    std::set<int> supported;
    for (const Clause& c : s.outcome.proof) {
      if (c.origin.rule == "fact") supported.insert(c.id);
      bool derived = c.origin.rule == "hyper" || c.origin.rule == "ur" ||
                     c.origin.rule == "binary" || c.origin.rule == "factor" ||
                     c.origin.rule == "unit_conflict";
      if (!derived) continue;
      bool has = false;
      for (int p : c.origin.parents) has = has || supported.count(p);
      if (!has) support_ok = false;
      supported.insert(c.id);
    }
  }

  // Trace bookkeeping and determinism on a capped first-order run.
  auto traced = [](long cap) {
    TermStore ts;
    Encoding enc(ts, two_inverter_problem());
    Limits lim;
    lim.max_given = cap;
    Prover p(ts, {RuleKind::UR}, {}, lim, enc.hooks());
    for (Clause& c : enc.usable) p.add_usable(std::move(c));
    for (Clause& c : enc.sos) p.add_sos(std::move(c));
    std::ostringstream trace;
    Outcome o = p.run(&trace);
    return std::pair<std::string, Outcome>(trace.str(), std::move(o));
  };
  auto [t1, o1] = traced(2000);
  auto [t2, o2] = traced(2000);
  bool trace_ok = t1 == t2 && o1.trace.size() == size_t(o1.stats.given_count) &&
                  std::count(t1.begin(), t1.end(), '\n') == o1.stats.given_count + 1;

  std::ostringstream d;
  d << "resolvent shapes " << (shapes_ok ? "ok" : "VIOLATED") << "; support ancestry "
    << (support_ok ? "ok" : "VIOLATED") << "; trace rows == iterations and byte-identical replay "
    << (trace_ok ? "ok" : "VIOLATED");
  report(8, "structural invariants: signs, units, support ancestry, deterministic trace",
         shapes_ok && support_ok && trace_ok, d.str());
}

// ---- criterion 9: context subsumption in the list encoding ----

void criterion_9() {
  TermStore ts;
  Encoding enc(ts, two_inverter_problem());
  Sym P = ts.intern("P"), L = ts.intern("L"), inv = ts.intern("inv");
  TermId v = ts.var("v");
  TermId in1 = ts.mk(enc.pattern_sym(SignalPattern::from_string("00001111").bits), {});
  TermId o1 = ts.mk(enc.pattern_sym(SignalPattern::from_string("11110000").bits), {});

  Clause bare = make_clause(ts, {{true, ts.mk(P, {in1, v})}}, Origin{"input", {}, {}});
  Clause once = make_clause(ts, {{true, ts.mk(P, {o1, ts.mk(L, {ts.mk(inv, {o1}), v})})}},
                            Origin{"input", {}, {}});
  TermId twice_list = ts.mk(L, {ts.mk(inv, {in1}), ts.mk(L, {ts.mk(inv, {o1}), v})});
  Clause twice =
      make_clause(ts, {{true, ts.mk(P, {in1, twice_list})}}, Origin{"input", {}, {}});

  bool direct = subsumes(ts, bare, twice) && !subsumes(ts, twice, bare);

  // Through the prover: once `bare` is retained, regenerating the same
  // pattern behind two inverters is forward-subsumed at retention.
  TermId q = ts.constant("Q");
  Clause trigger = make_clause(ts, {{true, q}}, Origin{"input", {}, {}});
  Clause rule = make_clause(ts, {{false, q}, twice.lits[0]}, Origin{"input", {}, {}});
  Outcome o = saturate(ts, {bare, rule}, {trigger}, {RuleKind::UR});
  bool in_prover = o.kind == OutcomeKind::SosExhausted && o.stats.clauses_forward_subsumed == 1 &&
                   o.stats.clauses_retained == 0;

  std::ostringstream d;
  d << "theta-subsumption " << (direct ? "ok" : "VIOLATED") << "; forward subsumption at retention "
    << (in_prover ? "ok" : "VIOLATED");
  report(9, "open-context facts subsume the same pattern behind inverters", direct && in_prover,
         d.str());
}

}  // namespace

int main() {
  fs::path work = fs::temp_directory_path() / "prover_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  criteria_1_2(work);
  criterion_3(work);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << "\n";
  return failures;
}
