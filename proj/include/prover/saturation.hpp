#pragma once

#include <array>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <unordered_map>

#include "prover/inference.hpp"

namespace prover {

enum class PickGiven { Weight, Fifo, Ratio };

struct SelectStrategy {
  PickGiven mode = PickGiven::Weight;
  int ratio = 0;  // Ratio mode: every ratio-th pick is FIFO, others lightest-first
};

struct Limits {
  std::optional<long> max_given;
  std::optional<double> max_seconds;
  std::optional<int> max_weight;
  std::optional<long> max_retained;
};

// Problem-specific clause post-processing: `eval` rewrites interpreted terms
// (bitwise gate functions over ground patterns), `keep` rejects clauses that
// exceed a resource budget. Both optional.
struct Hooks {
  std::function<TermId(TermStore&, TermId)> eval;
  std::function<bool(TermStore&, const Clause&)> keep;
};

struct Stats {
  long clauses_generated = 0;
  long clauses_forward_subsumed = 0;
  long subsumed_by_sos = 0;
  long sos_size_final = 0;
  long sos_size_peak = 0;
  long given_count = 0;
  long clauses_retained = 0;
  long clauses_discarded = 0;
  double wall_seconds = 0;
  double cpu_seconds = 0;
};

struct TracePoint {
  long iteration;
  long sos_size;
  int given_id;
  int given_weight;
};

enum class OutcomeKind { Refutation, SosExhausted, LimitHit };
enum class LimitKind { None, MaxGiven, MaxSeconds, MaxRetained };

struct Outcome {
  OutcomeKind kind = OutcomeKind::SosExhausted;
  LimitKind limit = LimitKind::None;
  std::vector<Clause> proof;  // ancestor-closed, topologically ordered; empty unless refutation
  Stats stats;
  std::vector<TracePoint> trace;
};

const char* outcome_name(OutcomeKind k);
const char* limit_name(LimitKind k);

class Prover {
 public:
  Prover(TermStore& ts, RuleConfig rule, SelectStrategy select = {}, Limits limits = {},
         Hooks hooks = {});

  int add_usable(Clause c);
  int add_sos(Clause c);
  int add_passive(Clause c);

  // Runs the given-clause loop to refutation, empty sos, or a limit.
  // If trace_csv is set, writes `iteration,sos_size,given_id,given_weight`
  // rows incrementally.
  Outcome run(std::ostream* trace_csv = nullptr);

  bool back_subsumption = false;  // off by default; forward only is measured

  const Clause* clause_by_id(int id) const;
  const std::vector<int>& initial_sos_ids() const { return initial_sos_; }

 private:
  enum class Loc { Usable, Sos, Passive };
  struct Entry {
    Clause c;
    Loc loc;
    bool alive = true;
    int64_t seq = 0;
    std::array<int32_t, 5> fp0;  // fingerprint of first literal
  };
  enum class ProcessResult { Retained, Discarded, Refutation };

  int add_clause(Clause c, Loc loc);
  void index_clause(const Entry& e);
  ProcessResult process_new_clause(Clause c);
  std::optional<int> find_forward_subsumer(const Clause& c);
  std::optional<Clause> try_unit_conflicts(const Clause& u);
  int select_given();
  void build_proof(const Clause& empty_clause, Outcome& out);
  bool limit_reached(LimitKind& which) const;

  TermStore& ts_;
  RuleConfig rule_;
  SelectStrategy select_;
  Limits limits_;
  Hooks hooks_;

  std::unordered_map<int, Entry> clauses_;
  std::vector<int> usable_;
  UsableIndex usable_index_;  // incremental satellite index over usable_
  std::set<std::tuple<int, int64_t, int>> sos_by_weight_;  // (weight, seq, id)
  std::deque<int> sos_fifo_;
  long sos_count_ = 0;
  // (pred, sign, arg0 sym or -1 when variable/absent) -> ids. A subsumer whose
  // first literal has a ground first argument can only match literals with
  // that same first argument, so the extra key component keeps buckets small.
  std::map<std::tuple<Sym, bool, int32_t>, std::vector<int>> buckets_;
  std::map<std::pair<Sym, bool>, std::vector<int>> units_;
  std::vector<int> initial_sos_;
  int next_id_ = 1;
  int64_t seq_ = 0;
  long pick_no_ = 0;
  Stats stats_;
  std::vector<TracePoint> trace_;
  std::ostream* trace_out_ = nullptr;
  std::optional<Clause> refutation_;
  std::chrono::steady_clock::time_point start_;
};

// Convenience wrapper matching the one-shot use in tests.
Outcome saturate(TermStore& ts, std::vector<Clause> usable, std::vector<Clause> sos,
                 RuleConfig rule, Limits limits = {}, SelectStrategy select = {},
                 Hooks hooks = {});

}  // namespace prover
