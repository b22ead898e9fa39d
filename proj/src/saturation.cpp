#include "prover/saturation.hpp"

#include <algorithm>
#include <array>
#include <ctime>

namespace prover {

const char* outcome_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::Refutation: return "refutation";
    case OutcomeKind::SosExhausted: return "sos_exhausted";
    case OutcomeKind::LimitHit: return "limit_hit";
  }
  return "?";
}

const char* limit_name(LimitKind k) {
  switch (k) {
    case LimitKind::None: return "none";
    case LimitKind::MaxGiven: return "max_given";
    case LimitKind::MaxSeconds: return "max_seconds";
    case LimitKind::MaxRetained: return "max_retained";
  }
  return "?";
}

namespace {

constexpr int32_t kFpVar = -1;
constexpr int32_t kFpBelowVar = -2;
constexpr int32_t kFpNone = -3;

// Sampled positions below the atom, used as a quick subsumption prefilter.
constexpr std::array<std::array<int, 3>, 5> kFpPaths = {{
    {0, -1, -1}, {1, -1, -1}, {1, 0, -1}, {1, 0, 0}, {1, 1, -1},
}};

int32_t fp_at(const TermStore& ts, TermId t, const std::array<int, 3>& path) {
  for (int step : path) {
    if (step < 0) break;
    if (ts.is_var(t)) return kFpBelowVar;
    const auto& as = ts.args(t);
    if (static_cast<size_t>(step) >= as.size()) return kFpNone;
    t = as[step];
  }
  return ts.is_var(t) ? kFpVar : ts.sym(t);
}

std::array<int32_t, 5> fingerprint(const TermStore& ts, TermId atom) {
  std::array<int32_t, 5> fp;
  for (size_t i = 0; i < kFpPaths.size(); ++i) fp[i] = fp_at(ts, atom, kFpPaths[i]);
  return fp;
}

// May literal with fingerprint c match (one-way) a literal with fingerprint d?
bool fp_compatible(const std::array<int32_t, 5>& c, const std::array<int32_t, 5>& d) {
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == kFpBelowVar || c[i] == kFpNone) continue;
    if (c[i] == kFpVar) {
      if (d[i] == kFpNone) return false;
    } else if (c[i] != d[i] && d[i] != kFpBelowVar) {
      // d below-var cannot be matched by a concrete c symbol either, but the
      // mismatch already shows up at the parent position; stay conservative.
      if (d[i] != kFpBelowVar) return false;
    }
  }
  return true;
}

}  // namespace

Prover::Prover(TermStore& ts, RuleConfig rule, SelectStrategy select, Limits limits, Hooks hooks)
    : ts_(ts), rule_(rule), select_(select), limits_(limits), hooks_(std::move(hooks)) {}

int Prover::add_clause(Clause c, Loc loc) {
  c = make_clause(ts_, std::move(c.lits), std::move(c.origin), next_id_++);
  int id = c.id;
  Entry e{std::move(c), loc, true, seq_++, {}};
  if (!e.c.lits.empty()) e.fp0 = fingerprint(ts_, e.c.lits[0].atom);
  auto [it, ok] = clauses_.emplace(id, std::move(e));
  index_clause(it->second);
  const Entry& ent = it->second;
  if (loc == Loc::Usable) {
    usable_.push_back(id);
    usable_index_.add(ts_, &ent.c);
  } else if (loc == Loc::Sos) {
    sos_by_weight_.insert({ent.c.weight, ent.seq, id});
    sos_fifo_.push_back(id);
    ++sos_count_;
    stats_.sos_size_peak = std::max(stats_.sos_size_peak, sos_count_);
  }
  return id;
}

namespace {

// Bucket key component for a literal's first argument: its symbol when
// ground-headed, -1 when it is a variable or the atom has no arguments.
int32_t arg0_key(const TermStore& ts, TermId atom) {
  const auto& as = ts.args(atom);
  if (as.empty() || ts.is_var(as[0])) return -1;
  return ts.sym(as[0]);
}

}  // namespace

void Prover::index_clause(const Entry& e) {
  if (e.c.lits.empty()) return;
  const Literal& l0 = e.c.lits[0];
  buckets_[{ts_.sym(l0.atom), l0.positive, arg0_key(ts_, l0.atom)}].push_back(e.c.id);
  if (e.c.unit()) units_[{ts_.sym(l0.atom), l0.positive}].push_back(e.c.id);
}

int Prover::add_usable(Clause c) { return add_clause(std::move(c), Loc::Usable); }

int Prover::add_sos(Clause c) {
  int id = add_clause(std::move(c), Loc::Sos);
  initial_sos_.push_back(id);
  return id;
}

int Prover::add_passive(Clause c) { return add_clause(std::move(c), Loc::Passive); }

const Clause* Prover::clause_by_id(int id) const {
  auto it = clauses_.find(id);
  return it == clauses_.end() ? nullptr : &it->second.c;
}

std::optional<int> Prover::find_forward_subsumer(const Clause& c) {
  std::vector<int> tested;
  for (const Literal& ld : c.lits) {
    auto fpd = fingerprint(ts_, ld.atom);
    auto scan = [&](int32_t a0) -> std::optional<int> {
      auto it = buckets_.find({ts_.sym(ld.atom), ld.positive, a0});
      if (it == buckets_.end()) return std::nullopt;
      for (int cid : it->second) {
        const Entry& e = clauses_.at(cid);
        if (!e.alive) continue;
        if (e.c.lits.size() > c.lits.size()) continue;
        if (!fp_compatible(e.fp0, fpd)) continue;
        if (std::find(tested.begin(), tested.end(), cid) != tested.end()) continue;
        tested.push_back(cid);
        if (subsumes(ts_, e.c, c)) return cid;
      }
      return std::nullopt;
    };
    // A variable-headed bucket entry can match anything; a ground-headed one
    // only matches the same first-argument symbol.
    int32_t a0 = arg0_key(ts_, ld.atom);
    if (a0 != -1)
      if (auto hit = scan(a0)) return hit;
    if (auto hit = scan(-1)) return hit;
  }
  return std::nullopt;
}

std::optional<Clause> Prover::try_unit_conflicts(const Clause& u) {
  if (!u.unit()) return std::nullopt;
  const Literal& l = u.lits[0];
  auto it = units_.find({ts_.sym(l.atom), !l.positive});
  if (it == units_.end()) return std::nullopt;
  for (int cid : it->second) {
    const Entry& e = clauses_.at(cid);
    if (!e.alive) continue;
    if (!may_unify(ts_, l.atom, e.c.lits[0].atom)) continue;
    if (auto empty = unit_conflict(ts_, u, e.c)) return empty;
  }
  return std::nullopt;
}

Prover::ProcessResult Prover::process_new_clause(Clause c) {
  ++stats_.clauses_generated;
  if (hooks_.eval) {
    std::vector<Literal> lits = c.lits;
    for (Literal& l : lits) l.atom = hooks_.eval(ts_, l.atom);
    c = make_clause(ts_, std::move(lits), std::move(c.origin));
  }
  c.id = next_id_++;
  auto discard = [&]() {
    ++stats_.clauses_discarded;
    return ProcessResult::Discarded;
  };
  if (hooks_.keep && !hooks_.keep(ts_, c)) return discard();
  if (c.tautology) return discard();
  if (c.empty()) {
    Entry e{c, Loc::Sos, true, seq_++, {}};
    clauses_.emplace(c.id, std::move(e));
    ++stats_.clauses_retained;
    refutation_ = std::move(c);
    return ProcessResult::Refutation;
  }
  if (limits_.max_weight && c.weight > *limits_.max_weight) return discard();
  if (auto sub = find_forward_subsumer(c)) {
    ++stats_.clauses_forward_subsumed;
    if (clauses_.at(*sub).loc == Loc::Sos) ++stats_.subsumed_by_sos;
    ++stats_.clauses_discarded;
    return ProcessResult::Discarded;
  }
  std::optional<Clause> empty;
  if (c.unit()) empty = try_unit_conflicts(c);

  Entry e{c, Loc::Sos, true, seq_++, {}};
  e.fp0 = fingerprint(ts_, c.lits[0].atom);
  auto [it, ok] = clauses_.emplace(c.id, std::move(e));
  index_clause(it->second);
  ++stats_.clauses_retained;

  if (empty) {
    empty->id = next_id_++;
    ++stats_.clauses_generated;
    ++stats_.clauses_retained;
    Entry ee{*empty, Loc::Sos, true, seq_++, {}};
    clauses_.emplace(empty->id, std::move(ee));
    refutation_ = std::move(*empty);
    return ProcessResult::Refutation;
  }

  sos_by_weight_.insert({it->second.c.weight, it->second.seq, c.id});
  sos_fifo_.push_back(c.id);
  ++sos_count_;
  stats_.sos_size_peak = std::max(stats_.sos_size_peak, sos_count_);

  if (back_subsumption) {
    for (auto& [oid, oe] : clauses_) {
      if (!oe.alive || oid == c.id || oe.loc == Loc::Passive) continue;
      if (subsumes(ts_, clauses_.at(c.id).c, oe.c)) {
        oe.alive = false;
        if (oe.loc == Loc::Sos) {
          sos_by_weight_.erase({oe.c.weight, oe.seq, oid});
          --sos_count_;
        } else if (oe.loc == Loc::Usable) {
          usable_index_.remove(oid);
        }
      }
    }
  }

  // Single-step factors of the retained clause are processed in turn.
  for (Clause& f : factors(ts_, clauses_.at(c.id).c)) {
    if (process_new_clause(std::move(f)) == ProcessResult::Refutation)
      return ProcessResult::Refutation;
  }
  return ProcessResult::Retained;
}

int Prover::select_given() {
  ++pick_no_;
  bool fifo = select_.mode == PickGiven::Fifo ||
              (select_.mode == PickGiven::Ratio && select_.ratio > 0 &&
               pick_no_ % select_.ratio == 0);
  int id = -1;
  if (fifo) {
    while (!sos_fifo_.empty()) {
      int cand = sos_fifo_.front();
      const Entry& e = clauses_.at(cand);
      if (e.alive && e.loc == Loc::Sos) {
        id = cand;
        sos_fifo_.pop_front();
        sos_by_weight_.erase({e.c.weight, e.seq, cand});
        break;
      }
      sos_fifo_.pop_front();
    }
  } else {
    while (!sos_by_weight_.empty()) {
      auto it = sos_by_weight_.begin();
      int cand = std::get<2>(*it);
      sos_by_weight_.erase(it);
      const Entry& e = clauses_.at(cand);
      if (e.alive && e.loc == Loc::Sos) {
        id = cand;
        break;
      }
    }
  }
  if (id >= 0) --sos_count_;
  return id;
}

bool Prover::limit_reached(LimitKind& which) const {
  if (limits_.max_given && stats_.given_count >= *limits_.max_given) {
    which = LimitKind::MaxGiven;
    return true;
  }
  if (limits_.max_retained && stats_.clauses_retained >= *limits_.max_retained) {
    which = LimitKind::MaxRetained;
    return true;
  }
  if (limits_.max_seconds) {
    double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (el >= *limits_.max_seconds) {
      which = LimitKind::MaxSeconds;
      return true;
    }
  }
  return false;
}

void Prover::build_proof(const Clause& empty_clause, Outcome& out) {
  std::vector<int> order;
  std::vector<int> work{empty_clause.id};
  std::set<int> seen{empty_clause.id};
  while (!work.empty()) {
    int id = work.back();
    work.pop_back();
    order.push_back(id);
    for (int p : clauses_.at(id).c.origin.parents)
      if (seen.insert(p).second) work.push_back(p);
  }
  std::sort(order.begin(), order.end());
  for (int id : order) out.proof.push_back(clauses_.at(id).c);
}

Outcome Prover::run(std::ostream* trace_csv) {
  start_ = std::chrono::steady_clock::now();
  std::clock_t cpu0 = std::clock();
  trace_out_ = trace_csv;
  if (trace_out_) *trace_out_ << "iteration,sos_size,given_id,given_weight\n";

  Outcome out;
  std::vector<const Clause*> usable_ptrs;
  for (int id : usable_) usable_ptrs.push_back(&clauses_.at(id).c);

  auto finish = [&](OutcomeKind kind, LimitKind lim) {
    out.kind = kind;
    out.limit = lim;
    stats_.sos_size_final = sos_count_;
    stats_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    stats_.cpu_seconds = double(std::clock() - cpu0) / CLOCKS_PER_SEC;
    out.stats = stats_;
    out.trace = trace_;
    if (trace_out_) trace_out_->flush();
    return out;
  };

  while (true) {
    LimitKind lim;
    if (limit_reached(lim)) return finish(OutcomeKind::LimitHit, lim);
    if (sos_count_ == 0) return finish(OutcomeKind::SosExhausted, LimitKind::None);

    int gid = select_given();
    if (gid < 0) return finish(OutcomeKind::SosExhausted, LimitKind::None);
    Entry& ge = clauses_.at(gid);
    ge.loc = Loc::Usable;
    usable_.push_back(gid);
    usable_ptrs.push_back(&ge.c);
    usable_index_.add(ts_, &ge.c);
    Clause given = ge.c;  // copy: the map may grow while we infer

    ++stats_.given_count;
    TracePoint tp{stats_.given_count, sos_count_, gid, given.weight};
    trace_.push_back(tp);
    if (trace_out_) {
      *trace_out_ << tp.iteration << ',' << tp.sos_size << ',' << tp.given_id << ','
                  << tp.given_weight << '\n';
      if (tp.iteration % 1000 == 0) trace_out_->flush();
    }

    // Unit conflict involving the given itself (covers unit-vs-unit inputs).
    if (auto empty = try_unit_conflicts(given)) {
      empty->id = next_id_++;
      ++stats_.clauses_generated;
      ++stats_.clauses_retained;
      clauses_.emplace(empty->id, Entry{*empty, Loc::Sos, true, seq_++, {}});
      build_proof(*empty, out);
      return finish(OutcomeKind::Refutation, LimitKind::None);
    }

    if (back_subsumption) {
      usable_ptrs.clear();
      for (int id : usable_)
        if (clauses_.at(id).alive) usable_ptrs.push_back(&clauses_.at(id).c);
    }

    std::vector<Clause> inferred = resolve(ts_, rule_, given, usable_ptrs, &usable_index_);
    for (Clause& c : inferred) {
      if (process_new_clause(std::move(c)) == ProcessResult::Refutation) {
        build_proof(*refutation_, out);
        return finish(OutcomeKind::Refutation, LimitKind::None);
      }
    }
  }
}

Outcome saturate(TermStore& ts, std::vector<Clause> usable, std::vector<Clause> sos,
                 RuleConfig rule, Limits limits, SelectStrategy select, Hooks hooks) {
  Prover p(ts, rule, select, limits, std::move(hooks));
  for (Clause& c : usable) p.add_usable(std::move(c));
  for (Clause& c : sos) p.add_sos(std::move(c));
  return p.run();
}

}  // namespace prover
