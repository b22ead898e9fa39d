#include "prover/inference.hpp"

#include <algorithm>

namespace prover {

namespace {

// Renames into a per-slot pool alphabet: clauses renamed at different slots
// (and the canonical nucleus) can never share variables, and repeated
// renamings of one clause reuse the same hash-consed terms.
Clause rename_clause(TermStore& ts, const Clause& c, int pool) {
  std::unordered_map<Sym, TermId> m;
  int next = 0;
  Clause r = c;
  for (Literal& l : r.lits) l.atom = rename_pooled(ts, l.atom, pool, m, next);
  return r;
}

// Pooled renaming is deterministic per (clause, pool), so one resolve call can
// reuse renamings across nuclei and clash states.
struct RenameCache {
  std::unordered_map<int64_t, Clause> memo;
  const Clause& get(TermStore& ts, const Clause& c, int pool) {
    int64_t key = (static_cast<int64_t>(c.id) << 16) | pool;
    auto it = memo.find(key);
    if (it == memo.end()) it = memo.emplace(key, rename_clause(ts, c, pool)).first;
    return it->second;
  }
};

struct ClashState {
  Subst s;
  std::vector<Literal> residuals;                // satellite leftovers, pre-final-subst
  std::vector<std::pair<int, int>> clashes;      // (nucleus lit index, satellite id)
  std::vector<int> sat_ids;
  bool used_given = false;
};

// Symbol class at a sampled subterm position: the symbol when the position
// exists and is ground-headed, kSampleWild when a variable sits at or above
// it, kSampleNone when the position does not exist.
constexpr int32_t kSampleWild = -1;
constexpr int32_t kSampleNone = -2;

int32_t sample_at(const TermStore& ts, TermId t, std::initializer_list<int> path) {
  for (int step : path) {
    if (ts.is_var(t)) return kSampleWild;
    const auto& as = ts.args(t);
    if (static_cast<size_t>(step) >= as.size()) return kSampleNone;
    t = as[step];
  }
  return ts.is_var(t) ? kSampleWild : ts.sym(t);
}

// Positions sampled by the secondary index family: the second argument's
// first substructure and its successor (for context-list atoms these are the
// first two committed cells).
constexpr std::initializer_list<int> kCell1Path = {1, 0, 0};
constexpr std::initializer_list<int> kCell2Path = {1, 1, 0, 0};

// Candidate literals indexed by sign, predicate and sampled symbols: the
// first-argument head in one family, the two kCell paths in a second. A
// clash slot queries whichever family is ground in its target, so it only
// scans literals that can possibly unify. Because functor arity is fixed,
// a position that is absent in one atom but ground in the other proves the
// two cannot unify, so kSampleNone behaves like an ordinary symbol.
struct CandIndex {
  using Slot = std::pair<const Clause*, int>;  // (clause, literal index)
  std::unordered_map<int64_t, std::vector<Slot>> all;      // (sign, pred)
  std::unordered_map<int64_t, std::vector<Slot>> by_arg0;  // (sign, pred, arg0)
  std::unordered_map<int64_t, std::vector<Slot>> var0;     // (sign, pred), arg0 variable
  std::unordered_map<int64_t, std::vector<Slot>> cell1;    // (sign, pred, c1)
  std::unordered_map<int64_t, std::vector<Slot>> cell2;    // (sign, pred, c1, c2)

  static int64_t k2(bool pos, Sym p) { return (static_cast<int64_t>(p) << 1) | pos; }
  static int64_t k3(bool pos, Sym p, int32_t a0) {
    return ((static_cast<int64_t>(a0) + 3) << 33) | (static_cast<int64_t>(p) << 1) | pos;
  }
  static int64_t k4(bool pos, Sym p, int32_t c1, int32_t c2) {
    return ((static_cast<int64_t>(c1) + 3) << 44) | ((static_cast<int64_t>(c2) + 3) << 24) |
           (static_cast<int64_t>(p) << 1) | pos;
  }

  void add(const TermStore& ts, const Clause* c) {
    for (int j = 0; j < static_cast<int>(c->lits.size()); ++j) {
      const Literal& l = c->lits[j];
      Sym p = ts.sym(l.atom);
      all[k2(l.positive, p)].push_back({c, j});
      const auto& as = ts.args(l.atom);
      if (!as.empty()) {
        if (ts.is_var(as[0]))
          var0[k2(l.positive, p)].push_back({c, j});
        else
          by_arg0[k3(l.positive, p, ts.sym(as[0]))].push_back({c, j});
      }
      int32_t c1 = sample_at(ts, l.atom, kCell1Path);
      int32_t c2 = sample_at(ts, l.atom, kCell2Path);
      cell1[k3(l.positive, p, c1)].push_back({c, j});
      cell2[k4(l.positive, p, c1, c2)].push_back({c, j});
    }
  }

  void remove(int clause_id) {
    auto strip = [&](std::unordered_map<int64_t, std::vector<Slot>>& m) {
      for (auto& [k, v] : m)
        std::erase_if(v, [&](const Slot& sl) { return sl.first->id == clause_id; });
    };
    strip(all);
    strip(by_arg0);
    strip(var0);
    strip(cell1);
    strip(cell2);
  }
};

bool hyper_satellite_ok(const Clause& c) { return c.positive() && !c.empty(); }
bool ur_satellite_ok(const Clause& c) { return c.unit(); }

// Can some literal of a clash against some literal of b at all?
bool can_clash(const TermStore& ts, const Clause& a, const Clause& b) {
  for (const Literal& la : a.lits)
    for (const Literal& lb : b.lits)
      if (la.positive != lb.positive && ts.sym(la.atom) == ts.sym(lb.atom) &&
          may_unify(ts, la.atom, lb.atom))
        return true;
  return false;
}

// Clashes nucleus literals at `order` (processed front to back) against one
// candidate literal each; calls emit() for every complete simultaneous
// unifier. The index already holds only rule-eligible candidate clauses.
// modes[i] controls slot i: Any candidate, given ExcludedAt (duplicate
// avoidance), or GivenOnly.
enum class SlotMode : int8_t { Any, ExcludeGiven, GivenOnly };

template <typename Emit>
void clash_rec(TermStore& ts, RenameCache& rc, const Clause& nucleus,
               const std::vector<int>& order, const std::vector<SlotMode>& modes,
               const CandIndex& idx, size_t i, ClashState& st, const Clause* given,
               const Emit& emit) {
  if (i == order.size()) {
    // Slots may have been processed out of nucleus-literal order; restore it
    // so provenance is independent of the processing schedule.
    ClashState fin = st;
    std::sort(fin.clashes.begin(), fin.clashes.end());
    fin.sat_ids.clear();
    for (const auto& [pos, sid] : fin.clashes) fin.sat_ids.push_back(sid);
    emit(fin);
    return;
  }
  const Literal& nl = nucleus.lits[order[i]];
  TermId target = st.s.apply(ts, nl.atom);

  auto try_slot = [&](const Clause* cand, int j) {
    const Literal& cl = cand->lits[j];
    if (cl.positive == nl.positive) return;  // clash needs opposite signs
    if (ts.sym(cl.atom) != ts.sym(target)) return;
    if (!may_unify(ts, target, cl.atom)) return;
    const Clause& cr = rc.get(ts, *cand, static_cast<int>(i) + 1);
    Subst s2 = st.s;
    if (!unify_into(ts, s2, target, cr.lits[j].atom)) return;
    ClashState st2;
    st2.s = std::move(s2);
    st2.residuals = st.residuals;
    for (size_t k = 0; k < cr.lits.size(); ++k)
      if (static_cast<int>(k) != j) st2.residuals.push_back(cr.lits[k]);
    st2.clashes = st.clashes;
    st2.clashes.emplace_back(order[i], cand->id);
    st2.sat_ids = st.sat_ids;
    st2.sat_ids.push_back(cand->id);
    clash_rec(ts, rc, nucleus, order, modes, idx, i + 1, st2, given, emit);
  };

  if (modes[i] == SlotMode::GivenOnly) {
    for (int j = 0; j < static_cast<int>(given->lits.size()); ++j) try_slot(given, j);
    return;
  }

  bool skip_given = modes[i] == SlotMode::ExcludeGiven;
  bool want_pos = !nl.positive;
  Sym p = ts.sym(target);
  auto visit = [&](const std::unordered_map<int64_t, std::vector<CandIndex::Slot>>& m,
                   int64_t key) {
    auto it = m.find(key);
    if (it == m.end()) return;
    for (const auto& [cand, j] : it->second) {
      if (skip_given && cand->id == given->id) continue;
      try_slot(cand, j);
    }
  };
  const auto& as = ts.args(target);
  if (!as.empty() && !ts.is_var(as[0])) {
    visit(idx.by_arg0, CandIndex::k3(want_pos, p, ts.sym(as[0])));
    visit(idx.var0, CandIndex::k2(want_pos, p));
    return;
  }
  int32_t c1 = sample_at(ts, target, kCell1Path);
  if (c1 == kSampleWild) {
    visit(idx.all, CandIndex::k2(want_pos, p));
    return;
  }
  int32_t c2 = sample_at(ts, target, kCell2Path);
  for (int32_t x : {c1, kSampleWild}) {
    if (c2 == kSampleWild) {
      visit(idx.cell1, CandIndex::k3(want_pos, p, x));
    } else {
      visit(idx.cell2, CandIndex::k4(want_pos, p, x, c2));
      visit(idx.cell2, CandIndex::k4(want_pos, p, x, kSampleWild));
    }
  }
}

// Runs clash_rec once per way the given can fill a slot (`need_given`), or
// once without any given constraint. Duplicate tuples are avoided by fixing
// the first slot the given occupies; that slot is unified first so the
// given's bindings prune the remaining slots.
template <typename CandFilter, typename Emit>
void clash_slots(TermStore& ts, RenameCache& rc, const Clause& nucleus,
                 const std::vector<int>& positions, const CandIndex& idx, CandFilter given_ok,
                 const Clause* given, bool need_given, const Emit& emit) {
  if (!need_given) {
    std::vector<SlotMode> modes(positions.size(), SlotMode::Any);
    ClashState st;
    clash_rec(ts, rc, nucleus, positions, modes, idx, 0, st, given, emit);
    return;
  }
  if (!given_ok(*given)) return;
  for (size_t gi = 0; gi < positions.size(); ++gi) {
    std::vector<int> order{positions[gi]};
    std::vector<SlotMode> modes{SlotMode::GivenOnly};
    for (size_t k = 0; k < positions.size(); ++k) {
      if (k == gi) continue;
      order.push_back(positions[k]);
      modes.push_back(k < gi ? SlotMode::ExcludeGiven : SlotMode::Any);
    }
    ClashState st;
    clash_rec(ts, rc, nucleus, order, modes, idx, 0, st, given, emit);
  }
}


void hyper_from_nucleus(TermStore& ts, RenameCache& rc, const Clause& nucleus,
                        const CandIndex& idx, const Clause* given, bool need_given,
                        std::vector<Clause>& out) {
  std::vector<int> negpos;
  for (size_t i = 0; i < nucleus.lits.size(); ++i)
    if (!nucleus.lits[i].positive) negpos.push_back(static_cast<int>(i));
  if (negpos.empty()) return;
  clash_slots(
      ts, rc, nucleus, negpos, idx, hyper_satellite_ok, given, need_given,
      [&](const ClashState& fin) {
        std::vector<Literal> lits;
        for (const Literal& l : nucleus.lits)
          if (l.positive) lits.push_back({true, fin.s.apply(ts, l.atom)});
        for (const Literal& l : fin.residuals) lits.push_back({true, fin.s.apply(ts, l.atom)});
        Origin o{"hyper", {nucleus.id}, fin.clashes};
        for (int sid : fin.sat_ids) o.parents.push_back(sid);
        out.push_back(make_clause(ts, std::move(lits), std::move(o)));
      });
}


void ur_from_nucleus(TermStore& ts, RenameCache& rc, const Clause& nucleus,
                     const CandIndex& idx, const Clause* given, bool need_given,
                     UrPolarity pol, std::vector<Clause>& out) {
  if (nucleus.lits.size() < 2) return;
  for (size_t r = 0; r < nucleus.lits.size(); ++r) {
    if (pol == UrPolarity::PositiveOnly && !nucleus.lits[r].positive) continue;
    if (pol == UrPolarity::NegativeOnly && nucleus.lits[r].positive) continue;
    std::vector<int> positions;
    for (size_t i = 0; i < nucleus.lits.size(); ++i)
      if (i != r) positions.push_back(static_cast<int>(i));
    clash_slots(
        ts, rc, nucleus, positions, idx, ur_satellite_ok, given, need_given,
        [&](const ClashState& fin) {
          std::vector<Literal> lits{
              {nucleus.lits[r].positive, fin.s.apply(ts, nucleus.lits[r].atom)}};
          Origin o{"ur", {nucleus.id}, fin.clashes};
          for (int sid : fin.sat_ids) o.parents.push_back(sid);
          out.push_back(make_clause(ts, std::move(lits), std::move(o)));
        });
  }
}

}  // namespace

struct UsableIndex::Impl {
  CandIndex hyper;  // positive non-empty clauses (hyper satellites)
  CandIndex ur;     // unit clauses (UR satellites)
};

UsableIndex::UsableIndex() : impl(std::make_unique<Impl>()) {}
UsableIndex::~UsableIndex() = default;

void UsableIndex::add(const TermStore& ts, const Clause* c) {
  if (hyper_satellite_ok(*c)) impl->hyper.add(ts, c);
  if (ur_satellite_ok(*c)) impl->ur.add(ts, c);
}

void UsableIndex::remove(int clause_id) {
  impl->hyper.remove(clause_id);
  impl->ur.remove(clause_id);
}

std::vector<Clause> hyper_resolve(TermStore& ts, const Clause& given,
                                  const std::vector<const Clause*>& usable,
                                  const UsableIndex* index) {
  std::vector<Clause> out;
  RenameCache rc;
  CandIndex local;
  if (!index)
    for (const Clause* c : usable)
      if (hyper_satellite_ok(*c)) local.add(ts, c);
  const CandIndex& idx = index ? index->impl->hyper : local;
  if (given.has_negative()) {
    hyper_from_nucleus(ts, rc, given, idx, &given, false, out);
  }
  if (given.positive() && !given.empty()) {
    for (const Clause* nucleus : usable) {
      if (nucleus->id == given.id) continue;
      if (!nucleus->has_negative()) continue;
      if (!can_clash(ts, *nucleus, given)) continue;
      hyper_from_nucleus(ts, rc, *nucleus, idx, &given, true, out);
    }
  }
  return out;
}

std::vector<Clause> ur_resolve(TermStore& ts, const Clause& given,
                               const std::vector<const Clause*>& usable, UrPolarity polarity,
                               const UsableIndex* index) {
  std::vector<Clause> out;
  RenameCache rc;
  CandIndex local;
  if (!index)
    for (const Clause* c : usable)
      if (ur_satellite_ok(*c)) local.add(ts, c);
  const CandIndex& idx = index ? index->impl->ur : local;
  if (given.lits.size() >= 2) {
    ur_from_nucleus(ts, rc, given, idx, &given, false, polarity, out);
  }
  if (given.unit()) {
    for (const Clause* nucleus : usable) {
      if (nucleus->id == given.id) continue;
      if (nucleus->lits.size() < 2) continue;
      if (!can_clash(ts, *nucleus, given)) continue;
      ur_from_nucleus(ts, rc, *nucleus, idx, &given, true, polarity, out);
    }
  }
  return out;
}

std::vector<Clause> binary_resolve(TermStore& ts, const Clause& given,
                                   const std::vector<const Clause*>& usable) {
  std::vector<Clause> out;
  for (size_t i = 0; i < given.lits.size(); ++i) {
    const Literal& li = given.lits[i];
    for (const Clause* d : usable) {
      for (size_t j = 0; j < d->lits.size(); ++j) {
        const Literal& lj = d->lits[j];
        if (lj.positive == li.positive) continue;
        if (ts.sym(lj.atom) != ts.sym(li.atom)) continue;
        if (!may_unify(ts, li.atom, lj.atom)) continue;
        Clause dr = rename_clause(ts, *d, 1);
        Subst s;
        if (!unify_into(ts, s, li.atom, dr.lits[j].atom)) continue;
        std::vector<Literal> lits;
        for (size_t k = 0; k < given.lits.size(); ++k)
          if (k != i) lits.push_back({given.lits[k].positive, s.apply(ts, given.lits[k].atom)});
        for (size_t k = 0; k < dr.lits.size(); ++k)
          if (k != j) lits.push_back({dr.lits[k].positive, s.apply(ts, dr.lits[k].atom)});
        out.push_back(make_clause(ts, std::move(lits), Origin{"binary", {given.id, d->id}, {}}));
      }
    }
  }
  return out;
}

std::vector<Clause> resolve(TermStore& ts, const RuleConfig& cfg, const Clause& given,
                            const std::vector<const Clause*>& usable, const UsableIndex* index) {
  switch (cfg.rule) {
    case RuleKind::Hyper:
      return hyper_resolve(ts, given, usable, index);
    case RuleKind::UR:
      return ur_resolve(ts, given, usable, cfg.ur_polarity, index);
    case RuleKind::Binary:
      return binary_resolve(ts, given, usable);
  }
  return {};
}

}  // namespace prover
