#include "prover/clause.hpp"

#include <algorithm>

namespace prover {

bool Clause::positive() const {
  for (const Literal& l : lits)
    if (!l.positive) return false;
  return true;
}

bool Clause::has_negative() const {
  for (const Literal& l : lits)
    if (!l.positive) return true;
  return false;
}

namespace {

int term_cmp(const TermStore& ts, TermId a, TermId b) {
  if (a == b) return 0;
  bool va = ts.is_var(a), vb = ts.is_var(b);
  if (va != vb) return va ? -1 : 1;
  if (ts.sym(a) != ts.sym(b)) return ts.sym(a) < ts.sym(b) ? -1 : 1;
  const auto& xa = ts.args(a);
  const auto& xb = ts.args(b);
  if (xa.size() != xb.size()) return xa.size() < xb.size() ? -1 : 1;
  for (size_t i = 0; i < xa.size(); ++i)
    if (int c = term_cmp(ts, xa[i], xb[i])) return c;
  return 0;
}

// Variable-insensitive compare: all variables rank equal.
int term_cmp_novar(const TermStore& ts, TermId a, TermId b) {
  bool va = ts.is_var(a), vb = ts.is_var(b);
  if (va || vb) return va == vb ? 0 : (va ? -1 : 1);
  if (ts.sym(a) != ts.sym(b)) return ts.sym(a) < ts.sym(b) ? -1 : 1;
  const auto& xa = ts.args(a);
  const auto& xb = ts.args(b);
  if (xa.size() != xb.size()) return xa.size() < xb.size() ? -1 : 1;
  for (size_t i = 0; i < xa.size(); ++i)
    if (int c = term_cmp_novar(ts, xa[i], xb[i])) return c;
  return 0;
}

template <typename Cmp>
int lit_cmp(const TermStore& ts, const Literal& a, const Literal& b, Cmp cmp) {
  if (ts.sym(a.atom) != ts.sym(b.atom)) return ts.sym(a.atom) < ts.sym(b.atom) ? -1 : 1;
  if (a.positive != b.positive) return a.positive ? 1 : -1;
  return cmp(ts, a.atom, b.atom);
}

void rename_canonical(TermStore& ts, std::vector<Literal>& lits) {
  std::vector<Sym> vars;
  for (const Literal& l : lits) ts.collect_vars(l.atom, vars);
  if (vars.empty()) return;
  std::unordered_map<Sym, TermId> m;
  bool already = true;
  for (size_t i = 0; i < vars.size(); ++i) {
    TermId nv = ts.pool_var(0, static_cast<int>(i));
    if (ts.var(vars[i]) != nv) already = false;
    m.emplace(vars[i], nv);
  }
  if (already) return;
  // Simultaneous replacement, so permutations of the canonical alphabet
  // cannot capture each other.
  for (Literal& l : lits) l.atom = apply_var_map(ts, l.atom, m);
}

}  // namespace

Clause make_clause(TermStore& ts, std::vector<Literal> lits, Origin origin, int id) {
  auto sort_pass = [&](auto cmp) {
    std::stable_sort(lits.begin(), lits.end(), [&](const Literal& a, const Literal& b) {
      return lit_cmp(ts, a, b, cmp) < 0;
    });
  };
  sort_pass(term_cmp_novar);
  rename_canonical(ts, lits);
  sort_pass(term_cmp);
  rename_canonical(ts, lits);
  sort_pass(term_cmp);
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

  Clause c;
  c.id = id;
  c.origin = std::move(origin);
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    if (lits[i].atom == lits[i + 1].atom && lits[i].positive != lits[i + 1].positive)
      c.tautology = true;
  c.lits = std::move(lits);
  for (const Literal& l : c.lits) c.weight += ts.weight(l.atom);
  return c;
}

std::string clause_to_string(const TermStore& ts, const Clause& c) {
  if (c.lits.empty()) return "$F";
  std::string s;
  for (size_t i = 0; i < c.lits.size(); ++i) {
    if (i) s += " | ";
    if (!c.lits[i].positive) s += '-';
    s += ts.to_string(c.lits[i].atom);
  }
  return s;
}

namespace {

using MatchBindings = std::vector<std::pair<Sym, TermId>>;

// One-way match: variables of cpat bind, dterm is frozen.
bool match_term(TermStore& ts, MatchBindings& b, TermId cpat, TermId dterm) {
  if (ts.is_var(cpat)) {
    for (const auto& [v, t] : b)
      if (v == ts.sym(cpat)) return t == dterm;
    b.emplace_back(ts.sym(cpat), dterm);
    return true;
  }
  if (ts.is_var(dterm)) return false;
  if (ts.sym(cpat) != ts.sym(dterm)) return false;
  const auto& ac = ts.args(cpat);
  const auto& ad = ts.args(dterm);
  if (ac.size() != ad.size()) return false;
  for (size_t i = 0; i < ac.size(); ++i)
    if (!match_term(ts, b, ac[i], ad[i])) return false;
  return true;
}

bool subsume_rec(TermStore& ts, const Clause& c, const Clause& d, size_t i, MatchBindings& b) {
  if (i == c.lits.size()) return true;
  for (const Literal& ld : d.lits) {
    if (ld.positive != c.lits[i].positive) continue;
    size_t mark = b.size();
    if (match_term(ts, b, c.lits[i].atom, ld.atom) && subsume_rec(ts, c, d, i + 1, b))
      return true;
    b.resize(mark);
  }
  return false;
}

}  // namespace

bool subsumes(TermStore& ts, const Clause& c, const Clause& d) {
  if (c.lits.size() > d.lits.size()) return false;
  MatchBindings b;
  return subsume_rec(ts, c, d, 0, b);
}

std::vector<Clause> factors(TermStore& ts, const Clause& c) {
  std::vector<Clause> out;
  for (size_t i = 0; i < c.lits.size(); ++i) {
    for (size_t j = i + 1; j < c.lits.size(); ++j) {
      if (c.lits[i].positive != c.lits[j].positive) continue;
      if (ts.sym(c.lits[i].atom) != ts.sym(c.lits[j].atom)) continue;
      auto s = mgu(ts, c.lits[i].atom, c.lits[j].atom);
      if (!s) continue;
      std::vector<Literal> lits;
      lits.reserve(c.lits.size());
      for (const Literal& l : c.lits) lits.push_back({l.positive, s->apply(ts, l.atom)});
      out.push_back(make_clause(ts, std::move(lits), Origin{"factor", {c.id}, {}}));
    }
  }
  return out;
}

std::optional<Clause> unit_conflict(TermStore& ts, const Clause& u, const Clause& w) {
  if (!u.unit() || !w.unit()) return std::nullopt;
  if (u.lits[0].positive == w.lits[0].positive) return std::nullopt;
  // Copies must not share variables: rename one side into a pool alphabet.
  std::unordered_map<Sym, TermId> m;
  int next = 0;
  TermId wa = rename_pooled(ts, w.lits[0].atom, 1, m, next);
  if (!mgu(ts, u.lits[0].atom, wa)) return std::nullopt;
  return make_clause(ts, {}, Origin{"unit_conflict", {u.id, w.id}, {}});
}

}  // namespace prover
