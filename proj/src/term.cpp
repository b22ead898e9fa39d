#include "prover/term.hpp"

#include <algorithm>
#include <stdexcept>

namespace prover {

namespace {

size_t key_hash(Sym f, const std::vector<TermId>& args) {
  size_t h = static_cast<size_t>(f) * 0x9e3779b97f4a7c15u;
  for (TermId a : args) h = (h ^ static_cast<size_t>(a)) * 0x100000001b3u;
  return h;
}

}  // namespace

Sym TermStore::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  Sym s = static_cast<Sym>(names_.size());
  names_.emplace_back(name);
  arity_.push_back(-1);
  ids_.emplace(names_.back(), s);
  return s;
}

TermId TermStore::var(Sym v) {
  auto it = var_terms_.find(v);
  if (it != var_terms_.end()) return it->second;
  TermId t = static_cast<TermId>(nodes_.size());
  nodes_.push_back(TermNode{v, true, 1, {}});
  var_terms_.emplace(v, t);
  return t;
}

TermId TermStore::mk(Sym f, std::vector<TermId> args) {
  int n = static_cast<int>(args.size());
  if (arity_[f] == -1) {
    arity_[f] = n;
  } else if (arity_[f] != n) {
    throw std::invalid_argument("arity clash for symbol '" + names_[f] + "': " +
                                std::to_string(arity_[f]) + " vs " + std::to_string(n));
  }
  if (table_.empty()) table_.assign(1024, {0, kNoTerm});
  size_t h = key_hash(f, args);
  size_t mask = table_.size() - 1;
  size_t i = h & mask;
  while (table_[i].second != kNoTerm) {
    if (table_[i].first == h) {
      const TermNode& n = nodes_[table_[i].second];
      if (n.sym == f && n.args == args) return table_[i].second;
    }
    i = (i + 1) & mask;
  }
  int32_t w = 1;
  for (TermId a : args) w += nodes_[a].weight;
  TermId t = static_cast<TermId>(nodes_.size());
  nodes_.push_back(TermNode{f, false, w, std::move(args)});
  table_[i] = {h, t};
  if (++table_used_ * 10 > table_.size() * 7) grow_table();
  return t;
}

void TermStore::grow_table() {
  std::vector<std::pair<size_t, TermId>> old = std::move(table_);
  table_.assign(old.size() * 2, {0, kNoTerm});
  size_t mask = table_.size() - 1;
  for (const auto& [h, t] : old) {
    if (t == kNoTerm) continue;
    size_t i = h & mask;
    while (table_[i].second != kNoTerm) i = (i + 1) & mask;
    table_[i] = {h, t};
  }
}

Sym TermStore::fresh_var_sym() {
  return intern("_g" + std::to_string(fresh_counter_++));
}

TermId TermStore::pool_var(int pool, int index) {
  if (static_cast<size_t>(pool) >= pools_.size()) pools_.resize(pool + 1);
  auto& p = pools_[pool];
  while (static_cast<size_t>(index) >= p.size()) {
    size_t i = p.size();
    std::string name = pool == 0 ? "_c" + std::to_string(i)
                                 : "_r" + std::to_string(pool - 1) + "_" + std::to_string(i);
    p.push_back(var(intern(name)));
  }
  return p[index];
}

std::string TermStore::to_string(TermId t) const {
  const TermNode& n = nodes_[t];
  std::string s = names_[n.sym];
  if (!n.is_var && !n.args.empty()) {
    s += '(';
    for (size_t i = 0; i < n.args.size(); ++i) {
      if (i) s += ',';
      s += to_string(n.args[i]);
    }
    s += ')';
  }
  return s;
}

void TermStore::collect_vars(TermId t, std::vector<Sym>& out) const {
  const TermNode& n = nodes_[t];
  if (n.is_var) {
    if (std::find(out.begin(), out.end(), n.sym) == out.end()) out.push_back(n.sym);
    return;
  }
  for (TermId a : n.args) collect_vars(a, out);
}

const TermId* Subst::find(Sym v) const {
  for (const auto& [s, t] : bindings_)
    if (s == v) return &t;
  return nullptr;
}

TermId Subst::apply(TermStore& ts, TermId t) const {
  if (bindings_.empty()) return t;
  if (ts.is_var(t)) {
    const TermId* b = find(ts.sym(t));
    return b ? *b : t;
  }
  const auto& as = ts.args(t);
  if (as.empty()) return t;
  std::vector<TermId> out;
  out.reserve(as.size());
  bool changed = false;
  for (TermId a : as) {
    TermId r = apply(ts, a);
    changed |= (r != a);
    out.push_back(r);
  }
  return changed ? ts.mk(ts.sym(t), std::move(out)) : t;
}

bool occurs(const TermStore& ts, Sym v, TermId t) {
  if (ts.is_var(t)) return ts.sym(t) == v;
  for (TermId a : ts.args(t))
    if (occurs(ts, v, a)) return true;
  return false;
}

bool Subst::bind(TermStore& ts, Sym v, TermId t) {
  if (ts.is_var(t) && ts.sym(t) == v) return true;
  if (occurs(ts, v, t)) return false;
  // Substitute v inside existing bindings to stay idempotent.
  Subst single;
  single.bindings_.emplace_back(v, t);
  for (auto& [s, rhs] : bindings_) rhs = single.apply(ts, rhs);
  bindings_.emplace_back(v, t);
  return true;
}

bool unify_into(TermStore& ts, Subst& s, TermId a, TermId b) {
  std::vector<std::pair<TermId, TermId>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    // Idempotence makes a single dereference enough; compounds are walked
    // structurally instead of being rebuilt under the substitution.
    if (ts.is_var(x))
      if (const TermId* bx = s.find(ts.sym(x))) x = *bx;
    if (ts.is_var(y))
      if (const TermId* by = s.find(ts.sym(y))) y = *by;
    if (x == y) continue;
    if (ts.is_var(x)) {
      if (!s.bind(ts, ts.sym(x), s.apply(ts, y))) return false;
      continue;
    }
    if (ts.is_var(y)) {
      if (!s.bind(ts, ts.sym(y), s.apply(ts, x))) return false;
      continue;
    }
    if (ts.sym(x) != ts.sym(y)) return false;
    const auto& ax = ts.args(x);
    const auto& ay = ts.args(y);
    if (ax.size() != ay.size()) return false;
    for (size_t i = 0; i < ax.size(); ++i) work.emplace_back(ax[i], ay[i]);
  }
  return true;
}

std::optional<Subst> mgu(TermStore& ts, TermId a, TermId b) {
  Subst s;
  if (!unify_into(ts, s, a, b)) return std::nullopt;
  return s;
}

std::optional<Subst> simultaneous_mgu(TermStore& ts,
                                      std::span<const std::pair<TermId, TermId>> pairs) {
  Subst s;
  for (const auto& [a, b] : pairs)
    if (!unify_into(ts, s, a, b)) return std::nullopt;
  return s;
}

bool may_unify(const TermStore& ts, TermId a, TermId b) {
  if (a == b) return true;
  if (ts.is_var(a) || ts.is_var(b)) return true;
  if (ts.sym(a) != ts.sym(b)) return false;
  const auto& ax = ts.args(a);
  const auto& ay = ts.args(b);
  if (ax.size() != ay.size()) return false;
  for (size_t i = 0; i < ax.size(); ++i)
    if (!may_unify(ts, ax[i], ay[i])) return false;
  return true;
}

TermId rename_apart(TermStore& ts, TermId t, std::unordered_map<Sym, TermId>& mapping) {
  if (ts.is_var(t)) {
    auto it = mapping.find(ts.sym(t));
    if (it != mapping.end()) return it->second;
    TermId fresh = ts.var(ts.fresh_var_sym());
    mapping.emplace(ts.sym(t), fresh);
    return fresh;
  }
  const auto& as = ts.args(t);
  if (as.empty()) return t;
  std::vector<TermId> out;
  out.reserve(as.size());
  bool changed = false;
  for (TermId a : as) {
    TermId r = rename_apart(ts, a, mapping);
    changed |= (r != a);
    out.push_back(r);
  }
  return changed ? ts.mk(ts.sym(t), std::move(out)) : t;
}

TermId rename_apart(TermStore& ts, TermId t) {
  std::unordered_map<Sym, TermId> m;
  return rename_apart(ts, t, m);
}

TermId apply_var_map(TermStore& ts, TermId t, const std::unordered_map<Sym, TermId>& m) {
  if (ts.is_var(t)) {
    auto it = m.find(ts.sym(t));
    return it == m.end() ? t : it->second;
  }
  const auto& as = ts.args(t);
  if (as.empty()) return t;
  std::vector<TermId> out;
  out.reserve(as.size());
  bool changed = false;
  for (TermId a : as) {
    TermId r = apply_var_map(ts, a, m);
    changed |= (r != a);
    out.push_back(r);
  }
  return changed ? ts.mk(ts.sym(t), std::move(out)) : t;
}

TermId rename_pooled(TermStore& ts, TermId t, int pool, std::unordered_map<Sym, TermId>& mapping,
                     int& next) {
  if (ts.is_var(t)) {
    auto it = mapping.find(ts.sym(t));
    if (it != mapping.end()) return it->second;
    TermId nv = ts.pool_var(pool, next++);
    mapping.emplace(ts.sym(t), nv);
    return nv;
  }
  const auto& as = ts.args(t);
  if (as.empty()) return t;
  std::vector<TermId> out;
  out.reserve(as.size());
  bool changed = false;
  for (TermId a : as) {
    TermId r = rename_pooled(ts, a, pool, mapping, next);
    changed |= (r != a);
    out.push_back(r);
  }
  return changed ? ts.mk(ts.sym(t), std::move(out)) : t;
}

}  // namespace prover
