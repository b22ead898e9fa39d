#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace prover {

// Interned symbol id. Functors, constants and variable names share one table.
using Sym = int32_t;
// Index into the hash-consed term arena. Equal terms have equal ids.
using TermId = int32_t;

constexpr TermId kNoTerm = -1;

struct TermNode {
  Sym sym;
  bool is_var;
  int32_t weight;  // total symbol occurrences
  std::vector<TermId> args;
};

// Symbol table + hash-consed term arena. One store per problem; not
// thread-safe for concurrent mutation, safe for concurrent reads.
class TermStore {
 public:
  Sym intern(std::string_view name);
  const std::string& name(Sym s) const { return names_[s]; }

  TermId var(Sym v);
  TermId var(std::string_view name) { return var(intern(name)); }
  // Compound term; arity is fixed per functor at first use.
  TermId mk(Sym f, std::vector<TermId> args);
  TermId constant(std::string_view name) { return mk(intern(name), {}); }

  bool is_var(TermId t) const { return nodes_[t].is_var; }
  Sym sym(TermId t) const { return nodes_[t].sym; }
  const std::vector<TermId>& args(TermId t) const { return nodes_[t].args; }
  int weight(TermId t) const { return nodes_[t].weight; }

  Sym fresh_var_sym();
  // Cached variable for (pool, index); renaming through pools avoids minting
  // fresh symbols on every inference. Pool 0 is the clause-canonical alphabet.
  TermId pool_var(int pool, int index);
  std::string to_string(TermId t) const;

  // Variables occurring in t, in first-occurrence order.
  void collect_vars(TermId t, std::vector<Sym>& out) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Sym> ids_;
  std::vector<int> arity_;  // -1 = not yet fixed
  std::vector<TermNode> nodes_;
  // Open-addressing hash-cons table over (sym, args); keys live in nodes_, so
  // entries are just (hash, id) pairs. Empty slots hold kNoTerm.
  std::vector<std::pair<size_t, TermId>> table_;
  size_t table_used_ = 0;
  void grow_table();
  std::unordered_map<Sym, TermId> var_terms_;
  std::vector<std::vector<TermId>> pools_;
  int64_t fresh_counter_ = 0;
};

// Idempotent substitution: applying twice equals applying once.
class Subst {
 public:
  const TermId* find(Sym v) const;
  // Binds v to t (with the current substitution already applied to t).
  // Fails on occurs-check violation. Keeps the substitution idempotent.
  bool bind(TermStore& ts, Sym v, TermId t);
  TermId apply(TermStore& ts, TermId t) const;
  bool empty() const { return bindings_.empty(); }
  size_t size() const { return bindings_.size(); }
  const std::vector<std::pair<Sym, TermId>>& bindings() const { return bindings_; }

 private:
  std::vector<std::pair<Sym, TermId>> bindings_;
};

bool occurs(const TermStore& ts, Sym v, TermId t);

// Extends s so that s(a) = s(b); on failure s is left unspecified.
bool unify_into(TermStore& ts, Subst& s, TermId a, TermId b);

std::optional<Subst> mgu(TermStore& ts, TermId a, TermId b);
std::optional<Subst> simultaneous_mgu(TermStore& ts,
                                      std::span<const std::pair<TermId, TermId>> pairs);

// Cheap pre-unification filter: false only on a definite functor clash
// (all variables treated as wildcards). Never rejects a unifiable pair.
bool may_unify(const TermStore& ts, TermId a, TermId b);

// Replaces every variable with a fresh one; mapping accumulates across calls
// so shared variables stay shared within one renaming batch.
TermId rename_apart(TermStore& ts, TermId t, std::unordered_map<Sym, TermId>& mapping);
TermId rename_apart(TermStore& ts, TermId t);

// Simultaneous variable replacement: every variable is looked up in `m` once;
// unmapped variables stay. Safe even when the map permutes variables.
TermId apply_var_map(TermStore& ts, TermId t, const std::unordered_map<Sym, TermId>& m);

// Renames t's variables into the given pool, first occurrence first; `mapping`
// and `next` accumulate across calls so shared variables stay shared.
TermId rename_pooled(TermStore& ts, TermId t, int pool, std::unordered_map<Sym, TermId>& mapping,
                     int& next);

}  // namespace prover
