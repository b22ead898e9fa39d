#pragma once

#include <optional>
#include <string>
#include <vector>

#include "prover/term.hpp"

namespace prover {

struct Literal {
  bool positive;
  TermId atom;  // compound with predicate functor, never a bare variable
  bool operator==(const Literal&) const = default;
};

// Provenance. parents[0] is the nucleus for hyper/ur resolvents; clashes maps
// nucleus literal positions to the satellite clause that discharged them.
struct Origin {
  std::string rule;  // "input", "fact", "and-rule", ..., "hyper", "ur", "binary", "factor", "unit_conflict"
  std::vector<int> parents;
  std::vector<std::pair<int, int>> clashes;  // (nucleus literal index, satellite clause id)
};

struct Clause {
  int id = -1;
  std::vector<Literal> lits;
  Origin origin;
  int weight = 0;
  bool tautology = false;

  bool empty() const { return lits.empty(); }
  bool unit() const { return lits.size() == 1; }
  bool positive() const;
  bool has_negative() const;
};

// Canonical construction: duplicate literals merged, tautology flagged,
// literals sorted deterministically, variables renamed to clause-local
// canonical names, weight recomputed.
Clause make_clause(TermStore& ts, std::vector<Literal> lits, Origin origin, int id = -1);

std::string clause_to_string(const TermStore& ts, const Clause& c);

// theta-subsumption with the |c| <= |d| length guard.
bool subsumes(TermStore& ts, const Clause& c, const Clause& d);

// Single-step factors: unify two same-sign literals and merge.
std::vector<Clause> factors(TermStore& ts, const Clause& c);

// Empty clause if u and w are complementary unifiable units, else nothing.
std::optional<Clause> unit_conflict(TermStore& ts, const Clause& u, const Clause& w);

}  // namespace prover
