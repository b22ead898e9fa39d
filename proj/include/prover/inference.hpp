#pragma once

#include <memory>
#include <vector>

#include "prover/clause.hpp"

namespace prover {

enum class RuleKind { Hyper, UR, Binary };
enum class UrPolarity { Both, PositiveOnly, NegativeOnly };

struct RuleConfig {
  RuleKind rule = RuleKind::Hyper;
  UrPolarity ur_polarity = UrPolarity::Both;
};

// Persistent satellite-literal index over the usable list, maintained
// incrementally by the saturation loop so resolve() does not rescan usable.
// Indexed clauses must outlive the index. Optional: generators build a
// transient one when none is supplied.
class UsableIndex {
 public:
  UsableIndex();
  ~UsableIndex();
  void add(const TermStore& ts, const Clause* c);
  void remove(int clause_id);  // back-subsumption support; O(index size)

  struct Impl;
  std::unique_ptr<Impl> impl;
};

// Each generator emits every conclusion in which `given` participates, with
// partners drawn from `usable` (which is expected to already contain `given`).
// Emitted clauses carry provenance but no ids.

// All negative literals of a nucleus clashed simultaneously against positive
// clauses; resolvents are positive.
std::vector<Clause> hyper_resolve(TermStore& ts, const Clause& given,
                                  const std::vector<const Clause*>& usable,
                                  const UsableIndex* index = nullptr);

// All but one literal of a non-unit nucleus clashed against unit clauses;
// resolvents are unit.
std::vector<Clause> ur_resolve(TermStore& ts, const Clause& given,
                               const std::vector<const Clause*>& usable,
                               UrPolarity polarity = UrPolarity::Both,
                               const UsableIndex* index = nullptr);

// Single complementary-pair resolvents; testing baseline.
std::vector<Clause> binary_resolve(TermStore& ts, const Clause& given,
                                   const std::vector<const Clause*>& usable);

std::vector<Clause> resolve(TermStore& ts, const RuleConfig& cfg, const Clause& given,
                            const std::vector<const Clause*>& usable,
                            const UsableIndex* index = nullptr);

}  // namespace prover
