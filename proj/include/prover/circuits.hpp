#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "prover/saturation.hpp"

namespace prover::circuits {

// The bit column a wire produces across all truth-table rows.
// bit r of `bits` is the value at row r; str() prints row 0 first.
struct SignalPattern {
  int rows = 0;
  uint32_t bits = 0;

  static SignalPattern from_string(const std::string& s);
  std::string str() const;
  bool bit(int r) const { return (bits >> r) & 1; }
  bool operator==(const SignalPattern&) const = default;
};

struct CircuitProblem {
  std::string name;
  int rows = 0;
  std::vector<SignalPattern> inputs;
  std::vector<SignalPattern> outputs;
  int budget = 0;
};

// Gate DAG; gates only reference earlier nodes.
struct Gate {
  enum Kind { Input, And, Or, Not } kind;
  int a = -1;  // input index for Input, else operand node
  int b = -1;
};

struct Circuit {
  std::vector<Gate> nodes;
  std::vector<int> outputs;
  int not_count() const;
};

// Truth-table columns for n inputs, rows ordered as binary counting.
std::vector<SignalPattern> input_patterns(int n);

CircuitProblem two_inverter_problem();

enum class DenialVariant { TableDerived, PaperLiteral };
CircuitProblem bcd_problem(DenialVariant variant = DenialVariant::TableDerived);

// Generalized inverter problem: n inputs, outputs are their complements.
CircuitProblem ninv_problem(int n, int budget);

// Text format: `rows R`, `input <bits>`, `output <bits>`, `budget K`, `#` comments.
CircuitProblem parse_problem(std::istream& in, const std::string& name = "file");
CircuitProblem load_problem(const std::string& spec_or_path);  // builtin name or file path

// Clause encoding of a problem plus its interpreted-evaluation and budget hooks.
class Encoding {
 public:
  Encoding(TermStore& ts, const CircuitProblem& p);

  std::vector<Clause> usable;  // gate rules + denial
  std::vector<Clause> sos;     // input facts

  Hooks hooks() const;

  Sym pattern_sym(uint32_t mask) const;
  std::optional<uint32_t> mask_of(TermId t) const;  // set iff t is a ground pattern constant
  // Rewrites ground and/or/not applications over pattern constants.
  TermId eval(TermId t) const;
  // Number of closed cells in a P literal's list argument; each cell is one
  // inverter slot whether or not it is bound yet.
  int inverter_count(const Clause& c) const;

  const CircuitProblem& problem() const { return problem_; }

 private:
  TermStore& ts_;
  CircuitProblem problem_;
  Sym p_, list_, nil_, inv_, and_, or_, not_;
  mutable std::unordered_map<uint32_t, Sym> sym_of_mask_;
  mutable std::unordered_map<Sym, uint32_t> mask_of_sym_;
};

// Maps a refutation of the encoding back to a gate DAG witness.
// Throws std::runtime_error if the proof does not come from this encoding.
Circuit extract_circuit(TermStore& ts, const Encoding& enc, const std::vector<Clause>& proof);

// Bitwise evaluation over all rows: every output matches and NOT count is
// within budget.
bool verify_circuit(const Circuit& c, const CircuitProblem& p);

// Independent exhaustive oracle: chains NOT applications over the AND/OR
// closure, breadth of choices explored depth-first in ascending mask order.
std::optional<Circuit> brute_force_search(const CircuitProblem& p);

// Is mask constructible from `base` using AND/OR gates only?
bool monotone_constructible(uint32_t mask, const std::vector<uint32_t>& base, int rows);

}  // namespace prover::circuits
