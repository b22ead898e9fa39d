#include "prover/circuits.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace prover::circuits {

SignalPattern SignalPattern::from_string(const std::string& s) {
  SignalPattern p;
  p.rows = static_cast<int>(s.size());
  if (p.rows == 0 || p.rows > 32) throw std::invalid_argument("bad pattern length: " + s);
  for (int r = 0; r < p.rows; ++r) {
    if (s[r] == '1')
      p.bits |= 1u << r;
    else if (s[r] != '0')
      throw std::invalid_argument("bad pattern char in: " + s);
  }
  return p;
}

std::string SignalPattern::str() const {
  std::string s(rows, '0');
  for (int r = 0; r < rows; ++r)
    if (bit(r)) s[r] = '1';
  return s;
}

int Circuit::not_count() const {
  int n = 0;
  for (const Gate& g : nodes)
    if (g.kind == Gate::Not) ++n;
  return n;
}

std::vector<SignalPattern> input_patterns(int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("input count out of range");
  int rows = 1 << n;
  std::vector<SignalPattern> out;
  for (int i = 0; i < n; ++i) {
    SignalPattern p;
    p.rows = rows;
    for (int r = 0; r < rows; ++r)
      if ((r >> (n - 1 - i)) & 1) p.bits |= 1u << r;
    out.push_back(p);
  }
  return out;
}

CircuitProblem ninv_problem(int n, int budget) {
  CircuitProblem p;
  p.name = "ninv " + std::to_string(n) + " " + std::to_string(budget);
  p.inputs = input_patterns(n);
  p.rows = 1 << n;
  uint32_t rowmask = (p.rows >= 32) ? 0xffffffffu : ((1u << p.rows) - 1);
  for (const SignalPattern& in : p.inputs)
    p.outputs.push_back(SignalPattern{p.rows, ~in.bits & rowmask});
  p.budget = budget;
  return p;
}

CircuitProblem two_inverter_problem() {
  CircuitProblem p = ninv_problem(3, 2);
  p.name = "2inv";
  return p;
}

CircuitProblem bcd_problem(DenialVariant variant) {
  // Decade counter: ten 4-bit states and their successors, read as columns.
  static const char* current[10] = {"0000", "0001", "0010", "0011", "0100",
                                    "0101", "0110", "0111", "1000", "1001"};
  static const char* next[10] = {"0001", "0010", "0011", "0100", "0101",
                                 "0110", "0111", "1000", "1001", "1010"};
  CircuitProblem p;
  p.name = "bcd";
  p.rows = 10;
  p.budget = 2;
  for (int i = 0; i < 4; ++i) {
    std::string in(10, '0'), out(10, '0');
    for (int r = 0; r < 10; ++r) {
      in[r] = current[r][i];
      out[r] = next[r][i];
    }
    p.inputs.push_back(SignalPattern::from_string(in));
    p.outputs.push_back(SignalPattern::from_string(out));
  }
  if (variant == DenialVariant::PaperLiteral) {
    p.name = "bcd-paper-literal";
    p.outputs = {SignalPattern::from_string("0000000110"),
                 SignalPattern::from_string("0001111000"),
                 SignalPattern::from_string("0110011000"),
                 SignalPattern::from_string("1010101010")};
  }
  return p;
}

CircuitProblem parse_problem(std::istream& in, const std::string& name) {
  CircuitProblem p;
  p.name = name;
  p.rows = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto want_pattern = [&](std::vector<SignalPattern>& dst) {
      std::string bits;
      if (!(ls >> bits)) throw std::runtime_error("missing pattern at line " + std::to_string(lineno));
      SignalPattern sp = SignalPattern::from_string(bits);
      if (p.rows >= 0 && sp.rows != p.rows)
        throw std::runtime_error("pattern length mismatch at line " + std::to_string(lineno));
      dst.push_back(sp);
    };
    if (key == "rows") {
      ls >> p.rows;
    } else if (key == "input") {
      want_pattern(p.inputs);
    } else if (key == "output") {
      want_pattern(p.outputs);
    } else if (key == "budget") {
      ls >> p.budget;
    } else {
      throw std::runtime_error("unknown directive '" + key + "' at line " + std::to_string(lineno));
    }
  }
  if (p.rows <= 0 || p.inputs.empty() || p.outputs.empty())
    throw std::runtime_error("problem file needs rows, inputs and outputs");
  for (const auto& sp : p.inputs)
    if (sp.rows != p.rows) throw std::runtime_error("input length != rows");
  for (const auto& sp : p.outputs)
    if (sp.rows != p.rows) throw std::runtime_error("output length != rows");
  return p;
}

CircuitProblem load_problem(const std::string& spec) {
  if (spec == "2inv") return two_inverter_problem();
  if (spec == "bcd") return bcd_problem();
  std::string s = spec;
  std::replace(s.begin(), s.end(), ':', ' ');
  std::istringstream ss(s);
  std::string head;
  ss >> head;
  if (head == "ninv") {
    int n = 0, budget = -1;
    if (!(ss >> n >> budget)) throw std::runtime_error("usage: ninv <n> <budget>");
    return ninv_problem(n, budget);
  }
  std::ifstream f(spec);
  if (!f) throw std::runtime_error("cannot open problem file: " + spec);
  return parse_problem(f, spec);
}

Encoding::Encoding(TermStore& ts, const CircuitProblem& p) : ts_(ts), problem_(p) {
  p_ = ts.intern("P");
  list_ = ts.intern("L");
  nil_ = ts.intern("nil");
  inv_ = ts.intern("inv");
  and_ = ts.intern("and");
  or_ = ts.intern("or");
  not_ = ts.intern("not");

  TermId x = ts.var("x"), y = ts.var("y"), l = ts.var("l");
  auto P = [&](TermId a, TermId b) { return ts.mk(p_, {a, b}); };

  for (const SignalPattern& in : p.inputs) {
    TermId pat = ts.mk(pattern_sym(in.bits), {});
    sos.push_back(make_clause(ts, {{true, P(pat, ts.var("v"))}}, Origin{"fact", {}, {}}));
  }
  usable.push_back(make_clause(
      ts,
      {{false, P(x, l)}, {false, P(y, l)}, {true, P(ts.mk(and_, {x, y}), l)}},
      Origin{"and-rule", {}, {}}));
  usable.push_back(make_clause(
      ts,
      {{false, P(x, l)}, {false, P(y, l)}, {true, P(ts.mk(or_, {x, y}), l)}},
      Origin{"or-rule", {}, {}}));
  TermId nx = ts.mk(not_, {x});
  usable.push_back(make_clause(
      ts, {{false, P(x, l)}, {true, P(nx, ts.mk(list_, {ts.mk(inv_, {nx}), l}))}},
      Origin{"not-rule", {}, {}}));
  // Lift: a constructible signal stays constructible when one more inverter
  // is stacked onto the context. Without this, facts from an earlier chain
  // stage can never unify their lists with later-stage facts.
  usable.push_back(make_clause(
      ts, {{false, P(x, l)}, {true, P(x, ts.mk(list_, {ts.var("u"), l}))}},
      Origin{"lift-rule", {}, {}}));
  // The denial carries a closed chain of exactly `budget` inverter slots, so
  // a refutation can never commit to more inverters than the budget allows.
  TermId chain = ts.mk(nil_, {});
  for (int i = 0; i < p.budget; ++i)
    chain = ts.mk(list_, {ts.var("u" + std::to_string(i)), chain});
  std::vector<Literal> denial;
  for (const SignalPattern& out : p.outputs)
    denial.push_back({false, P(ts.mk(pattern_sym(out.bits), {}), chain)});
  usable.push_back(make_clause(ts, std::move(denial), Origin{"denial", {}, {}}));
}

Sym Encoding::pattern_sym(uint32_t mask) const {
  auto it = sym_of_mask_.find(mask);
  if (it != sym_of_mask_.end()) return it->second;
  SignalPattern sp{problem_.rows, mask};
  Sym s = ts_.intern(sp.str());
  sym_of_mask_.emplace(mask, s);
  mask_of_sym_.emplace(s, mask);
  return s;
}

std::optional<uint32_t> Encoding::mask_of(TermId t) const {
  if (ts_.is_var(t) || !ts_.args(t).empty()) return std::nullopt;
  auto it = mask_of_sym_.find(ts_.sym(t));
  if (it == mask_of_sym_.end()) return std::nullopt;
  return it->second;
}

TermId Encoding::eval(TermId t) const {
  if (ts_.is_var(t)) return t;
  const auto& as = ts_.args(t);
  if (as.empty()) return t;
  std::vector<TermId> ea;
  ea.reserve(as.size());
  bool changed = false;
  for (TermId a : as) {
    TermId r = eval(a);
    changed |= (r != a);
    ea.push_back(r);
  }
  Sym f = ts_.sym(t);
  uint32_t rowmask = (1u << problem_.rows) - 1;
  if (f == not_ && ea.size() == 1) {
    if (auto m = mask_of(ea[0])) return ts_.mk(pattern_sym(~*m & rowmask), {});
  } else if ((f == and_ || f == or_) && ea.size() == 2) {
    auto ma = mask_of(ea[0]), mb = mask_of(ea[1]);
    if (ma && mb)
      return ts_.mk(pattern_sym(f == and_ ? (*ma & *mb) : (*ma | *mb)), {});
  }
  return changed ? ts_.mk(f, std::move(ea)) : t;
}

int Encoding::inverter_count(const Clause& c) const {
  int worst = 0;
  for (const Literal& lit : c.lits) {
    if (ts_.is_var(lit.atom) || ts_.sym(lit.atom) != p_) continue;
    if (ts_.args(lit.atom).size() != 2) continue;
    int n = 0;
    TermId cell = ts_.args(lit.atom)[1];
    // Count closed cells; a cell whose head is still a variable is an
    // inverter slot that may yet be filled, so it spends budget too.
    while (!ts_.is_var(cell) && ts_.sym(cell) == list_ && ts_.args(cell).size() == 2) {
      ++n;
      cell = ts_.args(cell)[1];
    }
    worst = std::max(worst, n);
  }
  return worst;
}

Hooks Encoding::hooks() const {
  Hooks h;
  h.eval = [this](TermStore&, TermId t) { return eval(t); };
  int budget = problem_.budget;
  h.keep = [this, budget](TermStore&, const Clause& c) { return inverter_count(c) <= budget; };
  return h;
}

bool monotone_constructible(uint32_t mask, const std::vector<uint32_t>& base, int rows) {
  if (base.empty()) return false;
  uint32_t rowmask = (1u << rows) - 1;
  mask &= rowmask;
  if (mask == 0) {
    uint32_t all = rowmask;
    for (uint32_t s : base) all &= s;
    return all == 0;
  }
  uint32_t acc = 0;
  for (int r = 0; r < rows; ++r) {
    if (!((mask >> r) & 1)) continue;
    uint32_t c = rowmask;
    bool any = false;
    for (uint32_t s : base) {
      if ((s >> r) & 1) {
        c &= s;
        any = true;
      }
    }
    if (!any) return false;
    acc |= c;
  }
  return acc == mask;
}

namespace {

// Shared gate builder with mask-keyed reuse.
struct CircuitBuilder {
  Circuit c;
  std::vector<uint32_t> mask_of_node;
  std::map<uint32_t, int> node_of_mask;  // first node producing each mask
  std::map<std::tuple<int, int, int>, int> gate_cache;

  int add(Gate g, uint32_t mask) {
    auto key = std::make_tuple(static_cast<int>(g.kind), g.a, g.b);
    if (g.kind != Gate::Input) {
      auto it = gate_cache.find(key);
      if (it != gate_cache.end()) return it->second;
    }
    int idx = static_cast<int>(c.nodes.size());
    c.nodes.push_back(g);
    mask_of_node.push_back(mask);
    gate_cache.emplace(key, idx);
    node_of_mask.emplace(mask, idx);  // keeps first
    return idx;
  }

  // Builds mask as OR of per-row ANDs over the base nodes.
  int build_monotone(uint32_t mask, const std::vector<int>& base, int rows) {
    auto hit = node_of_mask.find(mask);
    if (hit != node_of_mask.end()) return hit->second;
    auto and_chain = [&](const std::vector<int>& xs) {
      int acc = xs[0];
      uint32_t m = mask_of_node[acc];
      for (size_t i = 1; i < xs.size(); ++i) {
        m &= mask_of_node[xs[i]];
        acc = add(Gate{Gate::And, std::min(acc, xs[i]), std::max(acc, xs[i])}, m);
      }
      return acc;
    };
    std::vector<int> terms;
    if (mask == 0) {
      terms.push_back(and_chain(base));
    } else {
      std::set<uint32_t> seen;
      for (int r = 0; r < rows; ++r) {
        if (!((mask >> r) & 1)) continue;
        std::vector<int> xs;
        uint32_t m = ~0u;
        for (int bnode : base)
          if ((mask_of_node[bnode] >> r) & 1) {
            xs.push_back(bnode);
            m &= mask_of_node[bnode];
          }
        if (xs.empty()) throw std::logic_error("build_monotone on unconstructible mask");
        if (!seen.insert(m).second) continue;
        terms.push_back(and_chain(xs));
      }
    }
    int acc = terms[0];
    uint32_t m = mask_of_node[acc];
    for (size_t i = 1; i < terms.size(); ++i) {
      m |= mask_of_node[terms[i]];
      acc = add(Gate{Gate::Or, std::min(acc, terms[i]), std::max(acc, terms[i])}, m);
    }
    if (mask_of_node[acc] != mask) throw std::logic_error("build_monotone mismatch");
    return acc;
  }
};

struct OracleSearch {
  const CircuitProblem& p;
  uint32_t rowmask;
  std::vector<uint32_t> input_masks;
  std::set<std::vector<uint32_t>> visited;

  explicit OracleSearch(const CircuitProblem& prob) : p(prob) {
    rowmask = (1u << p.rows) - 1;
    for (const auto& in : p.inputs) input_masks.push_back(in.bits);
  }

  bool all_outputs_ok(const std::vector<uint32_t>& base) const {
    for (const auto& out : p.outputs)
      if (!monotone_constructible(out.bits, base, p.rows)) return false;
    return true;
  }

  Circuit witness(const std::vector<uint32_t>& not_inputs) const {
    CircuitBuilder b;
    std::vector<int> base;
    for (size_t i = 0; i < input_masks.size(); ++i)
      base.push_back(b.add(Gate{Gate::Input, static_cast<int>(i), -1}, input_masks[i]));
    for (uint32_t ni : not_inputs) {
      int src = b.build_monotone(ni, base, p.rows);
      base.push_back(b.add(Gate{Gate::Not, src, -1}, ~ni & rowmask));
    }
    for (const auto& out : p.outputs)
      b.c.outputs.push_back(b.build_monotone(out.bits, base, p.rows));
    return b.c;
  }

  std::optional<std::vector<uint32_t>> dfs(std::vector<uint32_t> not_inputs) {
    std::vector<uint32_t> base = input_masks;
    for (uint32_t ni : not_inputs) base.push_back(~ni & rowmask);
    std::vector<uint32_t> key = base;
    std::sort(key.begin(), key.end());
    if (!visited.insert(key).second) return std::nullopt;
    if (all_outputs_ok(base)) return not_inputs;
    if (static_cast<int>(not_inputs.size()) >= p.budget) return std::nullopt;
    for (uint32_t m = 0; m <= rowmask; ++m) {
      if (!monotone_constructible(m, base, p.rows)) continue;
      if (monotone_constructible(~m & rowmask, base, p.rows)) continue;  // NOT adds nothing
      not_inputs.push_back(m);
      if (auto r = dfs(not_inputs)) return r;
      not_inputs.pop_back();
    }
    return std::nullopt;
  }
};

}  // namespace

std::optional<Circuit> brute_force_search(const CircuitProblem& p) {
  if (p.rows > 16) throw std::invalid_argument("oracle limited to 16 rows");
  OracleSearch search(p);
  auto chain = search.dfs({});
  if (!chain) return std::nullopt;
  return search.witness(*chain);
}

bool verify_circuit(const Circuit& c, const CircuitProblem& p) {
  uint32_t rowmask = (1u << p.rows) - 1;
  std::vector<uint32_t> val(c.nodes.size());
  for (size_t i = 0; i < c.nodes.size(); ++i) {
    const Gate& g = c.nodes[i];
    switch (g.kind) {
      case Gate::Input:
        if (g.a < 0 || g.a >= static_cast<int>(p.inputs.size())) return false;
        val[i] = p.inputs[g.a].bits;
        break;
      case Gate::And:
      case Gate::Or:
        if (g.a < 0 || g.b < 0 || g.a >= static_cast<int>(i) || g.b >= static_cast<int>(i))
          return false;
        val[i] = g.kind == Gate::And ? (val[g.a] & val[g.b]) : (val[g.a] | val[g.b]);
        break;
      case Gate::Not:
        if (g.a < 0 || g.a >= static_cast<int>(i)) return false;
        val[i] = ~val[g.a] & rowmask;
        break;
    }
  }
  if (c.outputs.size() != p.outputs.size()) return false;
  for (size_t k = 0; k < c.outputs.size(); ++k) {
    int n = c.outputs[k];
    if (n < 0 || n >= static_cast<int>(c.nodes.size())) return false;
    if (val[n] != p.outputs[k].bits) return false;
  }
  return c.not_count() <= p.budget;
}

Circuit extract_circuit(TermStore& ts, const Encoding& enc, const std::vector<Clause>& proof) {
  std::unordered_map<int, const Clause*> by_id;
  for (const Clause& c : proof) by_id.emplace(c.id, &c);
  std::vector<const Clause*> ordered;
  for (const Clause& c : proof) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(),
            [](const Clause* a, const Clause* b) { return a->id < b->id; });

  const CircuitProblem& p = enc.problem();
  Circuit circ;
  std::vector<uint32_t> node_mask;
  std::unordered_map<int, int> node_of_clause;
  std::map<uint32_t, int> node_of_mask;
  auto add_node = [&](Gate g, uint32_t mask, int clause_id) {
    int idx = static_cast<int>(circ.nodes.size());
    circ.nodes.push_back(g);
    node_mask.push_back(mask);
    node_of_clause.emplace(clause_id, idx);
    node_of_mask.emplace(mask, idx);
    return idx;
  };

  Sym p_sym = ts.intern("P");
  for (const Clause* c : ordered) {
    if (!c->unit() || !c->lits[0].positive) continue;
    if (ts.is_var(c->lits[0].atom) || ts.sym(c->lits[0].atom) != p_sym) continue;
    auto mask = enc.mask_of(ts.args(c->lits[0].atom)[0]);
    if (!mask) continue;
    const std::string& rule = c->origin.rule;
    if (rule == "fact") {
      int input_idx = -1;
      for (size_t i = 0; i < p.inputs.size(); ++i)
        if (p.inputs[i].bits == *mask) {
          input_idx = static_cast<int>(i);
          break;
        }
      if (input_idx < 0) throw std::runtime_error("fact pattern is not a problem input");
      add_node(Gate{Gate::Input, input_idx, -1}, *mask, c->id);
      continue;
    }
    if (rule != "hyper" && rule != "ur") continue;
    auto nit = by_id.find(c->origin.parents.empty() ? -1 : c->origin.parents[0]);
    if (nit == by_id.end()) throw std::runtime_error("proof node with missing nucleus");
    const Clause* nucleus = nit->second;
    const std::string& nrule = nucleus->origin.rule;
    std::vector<int> operands;
    for (const auto& [pos, sid] : c->origin.clashes) {
      if (nucleus->lits[pos].positive) continue;
      auto oit = node_of_clause.find(sid);
      if (oit == node_of_clause.end())
        throw std::runtime_error("satellite clause has no circuit node");
      operands.push_back(oit->second);
    }
    if (nrule == "lift-rule" && operands.size() == 1) {
      // Same signal in a wider inverter context; alias, no gate.
      node_of_clause.emplace(c->id, operands[0]);
      continue;
    }
    if (nrule == "not-rule" && operands.size() == 1) {
      add_node(Gate{Gate::Not, operands[0], -1}, *mask, c->id);
    } else if ((nrule == "and-rule" || nrule == "or-rule") && operands.size() == 2) {
      add_node(Gate{nrule == "and-rule" ? Gate::And : Gate::Or, operands[0], operands[1]},
               *mask, c->id);
    } else {
      throw std::runtime_error("derived fact with unrecognized provenance: " + nrule);
    }
  }

  for (const auto& out : p.outputs) {
    auto it = node_of_mask.find(out.bits);
    if (it == node_of_mask.end()) {
      // Identity outputs may not appear as derived facts; wire to the input.
      int input_idx = -1;
      for (size_t i = 0; i < p.inputs.size(); ++i)
        if (p.inputs[i].bits == out.bits) input_idx = static_cast<int>(i);
      if (input_idx < 0) throw std::runtime_error("proof does not witness an output pattern");
      circ.outputs.push_back(add_node(Gate{Gate::Input, input_idx, -1}, out.bits, -1 - input_idx));
    } else {
      circ.outputs.push_back(it->second);
    }
  }

  // Prune gates unreachable from the outputs; keep input nodes.
  std::vector<bool> keep(circ.nodes.size(), false);
  std::vector<int> work = circ.outputs;
  while (!work.empty()) {
    int n = work.back();
    work.pop_back();
    if (keep[n]) continue;
    keep[n] = true;
    const Gate& g = circ.nodes[n];
    if (g.kind != Gate::Input) {
      work.push_back(g.a);
      if (g.b >= 0) work.push_back(g.b);
    }
  }
  Circuit out;
  std::vector<int> remap(circ.nodes.size(), -1);
  for (size_t i = 0; i < circ.nodes.size(); ++i) {
    if (!keep[i] && circ.nodes[i].kind != Gate::Input) continue;
    Gate g = circ.nodes[i];
    if (g.kind != Gate::Input) {
      g.a = remap[g.a];
      if (g.b >= 0) g.b = remap[g.b];
    }
    remap[i] = static_cast<int>(out.nodes.size());
    out.nodes.push_back(g);
  }
  for (int o : circ.outputs) out.outputs.push_back(remap[o]);
  return out;
}

}  // namespace prover::circuits
