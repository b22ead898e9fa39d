#pragma once

#include <map>
#include <ostream>
#include <string>

#include "prover/saturation.hpp"

namespace prover {

// Everything needed to reproduce and audit one saturation run.
struct RunReport {
  std::string problem;
  std::string rule;
  std::string ur_polarity = "both";
  std::string pick_given = "weight";
  int pick_ratio = 0;
  int budget = 0;
  std::string denial = "table-derived";
  Limits limits;
  std::string outcome;
  std::string limit = "none";
  Stats stats;
  std::map<std::string, std::string> artifacts;
  uint64_t seed = 0;

  std::string to_json() const;  // pretty-printed, stable key order
  static RunReport from_json(const std::string& text);
};

// Table III/IV style stats block.
void write_stats(std::ostream& os, const Stats& s);

// `metric,ur,hyper,ratio_hyper_over_ur`; ratios only when both runs ended the
// same way (both refutations or both hit the same limit).
void write_compare_csv(std::ostream& os, const RunReport& ur, const RunReport& hyper);

}  // namespace prover
