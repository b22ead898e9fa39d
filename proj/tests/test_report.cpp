#include <sstream>

#include "doctest.h"
#include "prover/report.hpp"

using namespace prover;

namespace {

RunReport sample(const char* rule) {
  RunReport r;
  r.problem = "2inv";
  r.rule = rule;
  r.pick_given = "weight";
  r.budget = 2;
  r.limits.max_given = 1000;
  r.outcome = "refutation";
  r.stats.clauses_generated = 12345;
  r.stats.clauses_forward_subsumed = 6789;
  r.stats.subsumed_by_sos = 42;
  r.stats.sos_size_final = 7;
  r.stats.sos_size_peak = 99;
  r.stats.given_count = 321;
  r.stats.clauses_retained = 400;
  r.stats.clauses_discarded = 11945;
  r.stats.cpu_seconds = 1.5;
  r.stats.wall_seconds = 2.25;
  r.artifacts = {{"trace_csv", "/tmp/trace.csv"}};
  r.seed = 17;
  return r;
}

}  // namespace

TEST_CASE("run reports survive a JSON round trip") {
  RunReport r = sample("ur");
  r.limits.max_seconds = 12.5;
  RunReport back = RunReport::from_json(r.to_json());
  CHECK(back.problem == r.problem);
  CHECK(back.rule == r.rule);
  CHECK(back.ur_polarity == r.ur_polarity);
  CHECK(back.pick_given == r.pick_given);
  CHECK(back.pick_ratio == r.pick_ratio);
  CHECK(back.budget == r.budget);
  CHECK(back.denial == r.denial);
  CHECK(back.limits.max_given == r.limits.max_given);
  CHECK(back.limits.max_seconds == r.limits.max_seconds);
  CHECK_FALSE(back.limits.max_weight.has_value());
  CHECK_FALSE(back.limits.max_retained.has_value());
  CHECK(back.outcome == r.outcome);
  CHECK(back.limit == r.limit);
  CHECK(back.stats.clauses_generated == r.stats.clauses_generated);
  CHECK(back.stats.clauses_forward_subsumed == r.stats.clauses_forward_subsumed);
  CHECK(back.stats.subsumed_by_sos == r.stats.subsumed_by_sos);
  CHECK(back.stats.sos_size_final == r.stats.sos_size_final);
  CHECK(back.stats.sos_size_peak == r.stats.sos_size_peak);
  CHECK(back.stats.given_count == r.stats.given_count);
  CHECK(back.stats.cpu_seconds == doctest::Approx(r.stats.cpu_seconds));
  CHECK(back.artifacts == r.artifacts);
  CHECK(back.seed == r.seed);

  // Round-tripping the serialized text is byte-stable.
  CHECK(back.to_json() == r.to_json());
}

TEST_CASE("stats block uses the published row names") {
  RunReport r = sample("ur");
  std::ostringstream os;
  write_stats(os, r.stats);
  CHECK(os.str() ==
        "clauses generated 12345\n"
        "clauses forward subsumed 6789\n"
        "subsumed by sos 42\n"
        "sos size (final) 7\n"
        "sos size (peak) 99\n"
        "user CPU time 1.50\n"
        "wall clock time 2.25\n");
}

TEST_CASE("comparison CSV reports hyper-over-ur ratios for matching outcomes") {
  RunReport ur = sample("ur");
  RunReport hy = sample("hyper");
  hy.stats.clauses_generated = 24690;  // exactly 2x
  hy.stats.given_count = 642;
  std::ostringstream os;
  write_compare_csv(os, ur, hy);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "metric,ur,hyper,ratio_hyper_over_ur");
  REQUIRE(std::getline(is, line));
  CHECK(line == "clauses_generated,12345,24690,2");
  // Seven metric rows follow the header.
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 7);
}

TEST_CASE("comparison CSV omits ratios when outcomes differ") {
  RunReport ur = sample("ur");
  RunReport hy = sample("hyper");
  hy.outcome = "limit_hit";
  hy.limit = "max_given";
  std::ostringstream os;
  write_compare_csv(os, ur, hy);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    CAPTURE(line);
    CHECK(line.back() == ',');  // empty ratio column
  }
}

TEST_CASE("comparison CSV compares runs that hit the same limit") {
  RunReport ur = sample("ur");
  RunReport hy = sample("hyper");
  ur.outcome = hy.outcome = "limit_hit";
  ur.limit = hy.limit = "max_given";
  std::ostringstream os;
  write_compare_csv(os, ur, hy);
  CHECK(os.str().find("clauses_generated,12345,12345,1") != std::string::npos);
}
