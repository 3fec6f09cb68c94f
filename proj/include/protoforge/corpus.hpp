#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "protoforge/cegis.hpp"

namespace protoforge {

/// One bundled benchmark: a sketch, a config, and the hand-written
/// ground-truth completion (used to validate the benchmark, never consulted
/// during synthesis).
struct BenchmarkCase {
  std::string name;
  std::string sketch_file;
  std::string config_file;
  std::map<std::string, std::string> ground_truth;  // hole -> expression
  double budget_s = 600;
  bool expect_extra_check_failure = false;
};

struct CaseResult {
  std::string name;
  bool ok = false;
  bool ground_truth_ok = false;
  SynthesisOutcome outcome = SynthesisOutcome::Exhausted;
  SynthesisStats stats;
  std::map<std::string, std::string> solution;  // hole -> expression
  bool reverified = false;
  std::string error;
};

std::string read_file(const std::string& path);

std::vector<BenchmarkCase> load_corpus_manifest(const std::string& dir);

CaseResult run_case(const std::string& dir, const BenchmarkCase& c);

/// Run all cases whose name contains the filter (empty = all).
std::vector<CaseResult> run_corpus(const std::string& dir,
                                   const std::string& filter);

std::string corpus_table(const std::vector<CaseResult>& results);

}  // namespace protoforge
