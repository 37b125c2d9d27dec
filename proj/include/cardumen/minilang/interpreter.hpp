#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cardumen/minilang/ast.hpp"

namespace cardumen::mini {

struct TestCase {
  std::string name;
  FileId file = 0;
  PackageId package = 0;
};

enum class Outcome { Pass, AssertionFailed, RuntimeError, Timeout };

std::string_view outcome_name(Outcome o);

struct TestResult {
  std::string name;
  Outcome outcome = Outcome::Pass;
  std::string message;
  std::vector<NodeId> coverage;  // sorted statement ids; empty unless recorded

  bool passed() const { return outcome == Outcome::Pass; }
};

struct TestReport {
  std::vector<TestResult> results;
  int passing = 0;
  int failing = 0;
};

struct RunOptions {
  bool record_coverage = false;
  std::int64_t step_budget = 1'000'000;
  int max_call_depth = 400;
};

/// Every `test_*` function of the program, in file and declaration order.
std::vector<TestCase> discover_tests(const Program& program);

/// Runs one test in a fresh interpreter. Assertion failures, runtime errors
/// and exhausted step budgets all count as failures.
TestResult run_test(const Program& program, const TestCase& test,
                    const RunOptions& options = {});

TestReport run_tests(const Program& program, std::span<const TestCase> tests,
                     const RunOptions& options = {});

}  // namespace cardumen::mini
