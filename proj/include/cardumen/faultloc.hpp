#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cardumen/minilang/ast.hpp"
#include "cardumen/minilang/interpreter.hpp"

namespace cardumen::faultloc {

using mini::NodeId;
using mini::SourceLocation;

/// Coverage counts of one statement over the test suite.
struct Spectrum {
  NodeId statement = 0;
  SourceLocation location;
  int ef = 0;  // failing tests covering it
  int ep = 0;  // passing tests covering it
  int nf = 0;  // failing tests not covering it
  int np = 0;  // passing tests not covering it
};

struct SuspiciousStatement {
  NodeId statement = 0;
  double suspiciousness = 0.0;
  SourceLocation location;
};

struct FaultLocConfig {
  double gamma = 0.1;                 // keep scores strictly above this
  std::size_t max_statements = 1000;  // keep at most this many
};

class NoFailingTests : public std::runtime_error {
 public:
  NoFailingTests() : std::runtime_error("no failing test: nothing to repair") {}
};

class EmptySuspiciousSet : public std::runtime_error {
 public:
  EmptySuspiciousSet()
      : std::runtime_error("no statement is suspicious above the threshold") {}
};

/// One spectrum per program statement covered by at least one test, in
/// statement id order. Requires coverage and at least one failing test.
std::vector<Spectrum> collect_spectra(const mini::TestReport& report,
                                      const mini::Program& program);

/// Ochiai: ef / sqrt((ef + nf) * (ef + ep)), 0 on degenerate denominators.
double ochiai(const Spectrum& s);

using Formula = double (*)(const Spectrum&);

/// Descending suspiciousness, ties by (file, line, column), scores <= gamma
/// dropped, truncated to max_statements.
std::vector<SuspiciousStatement> rank_statements(std::span<const Spectrum> spectra,
                                                 const FaultLocConfig& config,
                                                 Formula formula = ochiai);

}  // namespace cardumen::faultloc
