#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cardumen/minilang/ast.hpp"

namespace cardumen::mini {

struct TypeIssue {
  SourceLocation loc;
  std::string expected;  // empty when the issue is not a type mismatch
  std::string found;
  std::string message;
};

class TypeError : public std::runtime_error {
 public:
  explicit TypeError(std::vector<TypeIssue> issues);
  const std::vector<TypeIssue>& issues() const { return issues_; }

 private:
  std::vector<TypeIssue> issues_;
};

/// Resolves every name and assigns a static type to every expression.
/// Also assigns frame slots to parameters/locals and global slots per file.
/// Throws TypeError listing all problems found.
void typecheck(Program& program);

}  // namespace cardumen::mini
