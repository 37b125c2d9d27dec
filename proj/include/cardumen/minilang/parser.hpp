#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cardumen/minilang/ast.hpp"

namespace cardumen::mini {

struct Diagnostic {
  int line = 1;
  int column = 1;
  std::string message;
};

/// Raised by the parser with every syntax error found in one source text.
class SyntaxError : public std::runtime_error {
 public:
  explicit SyntaxError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Parses one `.mini` source text into a Module node. Node ids are local to
/// the returned tree; `Program::add_file` renumbers them.
std::unique_ptr<Node> parse(std::string_view source, FileId file = 0,
                            PackageId package = 0);

/// Parses a single expression (used to re-apply patches from reports).
std::unique_ptr<Node> parse_expression(std::string_view source,
                                       SourceLocation at = {});

}  // namespace cardumen::mini
