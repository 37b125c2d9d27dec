#pragma once

#include <string>

#include "cardumen/minilang/ast.hpp"

namespace cardumen::mini {

/// Renders an expression as Mini source. Nested binary and conditional
/// operands are always parenthesised, so the output re-parses to the same
/// tree regardless of precedence.
std::string print_expression(const Node& expr);

/// Renders a whole module (or any statement/declaration) as Mini source.
std::string print_source(const Node& node);

/// Canonical s-expression form used for golden files and structural
/// comparison. Ids, locations and resolved bindings are omitted.
std::string to_sexpr(const Node& node);

std::string escape_string(const std::string& raw);

}  // namespace cardumen::mini
