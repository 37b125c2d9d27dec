#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cardumen/faultloc.hpp"
#include "cardumen/minilang/ast.hpp"

namespace cardumen::modpoints {

using mini::Node;
using mini::NodeId;
using mini::NodeKind;
using mini::Program;
using mini::SourceLocation;
using mini::Type;

struct ScopeVar {
  std::string name;
  Type type;

  friend bool operator==(const ScopeVar&, const ScopeVar&) = default;
};

/// Which expressions may be modification points (and, for the template
/// miner, which expressions become templates).
struct TargetConfig {
  std::set<NodeKind> target_kinds = {NodeKind::BinaryOp, NodeKind::UnaryOp,
                                     NodeKind::Call, NodeKind::VarRead,
                                     NodeKind::Conditional};
  std::optional<std::vector<Type>> return_types;  // nullopt: every type

  /// Kind and type filters, plus two structural rules: the expression must
  /// produce a value (no Void calls) and a variable read must name a
  /// variable rather than a function.
  bool accepts(const Node& expr) const;
};

struct ModificationPoint {
  int id = 0;
  const Node* expr = nullptr;  // points into the program it was built from
  NodeId node = 0;
  NodeId statement = 0;
  Type return_type;
  NodeKind target_kind = NodeKind::Literal;
  double weight = 0.0;
  std::vector<ScopeVar> scope_vars;
  SourceLocation location;
};

/// The expressions owned by a statement (its condition, initializer, value
/// or operand) in pre-order. Nested statements are not entered.
std::vector<const Node*> statement_expressions(const Node& stmt);

std::vector<ModificationPoint> extract_modification_points(
    std::span<const faultloc::SuspiciousStatement> suspicious,
    const Program& program, const TargetConfig& config = {});

/// Variables visible at a source position: module-level variables of the
/// file, then parameters, then locals declared earlier in enclosing blocks.
/// Inner declarations shadow outer ones.
std::vector<ScopeVar> variables_in_scope(const Program& program,
                                         const SourceLocation& at);

/// Same, for a specific node (a variable declared by the statement that
/// contains the node is not yet visible).
std::vector<ScopeVar> variables_in_scope(const Program& program,
                                         const Node& at);

}  // namespace cardumen::modpoints
