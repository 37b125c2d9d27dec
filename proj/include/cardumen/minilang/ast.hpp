#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "cardumen/minilang/types.hpp"

namespace cardumen::mini {

using FileId = int;
using PackageId = int;
using NodeId = std::int64_t;

struct SourceLocation {
  FileId file = 0;
  PackageId package = 0;
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
  friend bool operator<(const SourceLocation& a, const SourceLocation& b) {
    return std::tie(a.file, a.line, a.column) <
           std::tie(b.file, b.line, b.column);
  }
};

enum class NodeKind {
  // expressions
  Literal,
  VarRead,
  UnaryOp,
  BinaryOp,
  Call,
  Conditional,
  // statements
  Assignment,
  LocalVarDecl,
  IfStmt,
  WhileStmt,
  ReturnStmt,
  ExprStmt,
  Block,
  // declarations
  Param,
  FunctionDecl,
  GlobalVarDecl,
  Module,
};

std::string_view kind_name(NodeKind kind);
bool is_expression(NodeKind kind);
/// Statements that carry coverage and suspiciousness. Blocks are containers
/// only and are not counted.
bool is_statement(NodeKind kind);

/// What a name (variable read, assignment target) resolved to.
enum class RefKind { None, Local, Global, Function, Builtin, Placeholder };

struct Binding {
  RefKind kind = RefKind::None;
  int slot = -1;  // frame slot, global slot, function index, builtin id or
                  // placeholder index, depending on kind
};

/// One node of the Mini syntax tree.
///
/// Layout of `children` per kind:
///   Call          callee, args...
///   Conditional   cond, then, else
///   Assignment    value            (target name in `text`)
///   LocalVarDecl  init             (name in `text`, declared type in `type`)
///   GlobalVarDecl init
///   IfStmt        cond, then-block [, else-block or IfStmt]
///   WhileStmt     cond, body
///   ReturnStmt    [value]
///   FunctionDecl  params..., body  (`type` is the function type)
struct Node {
  NodeKind kind = NodeKind::Literal;
  NodeId id = 0;
  SourceLocation loc;
  int end_line = 1;  // exclusive end of the node's source span
  int end_column = 1;
  std::string text;  // identifier, operator spelling or literal spelling
  Type type;
  Binding binding;
  int slot = -1;        // declarations: assigned frame/global slot
  int frame_size = 0;   // FunctionDecl: number of frame slots
  std::vector<std::unique_ptr<Node>> children;
  Node* parent = nullptr;

  Node() = default;
  Node(NodeKind k, SourceLocation l) : kind(k), loc(l) {}

  Node* child(std::size_t i) const { return children.at(i).get(); }
  std::size_t size() const { return children.size(); }
  bool contains_position(int line, int column) const;

  /// Deep copy. Ids, locations and annotations are preserved; parent links
  /// inside the copy are rebuilt.
  std::unique_ptr<Node> clone() const;
};

void relink_parents(Node& root);
std::unique_ptr<Node> make_node(NodeKind kind, SourceLocation loc,
                                std::string text = {});

struct SourceFile {
  std::string path;  // relative to the project root, '/'-separated
  PackageId package = 0;
  std::unique_ptr<Node> module;
};

/// A set of parsed Mini source files. Indexes (functions, statements,
/// globals) are rebuilt by `reindex()` and populated with types by the type
/// checker.
class Program {
 public:
  Program() = default;
  Program(Program&&) = default;
  Program& operator=(Program&&) = default;
  Program(const Program&) = delete;
  Program& operator=(const Program&) = delete;

  FileId add_file(std::string path, std::string package,
                  std::unique_ptr<Node> module);
  Program clone() const;

  const std::vector<SourceFile>& files() const { return files_; }
  const std::vector<std::string>& packages() const { return packages_; }
  const std::string& file_path(FileId f) const { return files_.at(f).path; }
  const std::string& package_name(PackageId p) const {
    return packages_.at(p);
  }
  PackageId package_of(FileId f) const { return files_.at(f).package; }

  /// Rebuilds parent links and lookup indexes. Called by the type checker.
  void reindex();

  Node* find(NodeId id) const;
  NodeId fresh_id() { return next_id_++; }
  NodeId next_id() const { return next_id_; }

  const std::vector<Node*>& functions() const { return functions_; }
  const Node* function(std::string_view name) const;
  int function_index(std::string_view name) const;
  const std::vector<Node*>& globals(FileId f) const { return globals_.at(f); }

  /// Statements inside non-test function bodies, in source order.
  const std::vector<Node*>& statements() const { return statements_; }
  /// The enclosing function of a node, or nullptr for module-level nodes.
  const Node* enclosing_function(const Node* n) const;
  /// The nearest statement ancestor (or self) of a node, or nullptr.
  static const Node* enclosing_statement(const Node* n);

  /// Replaces the expression with id `target` by `replacement`. Returns the
  /// replaced subtree. The program must be re-typechecked afterwards.
  std::unique_ptr<Node> replace_expression(NodeId target,
                                           std::unique_ptr<Node> replacement);

 private:
  std::vector<SourceFile> files_;
  std::vector<std::string> packages_;
  NodeId next_id_ = 1;

  std::unordered_map<NodeId, Node*> by_id_;
  std::vector<Node*> functions_;
  std::unordered_map<std::string, int> function_index_;
  std::vector<std::vector<Node*>> globals_;
  std::vector<Node*> statements_;
};

/// A function named `test_*` with no parameters is a test case.
bool is_test_function(const Node& fn);

}  // namespace cardumen::mini
