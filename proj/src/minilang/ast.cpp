#include "cardumen/minilang/ast.hpp"

#include <functional>
#include <stdexcept>

namespace cardumen::mini {

std::string_view kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Literal: return "Literal";
    case NodeKind::VarRead: return "VarRead";
    case NodeKind::UnaryOp: return "UnaryOp";
    case NodeKind::BinaryOp: return "BinaryOp";
    case NodeKind::Call: return "Call";
    case NodeKind::Conditional: return "Conditional";
    case NodeKind::Assignment: return "Assignment";
    case NodeKind::LocalVarDecl: return "LocalVarDecl";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::WhileStmt: return "WhileStmt";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::ExprStmt: return "ExprStmt";
    case NodeKind::Block: return "Block";
    case NodeKind::Param: return "Param";
    case NodeKind::FunctionDecl: return "FunctionDecl";
    case NodeKind::GlobalVarDecl: return "GlobalVarDecl";
    case NodeKind::Module: return "Module";
  }
  return "?";
}

bool is_expression(NodeKind kind) {
  switch (kind) {
    case NodeKind::Literal:
    case NodeKind::VarRead:
    case NodeKind::UnaryOp:
    case NodeKind::BinaryOp:
    case NodeKind::Call:
    case NodeKind::Conditional:
      return true;
    default:
      return false;
  }
}

bool is_statement(NodeKind kind) {
  switch (kind) {
    case NodeKind::Assignment:
    case NodeKind::LocalVarDecl:
    case NodeKind::IfStmt:
    case NodeKind::WhileStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::ExprStmt:
      return true;
    default:
      return false;
  }
}

bool Node::contains_position(int line, int column) const {
  auto before = [](int l1, int c1, int l2, int c2) {
    return l1 < l2 || (l1 == l2 && c1 <= c2);
  };
  return before(loc.line, loc.column, line, column) &&
         before(line, column, end_line, end_column) &&
         !(line == end_line && column == end_column);
}

std::unique_ptr<Node> Node::clone() const {
  auto copy = std::make_unique<Node>();
  copy->kind = kind;
  copy->id = id;
  copy->loc = loc;
  copy->end_line = end_line;
  copy->end_column = end_column;
  copy->text = text;
  copy->type = type;
  copy->binding = binding;
  copy->slot = slot;
  copy->frame_size = frame_size;
  copy->children.reserve(children.size());
  for (const auto& c : children) {
    copy->children.push_back(c->clone());
    copy->children.back()->parent = copy.get();
  }
  return copy;
}

void relink_parents(Node& root) {
  for (auto& c : root.children) {
    c->parent = &root;
    relink_parents(*c);
  }
}

std::unique_ptr<Node> make_node(NodeKind kind, SourceLocation loc,
                                std::string text) {
  auto n = std::make_unique<Node>(kind, loc);
  n->text = std::move(text);
  return n;
}

bool is_test_function(const Node& fn) {
  if (fn.kind != NodeKind::FunctionDecl) return false;
  if (fn.text.rfind("test_", 0) != 0) return false;
  return fn.children.size() == 1;  // body only, no params
}

namespace {

void walk(Node& n, const std::function<void(Node&)>& fn) {
  fn(n);
  for (auto& c : n.children) walk(*c, fn);
}

}  // namespace

FileId Program::add_file(std::string path, std::string package,
                         std::unique_ptr<Node> module) {
  PackageId pkg = -1;
  for (std::size_t i = 0; i < packages_.size(); ++i) {
    if (packages_[i] == package) pkg = static_cast<PackageId>(i);
  }
  if (pkg < 0) {
    pkg = static_cast<PackageId>(packages_.size());
    packages_.push_back(std::move(package));
  }
  auto fid = static_cast<FileId>(files_.size());
  walk(*module, [&](Node& n) {
    n.id = next_id_++;
    n.loc.file = fid;
    n.loc.package = pkg;
  });
  relink_parents(*module);
  module->parent = nullptr;
  files_.push_back(SourceFile{std::move(path), pkg, std::move(module)});
  reindex();
  return fid;
}

Program Program::clone() const {
  Program p;
  p.packages_ = packages_;
  p.next_id_ = next_id_;
  for (const auto& f : files_) {
    p.files_.push_back(SourceFile{f.path, f.package, f.module->clone()});
  }
  p.reindex();
  return p;
}

void Program::reindex() {
  by_id_.clear();
  functions_.clear();
  function_index_.clear();
  statements_.clear();
  globals_.assign(files_.size(), {});
  for (std::size_t fi = 0; fi < files_.size(); ++fi) {
    Node& module = *files_[fi].module;
    relink_parents(module);
    walk(module, [&](Node& n) { by_id_[n.id] = &n; });
    for (auto& decl : module.children) {
      if (decl->kind == NodeKind::FunctionDecl) {
        function_index_.emplace(decl->text,
                                static_cast<int>(functions_.size()));
        functions_.push_back(decl.get());
        if (is_test_function(*decl)) continue;
        walk(*decl, [&](Node& n) {
          if (is_statement(n.kind)) statements_.push_back(&n);
        });
      } else if (decl->kind == NodeKind::GlobalVarDecl) {
        globals_[fi].push_back(decl.get());
      }
    }
  }
}

Node* Program::find(NodeId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

const Node* Program::function(std::string_view name) const {
  int i = function_index(name);
  return i < 0 ? nullptr : functions_[static_cast<std::size_t>(i)];
}

int Program::function_index(std::string_view name) const {
  auto it = function_index_.find(std::string(name));
  return it == function_index_.end() ? -1 : it->second;
}

const Node* Program::enclosing_function(const Node* n) const {
  while (n != nullptr && n->kind != NodeKind::FunctionDecl) n = n->parent;
  return n;
}

const Node* Program::enclosing_statement(const Node* n) {
  while (n != nullptr && !is_statement(n->kind)) n = n->parent;
  return n;
}

std::unique_ptr<Node> Program::replace_expression(
    NodeId target, std::unique_ptr<Node> replacement) {
  Node* old = find(target);
  if (old == nullptr || !is_expression(old->kind) || old->parent == nullptr) {
    throw std::invalid_argument("replace_expression: no expression with id " +
                                std::to_string(target));
  }
  Node* parent = old->parent;
  for (auto& c : parent->children) {
    if (c.get() == old) {
      replacement->parent = parent;
      std::swap(c, replacement);
      break;
    }
  }
  if (next_id_ <= 0) next_id_ = 1;
  // give fresh ids to any replacement node that does not have one
  walk(*parent, [&](Node& n) {
    if (n.id == 0) n.id = next_id_++;
  });
  reindex();
  return replacement;
}

}  // namespace cardumen::mini
