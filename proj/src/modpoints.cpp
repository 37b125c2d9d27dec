#include "cardumen/modpoints.hpp"

#include <algorithm>
#include <functional>

namespace cardumen::modpoints {

bool TargetConfig::accepts(const Node& expr) const {
  if (!mini::is_expression(expr.kind)) return false;
  if (target_kinds.count(expr.kind) == 0) return false;
  if (!expr.type.is_value()) return false;
  if (expr.kind == NodeKind::VarRead &&
      expr.binding.kind != mini::RefKind::Local &&
      expr.binding.kind != mini::RefKind::Global) {
    return false;
  }
  if (return_types) {
    return std::find(return_types->begin(), return_types->end(), expr.type) !=
           return_types->end();
  }
  return true;
}

std::vector<const Node*> statement_expressions(const Node& stmt) {
  std::vector<const Node*> out;
  std::function<void(const Node&)> visit = [&](const Node& n) {
    out.push_back(&n);
    for (const auto& c : n.children) visit(*c);
  };
  if (mini::is_statement(stmt.kind) && stmt.size() > 0 &&
      mini::is_expression(stmt.child(0)->kind)) {
    visit(*stmt.child(0));
  }
  return out;
}

std::vector<ModificationPoint> extract_modification_points(
    std::span<const faultloc::SuspiciousStatement> suspicious,
    const Program& program, const TargetConfig& config) {
  std::vector<ModificationPoint> out;
  for (const auto& s : suspicious) {
    const Node* stmt = program.find(s.statement);
    if (stmt == nullptr) continue;
    for (const Node* e : statement_expressions(*stmt)) {
      if (!config.accepts(*e)) continue;
      ModificationPoint mp;
      mp.id = static_cast<int>(out.size());
      mp.expr = e;
      mp.node = e->id;
      mp.statement = stmt->id;
      mp.return_type = e->type;
      mp.target_kind = e->kind;
      mp.weight = s.suspiciousness;
      mp.scope_vars = variables_in_scope(program, *e);
      mp.location = e->loc;
      out.push_back(std::move(mp));
    }
  }
  return out;
}

namespace {

class ScopeCollector {
 public:
  using Pred = std::function<bool(const Node&)>;

  ScopeCollector(Pred contains, Pred after)
      : contains_(std::move(contains)), after_(std::move(after)) {}

  void add(const std::string& name, const Type& type) {
    std::erase_if(vars_, [&](const ScopeVar& v) { return v.name == name; });
    vars_.push_back(ScopeVar{name, type});
  }

  void block(const Node& b) {
    for (const auto& s : b.children) {
      if (contains_(*s)) {
        statement(*s);
        return;
      }
      if (after_(*s)) return;
      if (s->kind == NodeKind::LocalVarDecl) add(s->text, s->type);
    }
  }

  void statement(const Node& s) {
    switch (s.kind) {
      case NodeKind::Block:
        block(s);
        return;
      case NodeKind::IfStmt:
      case NodeKind::WhileStmt:
        for (std::size_t i = 1; i < s.size(); ++i) {
          if (contains_(*s.child(i))) {
            statement(*s.child(i));
            return;
          }
        }
        return;
      default:
        return;  // the position is inside this statement's own expression
    }
  }

  std::vector<ScopeVar> take() { return std::move(vars_); }

 private:
  Pred contains_;
  Pred after_;
  std::vector<ScopeVar> vars_;
};

std::vector<ScopeVar> collect(const Program& program, mini::FileId file,
                              const Node* fn, const Node* global_decl,
                              ScopeCollector& c) {
  for (const Node* g : program.globals(file)) {
    if (g == global_decl) break;  // initializers see earlier globals only
    c.add(g->text, g->type);
  }
  if (fn != nullptr) {
    for (std::size_t i = 0; i + 1 < fn->size(); ++i) {
      c.add(fn->child(i)->text, fn->child(i)->type);
    }
    c.block(*fn->children.back());
  }
  return c.take();
}

}  // namespace

std::vector<ScopeVar> variables_in_scope(const Program& program,
                                         const SourceLocation& at) {
  auto contains = [&](const Node& n) {
    return n.contains_position(at.line, at.column);
  };
  auto after = [&](const Node& n) {
    return n.loc.line > at.line ||
           (n.loc.line == at.line && n.loc.column > at.column);
  };
  const Node& module = *program.files().at(static_cast<std::size_t>(at.file)).module;
  const Node* fn = nullptr;
  const Node* global_decl = nullptr;
  for (const auto& d : module.children) {
    if (!contains(*d)) continue;
    if (d->kind == NodeKind::FunctionDecl) fn = d.get();
    if (d->kind == NodeKind::GlobalVarDecl) global_decl = d.get();
  }
  ScopeCollector c(contains, after);
  return collect(program, at.file, fn, global_decl, c);
}

std::vector<ScopeVar> variables_in_scope(const Program& program,
                                         const Node& at) {
  auto contains = [&](const Node& n) {
    for (const Node* p = &at; p != nullptr; p = p->parent) {
      if (p == &n) return true;
    }
    return false;
  };
  auto never = [](const Node&) { return false; };
  const Node* fn = program.enclosing_function(&at);
  const Node* global_decl = nullptr;
  if (fn == nullptr) {
    for (const Node* p = &at; p != nullptr; p = p->parent) {
      if (p->kind == NodeKind::GlobalVarDecl) global_decl = p;
    }
  }
  ScopeCollector c(contains, never);
  return collect(program, at.loc.file, fn, global_decl, c);
}

}  // namespace cardumen::modpoints
