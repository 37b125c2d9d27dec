#include "cardumen/minilang/typecheck.hpp"

#include <map>
#include <sstream>

#include "cardumen/minilang/builtins.hpp"

namespace cardumen::mini {

namespace {

std::string format_issues(const std::vector<TypeIssue>& issues) {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i > 0) os << '\n';
    const auto& is = issues[i];
    os << is.loc.line << ':' << is.loc.column << ": " << is.message;
    if (!is.expected.empty()) {
      os << " (expected " << is.expected << ", found " << is.found << ")";
    }
  }
  return os.str();
}

struct LocalVar {
  Type type;
  int slot;
};

class Checker {
 public:
  explicit Checker(Program& p) : program_(p) {}

  void run() {
    program_.reindex();
    check_function_names();
    for (std::size_t f = 0; f < program_.files().size(); ++f) {
      globals_.clear();
      for (auto& decl : program_.files()[f].module->children) {
        if (decl->kind == NodeKind::GlobalVarDecl) global(*decl);
      }
      for (auto& decl : program_.files()[f].module->children) {
        if (decl->kind == NodeKind::FunctionDecl) function(*decl);
      }
    }
    if (!issues_.empty()) throw TypeError(std::move(issues_));
  }

 private:
  void issue(const Node& n, std::string msg, const Type* expected = nullptr,
             const Type* found = nullptr) {
    TypeIssue is{n.loc, {}, {}, std::move(msg)};
    if (expected != nullptr && found != nullptr) {
      is.expected = expected->str();
      is.found = found->str();
    }
    issues_.push_back(std::move(is));
  }

  void expect_type(const Node& n, const Type& expected, const char* what) {
    if (!n.type.known()) return;  // already reported
    if (n.type != expected) {
      issue(n, std::string("type mismatch in ") + what, &expected, &n.type);
    }
  }

  void check_function_names() {
    std::map<std::string, const Node*> seen;
    for (const Node* fn : program_.functions()) {
      if (find_builtin(fn->text) >= 0) {
        issue(*fn, "function '" + fn->text + "' shadows a builtin");
      }
      auto [it, fresh] = seen.emplace(fn->text, fn);
      if (!fresh) issue(*fn, "duplicate function '" + fn->text + "'");
      for (std::size_t i = 0; i + 1 < fn->size(); ++i) {
        if (!fn->child(i)->type.is_value()) {
          issue(*fn->child(i), "parameter cannot have type Void");
        }
      }
    }
  }

  void global(Node& decl) {
    if (!decl.type.is_value()) issue(decl, "variable cannot have type Void");
    expression(*decl.child(0));
    expect_type(*decl.child(0), decl.type, "global initializer");
    if (globals_.count(decl.text) != 0) {
      issue(decl, "duplicate global '" + decl.text + "'");
    }
    decl.slot = static_cast<int>(globals_.size());
    globals_.emplace(decl.text, LocalVar{decl.type, decl.slot});
  }

  void function(Node& fn) {
    scopes_.assign(1, {});
    next_slot_ = 0;
    result_ = fn.type.result();
    for (std::size_t i = 0; i + 1 < fn.size(); ++i) {
      Node& p = *fn.child(i);
      if (scopes_.back().count(p.text) != 0) {
        issue(p, "duplicate parameter '" + p.text + "'");
      }
      p.slot = next_slot_++;
      scopes_.back()[p.text] = LocalVar{p.type, p.slot};
    }
    block(*fn.children.back());
    fn.frame_size = next_slot_;
    scopes_.clear();
  }

  void block(Node& b) {
    scopes_.emplace_back();
    for (auto& s : b.children) statement(*s);
    scopes_.pop_back();
  }

  void statement(Node& s) {
    switch (s.kind) {
      case NodeKind::LocalVarDecl: {
        if (!s.type.is_value()) issue(s, "variable cannot have type Void");
        expression(*s.child(0));
        expect_type(*s.child(0), s.type, "initializer");
        if (scopes_.back().count(s.text) != 0) {
          issue(s, "duplicate local '" + s.text + "'");
        }
        s.slot = next_slot_++;
        scopes_.back()[s.text] = LocalVar{s.type, s.slot};
        return;
      }
      case NodeKind::Assignment: {
        expression(*s.child(0));
        Binding b;
        Type t;
        if (!lookup_variable(s.text, b, t)) {
          issue(s, "assignment to undeclared variable '" + s.text + "'");
          return;
        }
        s.binding = b;
        expect_type(*s.child(0), t, "assignment");
        return;
      }
      case NodeKind::IfStmt:
        expression(*s.child(0));
        expect_type(*s.child(0), Type::Bool(), "if condition");
        block(*s.child(1));
        if (s.size() > 2) {
          if (s.child(2)->kind == NodeKind::IfStmt) {
            statement(*s.child(2));
          } else {
            block(*s.child(2));
          }
        }
        return;
      case NodeKind::WhileStmt:
        expression(*s.child(0));
        expect_type(*s.child(0), Type::Bool(), "while condition");
        block(*s.child(1));
        return;
      case NodeKind::ReturnStmt:
        expression(*s.child(0));
        if (result_.base() == BaseType::Void) {
          issue(s, "cannot return a value from a Void function");
        } else {
          expect_type(*s.child(0), result_, "return");
        }
        return;
      case NodeKind::ExprStmt:
        expression(*s.child(0));
        return;
      case NodeKind::Block:
        block(s);
        return;
      default:
        issue(s, std::string("unexpected ") + std::string(kind_name(s.kind)));
    }
  }

  bool lookup_variable(const std::string& name, Binding& b, Type& t) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        b = Binding{RefKind::Local, f->second.slot};
        t = f->second.type;
        return true;
      }
    }
    auto g = globals_.find(name);
    if (g != globals_.end()) {
      b = Binding{RefKind::Global, g->second.slot};
      t = g->second.type;
      return true;
    }
    return false;
  }

  void var_read(Node& e) {
    Binding b;
    Type t;
    if (lookup_variable(e.text, b, t)) {
      e.binding = b;
      e.type = t;
      return;
    }
    if (int fi = program_.function_index(e.text); fi >= 0) {
      e.binding = Binding{RefKind::Function, fi};
      e.type = program_.functions()[static_cast<std::size_t>(fi)]->type;
      return;
    }
    if (int bi = find_builtin(e.text); bi >= 0) {
      e.binding = Binding{RefKind::Builtin, bi};
      e.type = builtins()[static_cast<std::size_t>(bi)].type;
      return;
    }
    e.binding = Binding{};
    e.type = Type();
    issue(e, "undefined name '" + e.text + "'");
  }

  static bool numeric(const Type& t) {
    return t.base() == BaseType::Int || t.base() == BaseType::Float;
  }

  void expression(Node& e) {
    for (auto& c : e.children) expression(*c);
    switch (e.kind) {
      case NodeKind::Literal:
        return;  // typed by the parser
      case NodeKind::VarRead:
        var_read(e);
        return;
      case NodeKind::UnaryOp: {
        const Type& t = e.child(0)->type;
        e.type = Type();
        if (!t.known()) return;
        if (e.text == "-" && numeric(t)) {
          e.type = t;
        } else if (e.text == "!" && t.base() == BaseType::Bool) {
          e.type = t;
        } else {
          issue(e, "operator " + e.text + " not applicable to " + t.str());
        }
        return;
      }
      case NodeKind::BinaryOp:
        binary(e);
        return;
      case NodeKind::Call: {
        e.type = Type();
        const Type& ct = e.child(0)->type;
        if (!ct.known()) return;
        if (!ct.is_function()) {
          issue(e, "'" + e.child(0)->text + "' is not callable");
          return;
        }
        const auto& params = ct.params();
        if (params.size() + 1 != e.size()) {
          issue(e, "wrong number of arguments to '" + e.child(0)->text + "'");
          return;
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
          expect_type(*e.child(i + 1), params[i], "argument");
        }
        e.type = ct.result();
        return;
      }
      case NodeKind::Conditional: {
        e.type = Type();
        expect_type(*e.child(0), Type::Bool(), "conditional test");
        const Type& a = e.child(1)->type;
        const Type& b = e.child(2)->type;
        if (!a.known() || !b.known()) return;
        if (a != b) {
          issue(e, "conditional branches differ", &a, &b);
        } else if (!a.is_value()) {
          issue(e, "conditional branches must produce a value");
        } else {
          e.type = a;
        }
        return;
      }
      default:
        issue(e, "unexpected node in expression");
    }
  }

  void binary(Node& e) {
    e.type = Type();
    const Type& a = e.child(0)->type;
    const Type& b = e.child(1)->type;
    if (!a.known() || !b.known()) return;
    const std::string& op = e.text;
    if (a != b) {
      issue(e, "operands of " + op + " have different types", &a, &b);
      return;
    }
    if (op == "+" || op == "-" || op == "*" || op == "/") {
      if (numeric(a) || (op == "+" && a.base() == BaseType::String)) {
        e.type = a;
        return;
      }
    } else if (op == "%") {
      if (a.base() == BaseType::Int) {
        e.type = a;
        return;
      }
    } else if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      if (numeric(a)) {
        e.type = Type::Bool();
        return;
      }
    } else if (op == "==" || op == "!=") {
      if (a.is_value() && !a.is_function()) {
        e.type = Type::Bool();
        return;
      }
    } else if (op == "&&" || op == "||") {
      if (a.base() == BaseType::Bool) {
        e.type = a;
        return;
      }
    }
    issue(e, "operator " + op + " not applicable to " + a.str());
  }

  Program& program_;
  std::map<std::string, LocalVar> globals_;
  std::vector<std::map<std::string, LocalVar>> scopes_;
  int next_slot_ = 0;
  Type result_;
  std::vector<TypeIssue> issues_;
};

}  // namespace

TypeError::TypeError(std::vector<TypeIssue> issues)
    : std::runtime_error(format_issues(issues)), issues_(std::move(issues)) {}

void typecheck(Program& program) { Checker(program).run(); }

}  // namespace cardumen::mini
