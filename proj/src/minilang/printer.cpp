#include "cardumen/minilang/printer.hpp"

#include <sstream>

namespace cardumen::mini {

std::string escape_string(const std::string& raw) {
  std::string out = "\"";
  for (char c : raw) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

namespace {

bool needs_parens(const Node& n) {
  return n.kind == NodeKind::BinaryOp || n.kind == NodeKind::Conditional;
}

void expr(std::ostringstream& os, const Node& n);

void operand(std::ostringstream& os, const Node& n) {
  if (needs_parens(n)) {
    os << '(';
    expr(os, n);
    os << ')';
  } else {
    expr(os, n);
  }
}

void expr(std::ostringstream& os, const Node& n) {
  switch (n.kind) {
    case NodeKind::Literal:
      if (n.type.base() == BaseType::String) {
        os << escape_string(n.text);
      } else {
        os << n.text;
      }
      return;
    case NodeKind::VarRead:
      os << n.text;
      return;
    case NodeKind::UnaryOp:
      os << n.text;
      // keep `- -x` from lexing as something else and `-(-1)` readable
      if (n.child(0)->kind == NodeKind::UnaryOp) {
        os << '(';
        expr(os, *n.child(0));
        os << ')';
      } else {
        operand(os, *n.child(0));
      }
      return;
    case NodeKind::BinaryOp:
      operand(os, *n.child(0));
      os << ' ' << n.text << ' ';
      operand(os, *n.child(1));
      return;
    case NodeKind::Call:
      expr(os, *n.child(0));
      os << '(';
      for (std::size_t i = 1; i < n.size(); ++i) {
        if (i > 1) os << ", ";
        expr(os, *n.child(i));
      }
      os << ')';
      return;
    case NodeKind::Conditional:
      operand(os, *n.child(0));
      os << " ? ";
      operand(os, *n.child(1));
      os << " : ";
      operand(os, *n.child(2));
      return;
    default:
      os << "<" << kind_name(n.kind) << ">";
  }
}

void indent(std::ostringstream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "  ";
}

void stmt(std::ostringstream& os, const Node& n, int depth);

void block_body(std::ostringstream& os, const Node& b, int depth) {
  os << "{\n";
  for (const auto& c : b.children) stmt(os, *c, depth + 1);
  indent(os, depth);
  os << "}";
}

void if_tail(std::ostringstream& os, const Node& n, int depth) {
  os << "if (";
  expr(os, *n.child(0));
  os << ") ";
  block_body(os, *n.child(1), depth);
  if (n.size() > 2) {
    os << " else ";
    if (n.child(2)->kind == NodeKind::IfStmt) {
      if_tail(os, *n.child(2), depth);
    } else {
      block_body(os, *n.child(2), depth);
    }
  }
}

void stmt(std::ostringstream& os, const Node& n, int depth) {
  indent(os, depth);
  switch (n.kind) {
    case NodeKind::LocalVarDecl:
    case NodeKind::GlobalVarDecl:
      os << "var " << n.text << ": " << n.type.str() << " = ";
      expr(os, *n.child(0));
      os << ";\n";
      return;
    case NodeKind::Assignment:
      os << n.text << " = ";
      expr(os, *n.child(0));
      os << ";\n";
      return;
    case NodeKind::IfStmt:
      if_tail(os, n, depth);
      os << "\n";
      return;
    case NodeKind::WhileStmt:
      os << "while (";
      expr(os, *n.child(0));
      os << ") ";
      block_body(os, *n.child(1), depth);
      os << "\n";
      return;
    case NodeKind::ReturnStmt:
      os << "return ";
      expr(os, *n.child(0));
      os << ";\n";
      return;
    case NodeKind::ExprStmt:
      expr(os, *n.child(0));
      os << ";\n";
      return;
    case NodeKind::Block:
      block_body(os, n, depth);
      os << "\n";
      return;
    case NodeKind::FunctionDecl: {
      os << "fun " << n.text << "(";
      for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        if (i > 0) os << ", ";
        os << n.child(i)->text << ": " << n.child(i)->type.str();
      }
      os << ")";
      if (n.type.result().base() != BaseType::Void) {
        os << ": " << n.type.result().str();
      }
      os << " ";
      block_body(os, *n.children.back(), depth);
      os << "\n";
      return;
    }
    default:
      if (is_expression(n.kind)) {
        expr(os, n);
        os << "\n";
      }
  }
}

void sexpr(std::ostringstream& os, const Node& n, int depth) {
  auto kids = [&](std::size_t from) {
    for (std::size_t i = from; i < n.size(); ++i) {
      os << ' ';
      sexpr(os, *n.child(i), depth + 1);
    }
  };
  auto nl = [&](int d) {
    os << '\n';
    indent(os, d);
  };
  switch (n.kind) {
    case NodeKind::Literal:
      os << "(lit " << n.type.str() << ' '
         << (n.type.base() == BaseType::String ? escape_string(n.text) : n.text)
         << ')';
      return;
    case NodeKind::VarRead:
      os << "(var " << n.text << ')';
      return;
    case NodeKind::UnaryOp:
      os << "(unop " << n.text;
      kids(0);
      os << ')';
      return;
    case NodeKind::BinaryOp:
      os << "(binop " << n.text;
      kids(0);
      os << ')';
      return;
    case NodeKind::Call:
      os << "(call";
      kids(0);
      os << ')';
      return;
    case NodeKind::Conditional:
      os << "(cond";
      kids(0);
      os << ')';
      return;
    case NodeKind::Param:
      os << "(param " << n.text << ' ' << n.type.str() << ')';
      return;
    default:
      break;
  }
  // statements and declarations: one child per line
  switch (n.kind) {
    case NodeKind::Module: os << "(module"; break;
    case NodeKind::FunctionDecl:
      os << "(fun " << n.text << " (";
      for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        if (i > 0) os << ' ';
        sexpr(os, *n.child(i), depth + 1);
      }
      os << ") " << n.type.result().str();
      nl(depth + 1);
      sexpr(os, *n.children.back(), depth + 1);
      os << ')';
      return;
    case NodeKind::GlobalVarDecl:
      os << "(global " << n.text << ' ' << n.type.str();
      kids(0);
      os << ')';
      return;
    case NodeKind::LocalVarDecl:
      os << "(local " << n.text << ' ' << n.type.str();
      kids(0);
      os << ')';
      return;
    case NodeKind::Assignment:
      os << "(assign " << n.text;
      kids(0);
      os << ')';
      return;
    case NodeKind::ReturnStmt:
      os << "(return";
      kids(0);
      os << ')';
      return;
    case NodeKind::ExprStmt:
      os << "(expr";
      kids(0);
      os << ')';
      return;
    case NodeKind::IfStmt: os << "(if "; sexpr(os, *n.child(0), depth + 1);
      for (std::size_t i = 1; i < n.size(); ++i) {
        nl(depth + 1);
        sexpr(os, *n.child(i), depth + 1);
      }
      os << ')';
      return;
    case NodeKind::WhileStmt:
      os << "(while ";
      sexpr(os, *n.child(0), depth + 1);
      nl(depth + 1);
      sexpr(os, *n.child(1), depth + 1);
      os << ')';
      return;
    case NodeKind::Block: os << "(block"; break;
    default: os << "(?"; break;
  }
  for (const auto& c : n.children) {
    nl(depth + 1);
    sexpr(os, *c, depth + 1);
  }
  os << ')';
}

}  // namespace

std::string print_expression(const Node& e) {
  std::ostringstream os;
  expr(os, e);
  return os.str();
}

std::string print_source(const Node& node) {
  std::ostringstream os;
  if (node.kind == NodeKind::Module) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (i > 0 && (node.child(i)->kind == NodeKind::FunctionDecl ||
                    node.child(i - 1)->kind == NodeKind::FunctionDecl)) {
        os << "\n";
      }
      stmt(os, *node.child(i), 0);
    }
  } else {
    stmt(os, node, 0);
  }
  return os.str();
}

std::string to_sexpr(const Node& node) {
  std::ostringstream os;
  sexpr(os, node, 0);
  os << '\n';
  return os.str();
}

}  // namespace cardumen::mini
