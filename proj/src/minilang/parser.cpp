#include "cardumen/minilang/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace cardumen::mini {

namespace {

enum class Tok {
  Ident,
  IntLit,
  FloatLit,
  StringLit,
  KwFun,
  KwVar,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwTrue,
  KwFalse,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Colon,
  Question,
  Assign,
  Op,  // any operator; spelling in `text`
  End,
  Bad,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::StringLit: return "string literal";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  Lexer(std::string_view src, int line, int column)
      : src_(src), line_(line), column_(column) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        t.end_line = line_;
        t.end_column = column_;
        out.push_back(t);
        return out;
      }
      lex_one(t);
      t.end_line = line_;
      t.end_column = column_;
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  void lex_one(Token& t) {
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        t.text += advance();
      t.kind = keyword(t.text);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number(t);
      return;
    }
    if (c == '"') {
      lex_string(t);
      return;
    }
    t.text = std::string(1, advance());
    switch (c) {
      case '(': t.kind = Tok::LParen; return;
      case ')': t.kind = Tok::RParen; return;
      case '{': t.kind = Tok::LBrace; return;
      case '}': t.kind = Tok::RBrace; return;
      case ',': t.kind = Tok::Comma; return;
      case ';': t.kind = Tok::Semi; return;
      case ':': t.kind = Tok::Colon; return;
      case '?': t.kind = Tok::Question; return;
      case '+':
      case '-':
      case '*':
      case '/':
      case '%':
        t.kind = Tok::Op;
        return;
      case '=':
      case '!':
      case '<':
      case '>':
        if (peek() == '=') t.text += advance();
        t.kind = t.text == "=" ? Tok::Assign : Tok::Op;
        return;
      case '&':
      case '|':
        if (peek() == c) {
          t.text += advance();
          t.kind = Tok::Op;
          return;
        }
        break;
      default:
        break;
    }
    t.kind = Tok::Bad;
  }

  void lex_number(Token& t) {
    while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
    t.kind = Tok::IntLit;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      t.kind = Tok::FloatLit;
      t.text += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') &&
          std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      t.kind = Tok::FloatLit;
      t.text += advance();
      if (peek() == '+' || peek() == '-') t.text += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
    }
  }

  void lex_string(Token& t) {
    advance();  // opening quote
    t.kind = Tok::StringLit;
    for (;;) {
      if (pos_ >= src_.size() || peek() == '\n') {
        t.kind = Tok::Bad;
        t.text = "unterminated string literal";
        return;
      }
      char c = advance();
      if (c == '"') return;
      if (c == '\\') {
        char e = pos_ < src_.size() ? advance() : '\0';
        switch (e) {
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          case '\\': t.text += '\\'; break;
          case '"': t.text += '"'; break;
          default:
            t.kind = Tok::Bad;
            t.text = "invalid escape sequence";
            return;
        }
      } else {
        t.text += c;
      }
    }
  }

  static Tok keyword(const std::string& s) {
    if (s == "fun") return Tok::KwFun;
    if (s == "var") return Tok::KwVar;
    if (s == "if") return Tok::KwIf;
    if (s == "else") return Tok::KwElse;
    if (s == "while") return Tok::KwWhile;
    if (s == "return") return Tok::KwReturn;
    if (s == "true") return Tok::KwTrue;
    if (s == "false") return Tok::KwFalse;
    return Tok::Ident;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int column_;
};

struct ParseFailure {};

class Parser {
 public:
  Parser(std::vector<Token> toks, FileId file, PackageId package)
      : toks_(std::move(toks)), file_(file), package_(package) {}

  std::unique_ptr<Node> module() {
    auto mod = make_node(NodeKind::Module, loc_of(cur()));
    while (cur().kind != Tok::End) {
      try {
        if (cur().kind == Tok::KwFun) {
          mod->children.push_back(function());
        } else if (cur().kind == Tok::KwVar) {
          mod->children.push_back(var_decl(NodeKind::GlobalVarDecl));
        } else {
          error(cur(), "expected 'fun' or 'var' at top level, found " +
                           describe(cur()));
        }
      } catch (const ParseFailure&) {
        // resynchronise on the next top-level keyword
        do {
          ++pos_;
        } while (cur().kind != Tok::End && cur().kind != Tok::KwFun &&
                 cur().kind != Tok::KwVar);
      }
    }
    finish(*mod, cur());
    return mod;
  }

  std::unique_ptr<Node> lone_expression() {
    auto e = expression();
    if (cur().kind != Tok::End) {
      error(cur(), "unexpected " + describe(cur()) + " after expression");
    }
    return e;
  }

  std::vector<Diagnostic>& diagnostics() { return diags_; }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek_tok(std::size_t ahead) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  SourceLocation loc_of(const Token& t) const {
    return SourceLocation{file_, package_, t.line, t.column};
  }

  [[noreturn]] void error(const Token& t, std::string msg) {
    if (t.kind == Tok::Bad && t.text.find(' ') != std::string::npos)
      msg = t.text;
    diags_.push_back(Diagnostic{t.line, t.column, std::move(msg)});
    throw ParseFailure{};
  }

  const Token& expect(Tok kind, const char* what) {
    if (cur().kind != kind) {
      error(cur(), std::string("expected ") + what + ", found " +
                       describe(cur()));
    }
    return toks_[pos_++];
  }

  bool accept(Tok kind) {
    if (cur().kind != kind) return false;
    ++pos_;
    return true;
  }

  bool at_op(std::string_view op) const {
    return cur().kind == Tok::Op && cur().text == op;
  }

  void finish(Node& n, const Token& last) {
    n.end_line = last.end_line;
    n.end_column = last.end_column;
  }

  void finish_prev(Node& n) { finish(n, toks_[pos_ == 0 ? 0 : pos_ - 1]); }

  Type type() {
    const Token& t = expect(Tok::Ident, "type name");
    if (t.text == "Int") return Type::Int();
    if (t.text == "Float") return Type::Float();
    if (t.text == "Bool") return Type::Bool();
    if (t.text == "String") return Type::String();
    if (t.text == "Void") return Type::Void();
    if (t.text == "Fun") {
      expect(Tok::LParen, "'('");
      std::vector<Type> params;
      if (cur().kind != Tok::RParen) {
        params.push_back(type());
        while (accept(Tok::Comma)) params.push_back(type());
      }
      expect(Tok::RParen, "')'");
      expect(Tok::Colon, "':'");
      Type result = type();
      return Type::Function(std::move(params), std::move(result));
    }
    error(t, "unknown type '" + t.text + "'");
  }

  std::unique_ptr<Node> function() {
    auto fn = make_node(NodeKind::FunctionDecl, loc_of(cur()));
    expect(Tok::KwFun, "'fun'");
    fn->text = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    std::vector<Type> param_types;
    if (cur().kind != Tok::RParen) {
      do {
        auto p = make_node(NodeKind::Param, loc_of(cur()));
        p->text = expect(Tok::Ident, "parameter name").text;
        expect(Tok::Colon, "':'");
        p->type = type();
        finish_prev(*p);
        param_types.push_back(p->type);
        fn->children.push_back(std::move(p));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    Type result = Type::Void();
    if (accept(Tok::Colon)) result = type();
    fn->type = Type::Function(std::move(param_types), std::move(result));
    fn->children.push_back(block());
    finish_prev(*fn);
    return fn;
  }

  std::unique_ptr<Node> var_decl(NodeKind kind) {
    auto d = make_node(kind, loc_of(cur()));
    expect(Tok::KwVar, "'var'");
    d->text = expect(Tok::Ident, "variable name").text;
    expect(Tok::Colon, "':'");
    d->type = type();
    expect(Tok::Assign, "'='");
    d->children.push_back(expression());
    expect(Tok::Semi, "';'");
    finish_prev(*d);
    return d;
  }

  std::unique_ptr<Node> block() {
    auto b = make_node(NodeKind::Block, loc_of(cur()));
    expect(Tok::LBrace, "'{'");
    while (cur().kind != Tok::RBrace) {
      if (cur().kind == Tok::End) error(cur(), "expected '}', found end of input");
      try {
        b->children.push_back(statement());
      } catch (const ParseFailure&) {
        recover_statement();
      }
    }
    expect(Tok::RBrace, "'}'");
    finish_prev(*b);
    return b;
  }

  void recover_statement() {
    int depth = 0;
    while (cur().kind != Tok::End) {
      if (cur().kind == Tok::LBrace) ++depth;
      if (cur().kind == Tok::RBrace) {
        if (depth == 0) return;
        --depth;
      }
      if (cur().kind == Tok::Semi && depth == 0) {
        ++pos_;
        return;
      }
      ++pos_;
    }
  }

  std::unique_ptr<Node> statement() {
    switch (cur().kind) {
      case Tok::KwVar:
        return var_decl(NodeKind::LocalVarDecl);
      case Tok::KwIf:
        return if_stmt();
      case Tok::KwWhile: {
        auto w = make_node(NodeKind::WhileStmt, loc_of(cur()));
        ++pos_;
        expect(Tok::LParen, "'('");
        w->children.push_back(expression());
        expect(Tok::RParen, "')'");
        w->children.push_back(block());
        finish_prev(*w);
        return w;
      }
      case Tok::KwReturn: {
        auto r = make_node(NodeKind::ReturnStmt, loc_of(cur()));
        ++pos_;
        r->children.push_back(expression());
        expect(Tok::Semi, "';'");
        finish_prev(*r);
        return r;
      }
      case Tok::LBrace:
        return block();
      case Tok::Ident:
        if (peek_tok(1).kind == Tok::Assign) {
          auto a = make_node(NodeKind::Assignment, loc_of(cur()), cur().text);
          pos_ += 2;
          a->children.push_back(expression());
          expect(Tok::Semi, "';'");
          finish_prev(*a);
          return a;
        }
        [[fallthrough]];
      default: {
        auto s = make_node(NodeKind::ExprStmt, loc_of(cur()));
        s->children.push_back(expression());
        expect(Tok::Semi, "';'");
        finish_prev(*s);
        return s;
      }
    }
  }

  std::unique_ptr<Node> if_stmt() {
    auto s = make_node(NodeKind::IfStmt, loc_of(cur()));
    expect(Tok::KwIf, "'if'");
    expect(Tok::LParen, "'('");
    s->children.push_back(expression());
    expect(Tok::RParen, "')'");
    s->children.push_back(block());
    if (accept(Tok::KwElse)) {
      if (cur().kind == Tok::KwIf) {
        s->children.push_back(if_stmt());
      } else {
        s->children.push_back(block());
      }
    }
    finish_prev(*s);
    return s;
  }

  std::unique_ptr<Node> expression() {
    auto cond = binary(0);
    if (cur().kind != Tok::Question) return cond;
    ++pos_;
    auto e = make_node(NodeKind::Conditional, cond->loc);
    auto then_e = expression();
    expect(Tok::Colon, "':'");
    auto else_e = expression();
    e->children.push_back(std::move(cond));
    e->children.push_back(std::move(then_e));
    e->children.push_back(std::move(else_e));
    finish_prev(*e);
    return e;
  }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == "<=" || op == ">" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return -1;
  }

  // precedence climbing over left-associative binary operators
  std::unique_ptr<Node> binary(int min_prec) {
    auto lhs = unary();
    for (;;) {
      if (cur().kind != Tok::Op) return lhs;
      int prec = precedence(cur().text);
      if (prec < 0 || prec <= min_prec) return lhs;
      auto b = make_node(NodeKind::BinaryOp, lhs->loc, cur().text);
      ++pos_;
      auto rhs = binary(prec);
      b->children.push_back(std::move(lhs));
      b->children.push_back(std::move(rhs));
      finish_prev(*b);
      lhs = std::move(b);
    }
  }

  std::unique_ptr<Node> unary() {
    if (at_op("-") || at_op("!")) {
      auto u = make_node(NodeKind::UnaryOp, loc_of(cur()), cur().text);
      ++pos_;
      u->children.push_back(unary());
      finish_prev(*u);
      return u;
    }
    return primary();
  }

  std::unique_ptr<Node> primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::IntLit: {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(),
                                       t.text.data() + t.text.size(), v);
        if (ec != std::errc()) error(t, "integer literal out of range");
        auto n = make_node(NodeKind::Literal, loc_of(t), t.text);
        n->type = Type::Int();
        ++pos_;
        finish_prev(*n);
        return n;
      }
      case Tok::FloatLit: {
        auto n = make_node(NodeKind::Literal, loc_of(t), t.text);
        n->type = Type::Float();
        ++pos_;
        finish_prev(*n);
        return n;
      }
      case Tok::StringLit: {
        auto n = make_node(NodeKind::Literal, loc_of(t), t.text);
        n->type = Type::String();
        ++pos_;
        finish_prev(*n);
        return n;
      }
      case Tok::KwTrue:
      case Tok::KwFalse: {
        auto n = make_node(NodeKind::Literal, loc_of(t), t.text);
        n->type = Type::Bool();
        ++pos_;
        finish_prev(*n);
        return n;
      }
      case Tok::Ident: {
        auto v = make_node(NodeKind::VarRead, loc_of(t), t.text);
        ++pos_;
        finish_prev(*v);
        if (cur().kind != Tok::LParen) return v;
        auto call = make_node(NodeKind::Call, v->loc);
        call->children.push_back(std::move(v));
        ++pos_;
        if (cur().kind != Tok::RParen) {
          call->children.push_back(expression());
          while (accept(Tok::Comma)) call->children.push_back(expression());
        }
        expect(Tok::RParen, "')'");
        finish_prev(*call);
        return call;
      }
      case Tok::LParen: {
        ++pos_;
        auto e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        error(t, "expected expression, found " + describe(t));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  FileId file_;
  PackageId package_;
  std::vector<Diagnostic> diags_;
};

std::string format_diags(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i > 0) os << '\n';
    os << diags[i].line << ':' << diags[i].column << ": " << diags[i].message;
  }
  return os.str();
}

void assign_local_ids(Node& n, NodeId& next) {
  n.id = next++;
  for (auto& c : n.children) {
    c->parent = &n;
    assign_local_ids(*c, next);
  }
}

}  // namespace

SyntaxError::SyntaxError(std::vector<Diagnostic> diags)
    : std::runtime_error(format_diags(diags)), diags_(std::move(diags)) {}

std::unique_ptr<Node> parse(std::string_view source, FileId file,
                            PackageId package) {
  Parser p(Lexer(source, 1, 1).run(), file, package);
  auto mod = p.module();
  if (!p.diagnostics().empty()) throw SyntaxError(p.diagnostics());
  NodeId next = 1;
  assign_local_ids(*mod, next);
  return mod;
}

std::unique_ptr<Node> parse_expression(std::string_view source,
                                       SourceLocation at) {
  Parser p(Lexer(source, at.line, at.column).run(), at.file, at.package);
  std::unique_ptr<Node> e;
  try {
    e = p.lone_expression();
  } catch (const ParseFailure&) {
  }
  if (!p.diagnostics().empty()) throw SyntaxError(p.diagnostics());
  relink_parents(*e);
  return e;
}

}  // namespace cardumen::mini
