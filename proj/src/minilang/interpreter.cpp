#include "cardumen/minilang/interpreter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "cardumen/minilang/builtins.hpp"

namespace cardumen::mini {

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::AssertionFailed: return "assertion-failed";
    case Outcome::RuntimeError: return "runtime-error";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

namespace {

struct FunRef {
  RefKind kind = RefKind::None;
  int index = -1;
  friend bool operator==(const FunRef&, const FunRef&) = default;
};

using Value =
    std::variant<std::monostate, std::int64_t, double, bool, std::string, FunRef>;

struct AssertionFailure {
  std::string message;
};
struct RuntimeFault {
  std::string message;
};
struct BudgetExhausted {};

struct Flow {
  bool returned = false;
  Value value;
};

class Interpreter {
 public:
  Interpreter(const Program& p, const RunOptions& opts)
      : program_(p), opts_(opts) {
    if (opts_.record_coverage) {
      seen_.assign(static_cast<std::size_t>(p.next_id()), 0);
    }
  }

  void init_globals() {
    globals_.assign(program_.files().size(), {});
    for (std::size_t f = 0; f < program_.files().size(); ++f) {
      globals_[f].assign(program_.globals(static_cast<FileId>(f)).size(), {});
    }
    for (std::size_t f = 0; f < program_.files().size(); ++f) {
      file_ = static_cast<FileId>(f);
      for (const Node* g : program_.globals(file_)) {
        globals_[f][static_cast<std::size_t>(g->slot)] = eval(*g->child(0));
      }
    }
  }

  Value call_function(const Node& fn, std::vector<Value> args) {
    if (++depth_ > opts_.max_call_depth) {
      throw RuntimeFault{"call depth limit exceeded in '" + fn.text + "'"};
    }
    std::vector<Value> frame(static_cast<std::size_t>(fn.frame_size));
    for (std::size_t i = 0; i < args.size(); ++i) frame[i] = std::move(args[i]);
    std::swap(frame, frame_);
    FileId saved_file = file_;
    bool saved_record = record_;
    file_ = fn.loc.file;
    record_ = opts_.record_coverage && !is_test_function(fn);
    Flow flow = exec(*fn.children.back());
    std::swap(frame, frame_);
    file_ = saved_file;
    record_ = saved_record;
    --depth_;
    if (!flow.returned && fn.type.result().base() != BaseType::Void) {
      throw RuntimeFault{"function '" + fn.text + "' ended without return"};
    }
    return flow.value;
  }

  std::vector<NodeId> coverage() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < seen_.size(); ++i) {
      if (seen_[i] != 0) out.push_back(static_cast<NodeId>(i));
    }
    return out;
  }

 private:
  void step() {
    if (++steps_ > opts_.step_budget) throw BudgetExhausted{};
  }

  Flow exec(const Node& s) {
    step();
    if (record_ && is_statement(s.kind)) {
      seen_[static_cast<std::size_t>(s.id)] = 1;
    }
    switch (s.kind) {
      case NodeKind::Block:
        for (const auto& c : s.children) {
          Flow f = exec(*c);
          if (f.returned) return f;
        }
        return {};
      case NodeKind::LocalVarDecl:
        frame_[static_cast<std::size_t>(s.slot)] = eval(*s.child(0));
        return {};
      case NodeKind::Assignment:
        store(s.binding, eval(*s.child(0)));
        return {};
      case NodeKind::IfStmt:
        if (as_bool(eval(*s.child(0)))) return exec(*s.child(1));
        if (s.size() > 2) return exec(*s.child(2));
        return {};
      case NodeKind::WhileStmt:
        while (as_bool(eval(*s.child(0)))) {
          Flow f = exec(*s.child(1));
          if (f.returned) return f;
          step();
        }
        return {};
      case NodeKind::ReturnStmt:
        return Flow{true, eval(*s.child(0))};
      case NodeKind::ExprStmt:
        eval(*s.child(0));
        return {};
      default:
        throw RuntimeFault{"cannot execute " + std::string(kind_name(s.kind))};
    }
  }

  void store(const Binding& b, Value v) {
    if (b.kind == RefKind::Local) {
      frame_[static_cast<std::size_t>(b.slot)] = std::move(v);
    } else if (b.kind == RefKind::Global) {
      globals_[static_cast<std::size_t>(file_)][static_cast<std::size_t>(b.slot)] =
          std::move(v);
    } else {
      throw RuntimeFault{"assignment to a non-variable"};
    }
  }

  Value load(const Node& e) {
    switch (e.binding.kind) {
      case RefKind::Local: {
        const Value& v = frame_[static_cast<std::size_t>(e.binding.slot)];
        if (std::holds_alternative<std::monostate>(v)) {
          throw RuntimeFault{"read of uninitialized variable '" + e.text + "'"};
        }
        return v;
      }
      case RefKind::Global: {
        const Value& v = globals_[static_cast<std::size_t>(file_)]
                                 [static_cast<std::size_t>(e.binding.slot)];
        if (std::holds_alternative<std::monostate>(v)) {
          throw RuntimeFault{"read of uninitialized global '" + e.text + "'"};
        }
        return v;
      }
      case RefKind::Function:
      case RefKind::Builtin:
        return FunRef{e.binding.kind, e.binding.slot};
      default:
        throw RuntimeFault{"unresolved name '" + e.text + "'"};
    }
  }

  static bool as_bool(const Value& v) { return std::get<bool>(v); }
  static std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v); }
  static double as_float(const Value& v) { return std::get<double>(v); }

  Value literal(const Node& e) {
    switch (e.type.base()) {
      case BaseType::Int: return static_cast<std::int64_t>(std::stoll(e.text));
      case BaseType::Float: return std::stod(e.text);
      case BaseType::Bool: return e.text == "true";
      case BaseType::String: return e.text;
      default: throw RuntimeFault{"bad literal"};
    }
  }

  Value eval(const Node& e) {
    step();
    switch (e.kind) {
      case NodeKind::Literal:
        return literal(e);
      case NodeKind::VarRead:
        return load(e);
      case NodeKind::UnaryOp: {
        Value v = eval(*e.child(0));
        if (e.text == "!") return !as_bool(v);
        if (std::holds_alternative<double>(v)) return -as_float(v);
        return static_cast<std::int64_t>(
            0ULL - static_cast<std::uint64_t>(as_int(v)));
      }
      case NodeKind::BinaryOp:
        return binary(e);
      case NodeKind::Conditional:
        return as_bool(eval(*e.child(0))) ? eval(*e.child(1)) : eval(*e.child(2));
      case NodeKind::Call:
        return call(e);
      default:
        throw RuntimeFault{"cannot evaluate " + std::string(kind_name(e.kind))};
    }
  }

  Value call(const Node& e) {
    Value callee = eval(*e.child(0));
    std::vector<Value> args;
    args.reserve(e.size() - 1);
    for (std::size_t i = 1; i < e.size(); ++i) args.push_back(eval(*e.child(i)));
    const auto& ref = std::get<FunRef>(callee);
    if (ref.kind == RefKind::Function) {
      const Node& fn = *program_.functions()[static_cast<std::size_t>(ref.index)];
      return call_function(fn, std::move(args));
    }
    const auto& info = builtins()[static_cast<std::size_t>(ref.index)];
    switch (info.id) {
      case Builtin::Assert:
        if (!as_bool(args[0])) {
          throw AssertionFailure{"assertion failed at line " +
                                 std::to_string(e.loc.line)};
        }
        return std::monostate{};
      case Builtin::Abs: return std::fabs(as_float(args[0]));
      case Builtin::IAbs: {
        std::int64_t v = as_int(args[0]);
        if (v == std::numeric_limits<std::int64_t>::min()) return v;
        return v < 0 ? -v : v;
      }
      case Builtin::Sqrt: return std::sqrt(as_float(args[0]));
      case Builtin::ToFloat: return static_cast<double>(as_int(args[0]));
      case Builtin::ToInt: {
        double d = as_float(args[0]);
        if (!std::isfinite(d) || d >= 9.2e18 || d <= -9.2e18) {
          throw RuntimeFault{"toInt of out-of-range value"};
        }
        return static_cast<std::int64_t>(d);
      }
      case Builtin::Len:
        return static_cast<std::int64_t>(std::get<std::string>(args[0]).size());
    }
    throw RuntimeFault{"unknown builtin"};
  }

  Value binary(const Node& e) {
    const std::string& op = e.text;
    if (op == "&&") {
      return as_bool(eval(*e.child(0))) && as_bool(eval(*e.child(1)));
    }
    if (op == "||") {
      return as_bool(eval(*e.child(0))) || as_bool(eval(*e.child(1)));
    }
    Value a = eval(*e.child(0));
    Value b = eval(*e.child(1));
    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (std::holds_alternative<std::string>(a)) {
      return std::get<std::string>(a) + std::get<std::string>(b);
    }
    if (std::holds_alternative<double>(a)) {
      double x = as_float(a), y = as_float(b);
      if (op == "+") return x + y;
      if (op == "-") return x - y;
      if (op == "*") return x * y;
      if (op == "/") return x / y;
      if (op == "<") return x < y;
      if (op == "<=") return x <= y;
      if (op == ">") return x > y;
      if (op == ">=") return x >= y;
    } else {
      std::int64_t x = as_int(a), y = as_int(b);
      auto ux = static_cast<std::uint64_t>(x), uy = static_cast<std::uint64_t>(y);
      if (op == "+") return static_cast<std::int64_t>(ux + uy);
      if (op == "-") return static_cast<std::int64_t>(ux - uy);
      if (op == "*") return static_cast<std::int64_t>(ux * uy);
      if (op == "/" || op == "%") {
        if (y == 0) throw RuntimeFault{"division by zero"};
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) {
          throw RuntimeFault{"integer overflow in division"};
        }
        return op == "/" ? x / y : x % y;
      }
      if (op == "<") return x < y;
      if (op == "<=") return x <= y;
      if (op == ">") return x > y;
      if (op == ">=") return x >= y;
    }
    throw RuntimeFault{"unsupported operator " + op};
  }

  const Program& program_;
  RunOptions opts_;
  std::vector<std::vector<Value>> globals_;
  std::vector<Value> frame_;
  std::vector<char> seen_;
  FileId file_ = 0;
  bool record_ = false;
  int depth_ = 0;
  std::int64_t steps_ = 0;
};

}  // namespace

std::vector<TestCase> discover_tests(const Program& program) {
  std::vector<TestCase> out;
  for (const Node* fn : program.functions()) {
    if (is_test_function(*fn)) {
      out.push_back(TestCase{fn->text, fn->loc.file, fn->loc.package});
    }
  }
  return out;
}

TestResult run_test(const Program& program, const TestCase& test,
                    const RunOptions& options) {
  TestResult r;
  r.name = test.name;
  const Node* fn = program.function(test.name);
  if (fn == nullptr) {
    r.outcome = Outcome::RuntimeError;
    r.message = "no such test function";
    return r;
  }
  Interpreter interp(program, options);
  try {
    interp.init_globals();
    interp.call_function(*fn, {});
  } catch (const AssertionFailure& e) {
    r.outcome = Outcome::AssertionFailed;
    r.message = e.message;
  } catch (const RuntimeFault& e) {
    r.outcome = Outcome::RuntimeError;
    r.message = e.message;
  } catch (const BudgetExhausted&) {
    r.outcome = Outcome::Timeout;
    r.message = "step budget exhausted";
  } catch (const std::bad_variant_access&) {
    r.outcome = Outcome::RuntimeError;
    r.message = "ill-typed value";
  }
  if (options.record_coverage) r.coverage = interp.coverage();
  return r;
}

TestReport run_tests(const Program& program, std::span<const TestCase> tests,
                     const RunOptions& options) {
  TestReport report;
  report.results.reserve(tests.size());
  for (const auto& t : tests) {
    report.results.push_back(run_test(program, t, options));
    if (report.results.back().passed()) {
      ++report.passing;
    } else {
      ++report.failing;
    }
  }
  return report;
}

}  // namespace cardumen::mini
