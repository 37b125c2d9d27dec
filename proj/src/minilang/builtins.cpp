#include "cardumen/minilang/builtins.hpp"

namespace cardumen::mini {

const std::vector<BuiltinInfo>& builtins() {
  static const std::vector<BuiltinInfo> table = {
      {Builtin::Assert, "assert", Type::Function({Type::Bool()}, Type::Void())},
      {Builtin::Abs, "abs", Type::Function({Type::Float()}, Type::Float())},
      {Builtin::IAbs, "iabs", Type::Function({Type::Int()}, Type::Int())},
      {Builtin::Sqrt, "sqrt", Type::Function({Type::Float()}, Type::Float())},
      {Builtin::ToFloat, "toFloat",
       Type::Function({Type::Int()}, Type::Float())},
      {Builtin::ToInt, "toInt", Type::Function({Type::Float()}, Type::Int())},
      {Builtin::Len, "len", Type::Function({Type::String()}, Type::Int())},
  };
  return table;
}

int find_builtin(std::string_view name) {
  const auto& table = builtins();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace cardumen::mini
