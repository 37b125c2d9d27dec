#pragma once

#include <string_view>
#include <vector>

#include "cardumen/minilang/types.hpp"

namespace cardumen::mini {

enum class Builtin { Assert, Abs, IAbs, Sqrt, ToFloat, ToInt, Len };

struct BuiltinInfo {
  Builtin id;
  std::string_view name;
  Type type;
};

const std::vector<BuiltinInfo>& builtins();
/// Returns the builtin index for `name`, or -1.
int find_builtin(std::string_view name);

}  // namespace cardumen::mini
