#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cardumen/minilang/ast.hpp"
#include "cardumen/minilang/printer.hpp"
#include "cardumen/minilang/project.hpp"

namespace cardumen::testing {

inline mini::Project load(std::vector<mini::SourceText> sources) {
  return mini::load_sources(std::move(sources));
}

inline mini::Project load_one(const std::string& text,
                              const std::string& path = "main.mini") {
  return mini::load_sources({{path, text}});
}

/// First node (pre-order over all files) whose printed form is `code`.
inline const mini::Node* find_expr(const mini::Program& program,
                                   const std::string& code) {
  const mini::Node* found = nullptr;
  auto visit = [&](auto&& self, const mini::Node& n) -> void {
    if (found != nullptr) return;
    if (mini::is_expression(n.kind) && mini::print_expression(n) == code) {
      found = &n;
      return;
    }
    for (const auto& c : n.children) self(self, *c);
  };
  for (const auto& f : program.files()) visit(visit, *f.module);
  return found;
}

/// First statement whose source rendering starts with `prefix`.
inline const mini::Node* find_stmt(const mini::Program& program,
                                   const std::string& prefix) {
  for (const mini::Node* s : program.statements()) {
    const std::string text = mini::print_source(*s);
    const auto start = text.find_first_not_of(" \t\n");
    if (start != std::string::npos && text.compare(start, prefix.size(), prefix) == 0) {
      return s;
    }
  }
  return nullptr;
}

}  // namespace cardumen::testing
