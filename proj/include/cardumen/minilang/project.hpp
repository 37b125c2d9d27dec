#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cardumen/minilang/ast.hpp"
#include "cardumen/minilang/interpreter.hpp"

namespace cardumen::mini {

/// Input problem (unreadable directory, syntax or type error) reported with
/// file and line.
class ProjectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Project {
  Program program;
  std::vector<TestCase> tests;
};

struct SourceText {
  std::string path;  // relative, '/'-separated; its directory is the package
  std::string text;
};

/// Parses and type-checks the given sources. Files are added in path order.
Project load_sources(std::vector<SourceText> sources);

/// Loads every `.mini` file below `dir`.
Project load_project(const std::filesystem::path& dir);

std::vector<SourceText> read_sources(const std::filesystem::path& dir);

/// Directory part of a relative path, "." for files at the root.
std::string package_of_path(const std::string& path);

}  // namespace cardumen::mini
