#include "cardumen/minilang/project.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cardumen/minilang/parser.hpp"
#include "cardumen/minilang/typecheck.hpp"

namespace cardumen::mini {

std::string package_of_path(const std::string& path) {
  auto slash = path.rfind('/');
  return slash == std::string::npos ? "." : path.substr(0, slash);
}

std::vector<SourceText> read_sources(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ProjectError(dir.string() + ": not a directory");
  }
  std::vector<SourceText> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".mini") {
      continue;
    }
    std::ifstream in(entry.path(), std::ios::binary);
    if (!in) throw ProjectError(entry.path().string() + ": cannot read");
    std::ostringstream ss;
    ss << in.rdbuf();
    out.push_back(SourceText{fs::relative(entry.path(), dir).generic_string(),
                             ss.str()});
  }
  if (out.empty()) {
    throw ProjectError(dir.string() + ": no .mini source files found");
  }
  return out;
}

Project load_sources(std::vector<SourceText> sources) {
  std::sort(sources.begin(), sources.end(),
            [](const SourceText& a, const SourceText& b) { return a.path < b.path; });
  Project project;
  std::vector<std::string> errors;
  for (const auto& src : sources) {
    try {
      project.program.add_file(src.path, package_of_path(src.path),
                               parse(src.text));
    } catch (const SyntaxError& e) {
      for (const auto& d : e.diagnostics()) {
        errors.push_back(src.path + ":" + std::to_string(d.line) + ":" +
                         std::to_string(d.column) + ": syntax error: " +
                         d.message);
      }
    }
  }
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
    throw ProjectError(msg);
  }
  try {
    typecheck(project.program);
  } catch (const TypeError& e) {
    std::string msg;
    for (const auto& is : e.issues()) {
      if (!msg.empty()) msg += "\n";
      msg += project.program.file_path(is.loc.file) + ":" +
             std::to_string(is.loc.line) + ":" + std::to_string(is.loc.column) +
             ": type error: " + is.message;
      if (!is.expected.empty()) {
        msg += " (expected " + is.expected + ", found " + is.found + ")";
      }
    }
    throw ProjectError(msg);
  }
  project.tests = discover_tests(project.program);
  return project;
}

Project load_project(const std::filesystem::path& dir) {
  return load_sources(read_sources(dir));
}

}  // namespace cardumen::mini
