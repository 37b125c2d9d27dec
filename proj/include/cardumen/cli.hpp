#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cardumen/search.hpp"

namespace cardumen::cli {

enum ExitCode : int { kPatchFound = 0, kInputError = 1, kNoPatch = 2 };

struct DumpFlags {
  bool templates = false;
  bool name_model = false;
  bool modpoints = false;
  bool suspiciousness = false;

  bool any() const { return templates || name_model || modpoints || suspiciousness; }
};

struct RunConfig {
  std::filesystem::path project_dir;
  std::filesystem::path output_dir;
  std::string bug_id;  // defaults to the project directory name
  search::SearchConfig search;
  int trials = 1;
  DumpFlags dumps;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  search::RepairResult result;
};

/// Loads the project, runs one repair trial per seed (seed + index) and
/// writes patches.jsonl, summary.json and the requested dumps into the
/// output directory (when one is set). Returns the exit status.
int cmd_repair(const RunConfig& config, std::ostream& out, std::ostream& err,
               std::vector<TrialOutcome>* trials = nullptr);

/// Prints the per-bug #Patches / #Loc / #KindP table of the given reports.
int cmd_stats(const std::vector<std::filesystem::path>& files, std::ostream& out,
              std::ostream& err);

/// Writes the named artifact ("templates", "name-model", "modpoints",
/// "suspiciousness") of a project to `out`.
int cmd_dump(const RunConfig& config, const std::string& what, std::ostream& out,
             std::ostream& err);

/// Runs cmd_repair for every subdirectory of `corpus_dir`.
int cmd_corpus(const RunConfig& config, const std::filesystem::path& corpus_dir,
               std::ostream& out, std::ostream& err);

/// Parses a command line (args[0] is the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace cardumen::cli
