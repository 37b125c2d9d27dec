#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardumen/faultloc.hpp"
#include "cardumen/minilang/ast.hpp"
#include "cardumen/minilang/interpreter.hpp"
#include "cardumen/modpoints.hpp"
#include "cardumen/search.hpp"
#include "cardumen/templates.hpp"
#include "json.hpp"

namespace cardumen::report {

using Json = nlohmann::ordered_json;

/// One line of a patch report.
struct PatchRecord {
  std::string bug_id;
  std::string file;
  int line = 0;
  int column = 0;
  std::string original;
  std::string patched;
  std::string kind;
  std::string template_origin;  // "file:line:column"
  std::int64_t attempt = 0;
  std::uint64_t seed = 0;
  double validation_ms = 0.0;
};

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_location(const mini::Program& program,
                            const mini::SourceLocation& loc);

PatchRecord make_record(const search::Patch& patch, const std::string& bug_id,
                        const mini::Program& program);

/// Keys in fixed order. `validation_ms` is omitted when `with_timing` is false.
Json to_json(const PatchRecord& r, bool with_timing = true);
PatchRecord record_from_json(const Json& j);

/// One JSON object per line, newline-terminated.
std::string to_jsonl(std::span<const PatchRecord> records,
                     bool with_timing = true);
std::vector<PatchRecord> read_jsonl(std::istream& in);

/// #Patches, #Loc (distinct file and line) and #KindP of one bug.
struct BugStats {
  std::string bug_id;
  int patches = 0;
  int locations = 0;
  int kinds = 0;

  friend bool operator==(const BugStats&, const BugStats&) = default;
};

/// Per bug id, sorted by id.
std::vector<BugStats> fold_stats(std::span<const PatchRecord> records);
std::string format_stats_table(std::span<const BugStats> stats);

/// {patches, distinct_locations, distinct_kinds, attempts, timing: {...}}.
/// Everything outside "timing" is deterministic for a fixed configuration.
Json summary(std::span<const PatchRecord> records, std::int64_t attempts,
             double elapsed_ms);

struct Reapplication {
  mini::Program program;
  mini::TestReport report;
};

/// Locates the expression the record replaced (same file, line, column and
/// printed form), substitutes the patched expression, type-checks and runs
/// every test. Throws ReportError when the record does not match.
Reapplication reapply(const mini::Program& program,
                      std::span<const mini::TestCase> tests,
                      const PatchRecord& record,
                      const mini::RunOptions& options = {});

// Dumps of intermediate artifacts, one JSON object per line unless noted.
std::string dump_templates(const templates::TemplatePool& pool,
                           const mini::Program& program);
std::string dump_modpoints(std::span<const modpoints::ModificationPoint> mps,
                           const mini::Program& program);
std::string dump_suspiciousness(
    std::span<const faultloc::SuspiciousStatement> ranked,
    const mini::Program& program);
/// Plain-text frequency listing: for the whole program and for each file,
/// the `top_k` most frequent name sets of each size with count and pml.
std::string dump_name_model(const mini::Program& program, int top_k = 5,
                            int cap = namemodel::NameCooccurrenceTable::kDefaultCap);

}  // namespace cardumen::report
