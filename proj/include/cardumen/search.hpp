#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cardumen/faultloc.hpp"
#include "cardumen/minilang/ast.hpp"
#include "cardumen/minilang/interpreter.hpp"
#include "cardumen/modpoints.hpp"
#include "cardumen/namemodel.hpp"
#include "cardumen/random.hpp"
#include "cardumen/templates.hpp"

namespace cardumen::search {

using modpoints::ModificationPoint;
using templates::Template;

/// A binding of every placeholder of a template to a variable visible at a
/// modification point. `bindings[i]` is the variable for placeholder i.
struct TemplateInstance {
  const Template* tmpl = nullptr;
  const ModificationPoint* mp = nullptr;
  std::vector<std::string> bindings;
  double score = 0.0;

  namemodel::NameSet names() const;
};

/// The template cannot be instantiated at the point: no visible variable
/// has the type of this placeholder.
struct Sterile {
  int placeholder = 0;
};

using Instantiation = std::variant<std::vector<TemplateInstance>, Sterile>;

/// Variables visible at `mp` whose type equals the placeholder's.
std::vector<std::string> compatible_variables(const ModificationPoint& mp,
                                              const templates::Placeholder& ph);

/// Full Cartesian product of compatible variables per placeholder.
Instantiation instantiate(const ModificationPoint& mp, const Template& t);

/// Scores each instance with the name model, sorts by descending score
/// (ties: lexicographic bindings) and keeps the best `rho`. Instances of
/// placeholder-free templates score 1.
std::vector<TemplateInstance> prioritize(std::vector<TemplateInstance> instances,
                                         const namemodel::NameModel& model,
                                         std::size_t rho);

/// The template body with placeholders replaced by the bound variables.
std::unique_ptr<mini::Node> concretize(const TemplateInstance& instance);

struct Patch {
  int mp_id = 0;
  mini::NodeId node = 0;  // replaced expression in the original program
  mini::SourceLocation location;
  std::string file;
  std::string original_code;
  std::string patched_code;
  std::string template_code;
  mini::SourceLocation template_origin;
  mini::NodeKind expr_kind = mini::NodeKind::Literal;
  mini::NodeKind parent_kind = mini::NodeKind::Literal;
  std::uint64_t trial_seed = 0;
  std::int64_t attempt_index = 0;
  double validation_ms = 0.0;
};

/// "<replacement kind>|<parent kind>", e.g. "Call|LocalVarDecl".
std::string patch_kind(const Patch& patch);

/// Raised when a synthesized candidate does not type-check. Candidates are
/// type-correct by construction, so this signals a bug.
class CandidateTypeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Candidate {
  Patch patch;
  mini::Program program;  // patched and type-checked
};

/// Clones the program, replaces the point's expression by the concretized
/// template and type-checks the result.
Candidate synthesize(const mini::Program& program,
                     const TemplateInstance& instance);

struct Validation {
  int failing = 0;                 // nbFT
  bool reached_regression = false; // originally-failing tests all passed
  int tests_run = 0;
};

/// Runs the originally failing tests first; the remaining tests run only if
/// all of those pass.
Validation validate(const mini::Program& patched,
                    std::span<const mini::TestCase> originally_failing,
                    std::span<const mini::TestCase> originally_passing,
                    const mini::RunOptions& options = {});

struct SearchConfig {
  double max_time_seconds = 10800.0;
  std::int64_t max_attempts = 10000;
  std::size_t rho = 1000;
  templates::ScopeFilter scope = templates::ScopeFilter::Package;
  double lambda = 0.5;
  namemodel::CacheGranularity cache = namemodel::CacheGranularity::File;
  int name_subset_cap = namemodel::NameCooccurrenceTable::kDefaultCap;
  faultloc::FaultLocConfig faultloc;
  modpoints::TargetConfig targets;
  std::uint64_t seed = 0;
  bool dedup = true;
  std::int64_t step_budget = 1'000'000;
  bool record_trace = false;
};

/// One step of the navigation, recorded when `record_trace` is set.
struct TraceStep {
  std::int64_t attempt = 0;
  int mp = -1;
  int template_index = -1;  // index into the query result
  int instance_index = -1;  // index into the prioritized list
  std::string outcome;

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct RepairStats {
  std::int64_t attempts = 0;
  std::int64_t no_templates = 0;
  std::int64_t sterile = 0;
  std::int64_t identity = 0;
  std::int64_t typecheck_failures = 0;
  std::int64_t validations = 0;  // test runs, cached results excluded
  std::int64_t candidates = 0;   // synthesized non-identity candidates
  std::int64_t adequate = 0;     // candidates with nbFT = 0, duplicates included
  std::int64_t duplicates = 0;
};

struct RepairResult {
  std::vector<Patch> patches;
  RepairStats stats;
  std::vector<TraceStep> trace;
  double elapsed_ms = 0.0;
};

/// Fault localization, modification points, template pool and name model
/// for one buggy program, plus the navigation loop over them.
class RepairEngine {
 public:
  /// Runs the suite with coverage and prepares the search space. Throws
  /// faultloc::NoFailingTests or faultloc::EmptySuspiciousSet.
  RepairEngine(const mini::Program& program, std::vector<mini::TestCase> tests,
               SearchConfig config);

  RepairEngine(const RepairEngine&) = delete;
  RepairEngine& operator=(const RepairEngine&) = delete;

  /// The navigation loop, seeded with `seed`.
  RepairResult run(std::uint64_t seed);
  RepairResult run() { return run(config_.seed); }

  const mini::Program& program() const { return program_; }
  const SearchConfig& config() const { return config_; }
  const mini::TestReport& initial_report() const { return initial_; }
  const std::vector<mini::TestCase>& failing_tests() const { return failing_; }
  const std::vector<mini::TestCase>& passing_tests() const { return passing_; }
  const std::vector<faultloc::SuspiciousStatement>& suspicious() const {
    return suspicious_;
  }
  const std::vector<ModificationPoint>& modification_points() const {
    return mps_;
  }
  const templates::TemplatePool& pool() const { return pool_; }

  /// Name model whose cache covers the file (or package) of `at`. Memoized.
  const namemodel::NameModel& model_for(const mini::SourceLocation& at);

  /// Prioritized instances of `t` at `mp`, or nullptr when sterile. Memoized.
  const std::vector<TemplateInstance>* prioritized(const ModificationPoint& mp,
                                                   const Template& t);

  /// nbFT of a candidate, memoized on (point, patched code).
  Validation validate_candidate(const Candidate& c, bool* cached = nullptr);

 private:
  const mini::Program& program_;
  std::vector<mini::TestCase> tests_;
  SearchConfig config_;
  mini::TestReport initial_;
  std::vector<mini::TestCase> failing_;
  std::vector<mini::TestCase> passing_;
  std::vector<faultloc::SuspiciousStatement> suspicious_;
  std::vector<ModificationPoint> mps_;
  templates::TemplatePool pool_;
  std::shared_ptr<const namemodel::NameCooccurrenceTable> global_table_;
  std::map<int, namemodel::NameModel> models_;
  std::map<std::pair<int, const Template*>,
           std::unique_ptr<std::vector<TemplateInstance>>>
      instances_;
  std::map<std::pair<mini::NodeId, std::string>, Validation> validations_;
};

/// Every candidate of the search space reachable by the navigation loop:
/// for each point, each template in scope, each prioritized instance with a
/// nonzero selection weight. Used to check that a fix is reachable.
struct EnumeratedCandidate {
  int mp = 0;
  const Template* tmpl = nullptr;
  std::string patched_code;
  mini::SourceLocation location;
  int failing = 0;
};

std::vector<EnumeratedCandidate> enumerate_space(RepairEngine& engine,
                                                 bool validate_all = true);

}  // namespace cardumen::search
