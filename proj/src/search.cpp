#include "cardumen/search.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <set>

#include "cardumen/minilang/printer.hpp"
#include "cardumen/minilang/typecheck.hpp"

namespace cardumen::search {

using mini::Node;
using mini::NodeKind;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void bind_placeholders(Node& n, const std::vector<std::string>& bindings,
                       const mini::SourceLocation& at) {
  n.id = 0;
  n.loc = at;
  n.end_line = at.line;
  n.end_column = at.column;
  if (n.kind == NodeKind::VarRead &&
      n.binding.kind == mini::RefKind::Placeholder) {
    n.text = bindings.at(static_cast<std::size_t>(n.binding.slot));
    n.binding = mini::Binding{};
  }
  for (auto& c : n.children) bind_placeholders(*c, bindings, at);
}

}  // namespace

namemodel::NameSet TemplateInstance::names() const {
  return namemodel::make_name_set(bindings);
}

std::vector<std::string> compatible_variables(const ModificationPoint& mp,
                                              const templates::Placeholder& ph) {
  std::vector<std::string> out;
  for (const auto& v : mp.scope_vars) {
    if (v.type == ph.type) out.push_back(v.name);
  }
  return out;
}

Instantiation instantiate(const ModificationPoint& mp, const Template& t) {
  std::vector<std::vector<std::string>> choices;
  choices.reserve(t.placeholders.size());
  for (const auto& ph : t.placeholders) {
    auto cv = compatible_variables(mp, ph);
    if (cv.empty()) return Sterile{ph.index};
    choices.push_back(std::move(cv));
  }
  std::vector<TemplateInstance> out;
  std::vector<std::size_t> odometer(choices.size(), 0);
  while (true) {
    TemplateInstance inst;
    inst.tmpl = &t;
    inst.mp = &mp;
    inst.bindings.reserve(choices.size());
    for (std::size_t i = 0; i < choices.size(); ++i) {
      inst.bindings.push_back(choices[i][odometer[i]]);
    }
    out.push_back(std::move(inst));
    // advance the rightmost digit first
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++odometer[i] < choices[i].size()) break;
      odometer[i] = 0;
      if (i == 0) return out;
    }
    if (choices.empty()) return out;
  }
}

std::vector<TemplateInstance> prioritize(std::vector<TemplateInstance> instances,
                                         const namemodel::NameModel& model,
                                         std::size_t rho) {
  for (auto& inst : instances) {
    auto names = inst.names();
    inst.score = names.empty() ? 1.0 : model.probability(names);
  }
  std::stable_sort(instances.begin(), instances.end(),
                   [](const TemplateInstance& a, const TemplateInstance& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.bindings < b.bindings;
                   });
  if (instances.size() > rho) instances.resize(rho);
  return instances;
}

std::unique_ptr<Node> concretize(const TemplateInstance& instance) {
  auto body = instance.tmpl->body->clone();
  body->parent = nullptr;
  bind_placeholders(*body, instance.bindings, instance.mp->location);
  return body;
}

std::string patch_kind(const Patch& patch) {
  return std::string(mini::kind_name(patch.expr_kind)) + "|" +
         std::string(mini::kind_name(patch.parent_kind));
}

Candidate synthesize(const mini::Program& program,
                     const TemplateInstance& instance) {
  const ModificationPoint& mp = *instance.mp;
  const Node* original = program.find(mp.node);
  if (original == nullptr || original->parent == nullptr) {
    throw std::invalid_argument("synthesize: modification point not in program");
  }
  auto replacement = concretize(instance);
  Patch p;
  p.mp_id = mp.id;
  p.node = mp.node;
  p.location = mp.location;
  p.file = program.file_path(mp.location.file);
  p.original_code = mini::print_expression(*original);
  p.patched_code = mini::print_expression(*replacement);
  p.template_code = instance.tmpl->code;
  p.template_origin = instance.tmpl->origin;
  p.expr_kind = replacement->kind;
  p.parent_kind = original->parent->kind;

  mini::Program patched = program.clone();
  patched.replace_expression(mp.node, std::move(replacement));
  try {
    mini::typecheck(patched);
  } catch (const mini::TypeError& e) {
    throw CandidateTypeError("candidate '" + p.patched_code +
                             "' does not type-check: " + e.what());
  }
  return Candidate{std::move(p), std::move(patched)};
}

Validation validate(const mini::Program& patched,
                    std::span<const mini::TestCase> originally_failing,
                    std::span<const mini::TestCase> originally_passing,
                    const mini::RunOptions& options) {
  Validation v;
  for (const auto& t : originally_failing) {
    ++v.tests_run;
    if (!mini::run_test(patched, t, options).passed()) ++v.failing;
  }
  if (v.failing > 0) return v;
  v.reached_regression = true;
  for (const auto& t : originally_passing) {
    ++v.tests_run;
    if (!mini::run_test(patched, t, options).passed()) ++v.failing;
  }
  return v;
}

RepairEngine::RepairEngine(const mini::Program& program,
                           std::vector<mini::TestCase> tests,
                           SearchConfig config)
    : program_(program), tests_(std::move(tests)), config_(std::move(config)) {
  if (config_.rho < 1) throw std::invalid_argument("rho must be >= 1");
  mini::RunOptions opts;
  opts.record_coverage = true;
  opts.step_budget = config_.step_budget;
  initial_ = mini::run_tests(program_, tests_, opts);
  for (std::size_t i = 0; i < tests_.size(); ++i) {
    (initial_.results[i].passed() ? passing_ : failing_).push_back(tests_[i]);
  }
  if (failing_.empty()) throw faultloc::NoFailingTests();
  auto spectra = faultloc::collect_spectra(initial_, program_);
  suspicious_ = faultloc::rank_statements(spectra, config_.faultloc);
  if (suspicious_.empty()) throw faultloc::EmptySuspiciousSet();
  mps_ = modpoints::extract_modification_points(suspicious_, program_,
                                                config_.targets);
  pool_ = templates::TemplatePool::build(program_, config_.targets);
  const auto& all = program_.statements();
  global_table_ = std::make_shared<const namemodel::NameCooccurrenceTable>(
      namemodel::build_table(
          std::span<const Node* const>(all.data(), all.size()),
          config_.name_subset_cap));
}

const namemodel::NameModel& RepairEngine::model_for(
    const mini::SourceLocation& at) {
  int key = config_.cache == namemodel::CacheGranularity::File ? at.file
                                                               : at.package;
  auto it = models_.find(key);
  if (it == models_.end()) {
    auto stmts = namemodel::select_statements(program_, at, config_.cache);
    auto cache = std::make_shared<const namemodel::NameCooccurrenceTable>(
        namemodel::build_table(stmts, config_.name_subset_cap));
    it = models_
             .emplace(key, namemodel::NameModel(global_table_, std::move(cache),
                                                config_.lambda))
             .first;
  }
  return it->second;
}

const std::vector<TemplateInstance>* RepairEngine::prioritized(
    const ModificationPoint& mp, const Template& t) {
  auto key = std::make_pair(mp.id, &t);
  auto it = instances_.find(key);
  if (it == instances_.end()) {
    std::unique_ptr<std::vector<TemplateInstance>> list;
    auto inst = instantiate(mp, t);
    if (auto* v = std::get_if<std::vector<TemplateInstance>>(&inst)) {
      list = std::make_unique<std::vector<TemplateInstance>>(
          prioritize(std::move(*v), model_for(mp.location), config_.rho));
    }
    it = instances_.emplace(key, std::move(list)).first;
  }
  return it->second.get();
}

Validation RepairEngine::validate_candidate(const Candidate& c, bool* cached) {
  auto key = std::make_pair(c.patch.node, c.patch.patched_code);
  auto it = validations_.find(key);
  if (cached != nullptr) *cached = it != validations_.end();
  if (it != validations_.end()) return it->second;
  mini::RunOptions opts;
  opts.step_budget = config_.step_budget;
  Validation v = validate(c.program, failing_, passing_, opts);
  validations_.emplace(std::move(key), v);
  return v;
}

namespace {

std::vector<double> instance_weights(const std::vector<TemplateInstance>& list) {
  std::vector<double> w;
  w.reserve(list.size());
  bool any = false;
  for (const auto& i : list) {
    w.push_back(i.score);
    any = any || i.score > 0.0;
  }
  if (!any) std::fill(w.begin(), w.end(), 1.0);
  return w;
}

}  // namespace

RepairResult RepairEngine::run(std::uint64_t seed) {
  RepairResult result;
  const auto start = Clock::now();
  if (mps_.empty()) return result;

  Rng rng(seed);
  std::vector<double> mp_weights;
  mp_weights.reserve(mps_.size());
  for (const auto& mp : mps_) mp_weights.push_back(mp.weight);
  std::set<std::pair<mini::NodeId, std::string>> emitted;
  auto& stats = result.stats;

  for (std::int64_t attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (ms_since(start) > config_.max_time_seconds * 1000.0) break;
    ++stats.attempts;
    TraceStep step;
    step.attempt = attempt;
    auto record = [&](const char* outcome) {
      if (config_.record_trace) {
        step.outcome = outcome;
        result.trace.push_back(step);
      }
    };

    const std::size_t mi = weighted_index(mp_weights, rng);
    const ModificationPoint& mp = mps_[mi];
    step.mp = static_cast<int>(mi);

    auto candidates = pool_.query(mp, config_.scope);
    if (candidates.empty()) {
      ++stats.no_templates;
      record("no_templates");
      continue;
    }
    auto tw = templates::template_weights(candidates);
    const std::size_t ti = weighted_index(tw, rng);
    const Template& t = *candidates[ti];
    step.template_index = static_cast<int>(ti);

    const auto* list = prioritized(mp, t);
    if (list == nullptr) {
      ++stats.sterile;
      record("sterile");
      continue;
    }
    auto iw = instance_weights(*list);
    const std::size_t ii = weighted_index(iw, rng);
    step.instance_index = static_cast<int>(ii);
    const TemplateInstance& inst = (*list)[ii];

    auto body = concretize(inst);
    if (mini::print_expression(*body) == mini::print_expression(*mp.expr)) {
      ++stats.identity;
      record("identity");
      continue;
    }

    std::optional<Candidate> cand;
    try {
      cand.emplace(synthesize(program_, inst));
    } catch (const CandidateTypeError&) {
      ++stats.typecheck_failures;
      record("typecheck_failure");
      continue;
    }
    ++stats.candidates;
    cand->patch.trial_seed = seed;
    cand->patch.attempt_index = attempt;

    bool cached = false;
    const auto vstart = Clock::now();
    Validation v = validate_candidate(*cand, &cached);
    cand->patch.validation_ms = ms_since(vstart);
    if (!cached) ++stats.validations;
    if (v.failing > 0) {
      record("rejected");
      continue;
    }
    ++stats.adequate;
    if (config_.dedup) {
      auto key = std::make_pair(cand->patch.node, cand->patch.patched_code);
      if (!emitted.insert(std::move(key)).second) {
        ++stats.duplicates;
        record("duplicate");
        continue;
      }
    }
    record("adequate");
    result.patches.push_back(std::move(cand->patch));
  }
  result.elapsed_ms = ms_since(start);
  return result;
}

std::vector<EnumeratedCandidate> enumerate_space(RepairEngine& engine,
                                                 bool validate_all) {
  std::vector<EnumeratedCandidate> out;
  for (const auto& mp : engine.modification_points()) {
    if (mp.weight <= 0.0) continue;
    const std::string original = mini::print_expression(*mp.expr);
    for (const Template* t : engine.pool().query(mp, engine.config().scope)) {
      if (t->support <= 0) continue;
      const auto* list = engine.prioritized(mp, *t);
      if (list == nullptr) continue;
      auto w = instance_weights(*list);
      for (std::size_t i = 0; i < list->size(); ++i) {
        if (w[i] <= 0.0) continue;
        const auto& inst = (*list)[i];
        EnumeratedCandidate ec;
        ec.mp = mp.id;
        ec.tmpl = t;
        ec.location = mp.location;
        ec.patched_code = mini::print_expression(*concretize(inst));
        if (ec.patched_code == original) continue;
        ec.failing = -1;
        if (validate_all) {
          ec.failing = engine.validate_candidate(synthesize(engine.program(), inst))
                           .failing;
        }
        out.push_back(std::move(ec));
      }
    }
  }
  return out;
}

}  // namespace cardumen::search
