#include "cardumen/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cardumen/minilang/project.hpp"
#include "cardumen/report.hpp"

namespace cardumen::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string bug_name(const RunConfig& config) {
  if (!config.bug_id.empty()) return config.bug_id;
  auto p = config.project_dir.lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

void write_dumps(const DumpFlags& dumps, const search::RepairEngine& engine,
                 const fs::path& dir) {
  const auto& program = engine.program();
  if (dumps.templates) {
    write_file(dir / "templates.jsonl", report::dump_templates(engine.pool(), program));
  }
  if (dumps.modpoints) {
    write_file(dir / "modpoints.jsonl",
               report::dump_modpoints(engine.modification_points(), program));
  }
  if (dumps.suspiciousness) {
    write_file(dir / "suspiciousness.jsonl",
               report::dump_suspiciousness(engine.suspicious(), program));
  }
  if (dumps.name_model) {
    write_file(dir / "name-model.txt",
               report::dump_name_model(program, 5, engine.config().name_subset_cap));
  }
}

}  // namespace

int cmd_repair(const RunConfig& config, std::ostream& out, std::ostream& err,
               std::vector<TrialOutcome>* trials) {
  if (config.trials < 1) {
    err << "error: trials must be >= 1\n";
    return kInputError;
  }
  mini::Project project;
  try {
    project = mini::load_project(config.project_dir);
  } catch (const mini::ProjectError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  std::unique_ptr<search::RepairEngine> engine;
  try {
    engine = std::make_unique<search::RepairEngine>(project.program,
                                                    project.tests, config.search);
  } catch (const faultloc::NoFailingTests& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const faultloc::EmptySuspiciousSet& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  const std::string bug = bug_name(config);
  std::vector<report::PatchRecord> records;
  report::Json trial_summaries = report::Json::array();
  std::int64_t attempts = 0;
  double elapsed = 0.0;
  for (int i = 0; i < config.trials; ++i) {
    const std::uint64_t seed = config.search.seed + static_cast<std::uint64_t>(i);
    auto result = engine->run(seed);
    attempts += result.stats.attempts;
    elapsed += result.elapsed_ms;
    std::vector<report::PatchRecord> mine;
    for (const auto& p : result.patches) {
      mine.push_back(report::make_record(p, bug, project.program));
    }
    report::Json t = report::summary(mine, result.stats.attempts, result.elapsed_ms);
    t["seed"] = seed;
    trial_summaries.push_back(std::move(t));
    out << bug << " trial " << i << " seed " << seed << ": "
        << result.patches.size() << " patch(es), " << result.stats.attempts
        << " attempts\n";
    records.insert(records.end(), mine.begin(), mine.end());
    if (trials != nullptr) trials->push_back(TrialOutcome{seed, std::move(result)});
  }

  if (!config.output_dir.empty()) {
    try {
      fs::create_directories(config.output_dir);
      write_file(config.output_dir / "patches.jsonl", report::to_jsonl(records));
      report::Json s = report::summary(records, attempts, elapsed);
      s["bug_id"] = bug;
      s["trials"] = std::move(trial_summaries);
      write_file(config.output_dir / "summary.json", s.dump(2) + "\n");
      write_dumps(config.dumps, *engine, config.output_dir);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kInputError;
    }
  }
  for (const auto& r : records) {
    out << "  " << r.file << ":" << r.line << ":" << r.column << "  "
        << r.original << "  ->  " << r.patched << "  [" << r.kind << "]\n";
  }
  return records.empty() ? kNoPatch : kPatchFound;
}

int cmd_stats(const std::vector<fs::path>& files, std::ostream& out,
              std::ostream& err) {
  std::vector<report::PatchRecord> records;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!fs::is_regular_file(f) || !in) {
      err << "error: cannot read " << f.string() << '\n';
      return kInputError;
    }
    try {
      auto rs = report::read_jsonl(in);
      records.insert(records.end(), rs.begin(), rs.end());
    } catch (const report::ReportError& e) {
      err << "error: " << f.string() << ": " << e.what() << '\n';
      return kInputError;
    }
  }
  out << report::format_stats_table(report::fold_stats(records));
  return kPatchFound;
}

int cmd_dump(const RunConfig& config, const std::string& what, std::ostream& out,
             std::ostream& err) {
  mini::Project project;
  try {
    project = mini::load_project(config.project_dir);
  } catch (const mini::ProjectError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  const auto& program = project.program;
  if (what == "templates") {
    out << report::dump_templates(
        templates::TemplatePool::build(program, config.search.targets), program);
    return kPatchFound;
  }
  if (what == "name-model") {
    out << report::dump_name_model(program, 5, config.search.name_subset_cap);
    return kPatchFound;
  }
  try {
    search::RepairEngine engine(program, project.tests, config.search);
    if (what == "modpoints") {
      out << report::dump_modpoints(engine.modification_points(), program);
    } else {
      out << report::dump_suspiciousness(engine.suspicious(), program);
    }
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kPatchFound;
}

int cmd_corpus(const RunConfig& config, const fs::path& corpus_dir,
               std::ostream& out, std::ostream& err) {
  std::vector<fs::path> bugs;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(corpus_dir, ec)) {
    if (e.is_directory()) bugs.push_back(e.path());
  }
  if (ec || bugs.empty()) {
    err << "error: no bug directories in " << corpus_dir.string() << '\n';
    return kInputError;
  }
  std::sort(bugs.begin(), bugs.end());
  int repaired = 0;
  int status = kNoPatch;
  for (const auto& b : bugs) {
    RunConfig c = config;
    c.project_dir = b;
    c.bug_id = b.filename().string();
    if (!config.output_dir.empty()) c.output_dir = config.output_dir / c.bug_id;
    int rc = cmd_repair(c, out, err);
    if (rc == kPatchFound) {
      ++repaired;
      status = kPatchFound;
    } else if (rc == kInputError) {
      status = kInputError;
    }
  }
  out << "repaired " << repaired << "/" << bugs.size() << " bugs\n";
  return status;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Template-based generate-and-validate repair for Mini programs"};
  app.require_subcommand(1);

  RunConfig config;
  std::string scope = "package";
  std::string cache = "file";
  std::size_t max_mod_points = config.search.faultloc.max_statements;

  auto add_search_options = [&](CLI::App* sub, bool project_required) {
    auto* p = sub->add_option("--project", config.project_dir,
                              "Directory of .mini sources");
    if (project_required) p->required();
    sub->add_option("--max-time", config.search.max_time_seconds,
                    "Wall-clock budget per trial in seconds")
        ->capture_default_str();
    sub->add_option("--max-attempts", config.search.max_attempts,
                    "Attempt budget per trial")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--max-mod-points", max_mod_points,
                    "Keep at most this many suspicious statements")
        ->capture_default_str();
    sub->add_option("--gamma", config.search.faultloc.gamma,
                    "Suspiciousness threshold")
        ->capture_default_str();
    sub->add_option("--scope", scope, "Template scope")
        ->capture_default_str()
        ->check(CLI::IsMember({"local", "package", "global"}));
    sub->add_option("--rho", config.search.rho, "Instances kept per template")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--lambda", config.search.lambda,
                    "Weight of the global name model")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--cache", cache, "Name-model cache granularity")
        ->capture_default_str()
        ->check(CLI::IsMember({"file", "package"}));
    sub->add_option("--seed", config.search.seed, "Seed of the first trial")
        ->capture_default_str();
    sub->add_option("--step-budget", config.search.step_budget,
                    "Interpreter steps per test")
        ->capture_default_str();
  };

  auto* repair = app.add_subcommand("repair", "Search for test-adequate patches");
  add_search_options(repair, true);
  repair->add_option("--trials", config.trials, "Number of trials")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  repair->add_option("--out", config.output_dir, "Report directory");
  repair->add_option("--bug-id", config.bug_id, "Identifier used in reports");
  repair->add_flag("--dedup,!--no-dedup", config.search.dedup,
                   "Report identical patches once");
  repair->add_flag("--dump-templates", config.dumps.templates);
  repair->add_flag("--dump-name-model", config.dumps.name_model);
  repair->add_flag("--dump-modpoints", config.dumps.modpoints);
  repair->add_flag("--dump-suspiciousness", config.dumps.suspiciousness);

  fs::path corpus_dir;
  auto* corpus = app.add_subcommand("corpus", "Repair every bug of a corpus");
  add_search_options(corpus, false);
  corpus->add_option("corpus", corpus_dir, "Directory of bug projects")->required();
  corpus->add_option("--out", config.output_dir, "Report directory");
  corpus->add_flag("--dedup,!--no-dedup", config.search.dedup);

  std::vector<fs::path> files;
  auto* stats = app.add_subcommand("stats", "Summarize patch reports");
  stats->add_option("files", files, "Patch JSONL files")->required();

  std::string what;
  auto* dump = app.add_subcommand("dump", "Print an intermediate artifact");
  add_search_options(dump, true);
  dump->add_option("what", what, "templates | name-model | modpoints | suspiciousness")
      ->required()
      ->check(CLI::IsMember({"templates", "name-model", "modpoints", "suspiciousness"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kInputError;
  }

  templates::parse_scope(scope, config.search.scope);
  config.search.cache = cache == "package" ? namemodel::CacheGranularity::Package
                                           : namemodel::CacheGranularity::File;
  config.search.faultloc.max_statements = max_mod_points;

  try {
    if (*repair) return cmd_repair(config, out, err);
    if (*corpus) return cmd_corpus(config, corpus_dir, out, err);
    if (*stats) return cmd_stats(files, out, err);
    return cmd_dump(config, what, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace cardumen::cli
