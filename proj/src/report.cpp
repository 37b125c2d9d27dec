#include "cardumen/report.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "cardumen/minilang/parser.hpp"
#include "cardumen/minilang/printer.hpp"
#include "cardumen/minilang/typecheck.hpp"
#include "cardumen/namemodel.hpp"

namespace cardumen::report {

std::string format_location(const mini::Program& program,
                            const mini::SourceLocation& loc) {
  return program.file_path(loc.file) + ":" + std::to_string(loc.line) + ":" +
         std::to_string(loc.column);
}

PatchRecord make_record(const search::Patch& patch, const std::string& bug_id,
                        const mini::Program& program) {
  PatchRecord r;
  r.bug_id = bug_id;
  r.file = patch.file;
  r.line = patch.location.line;
  r.column = patch.location.column;
  r.original = patch.original_code;
  r.patched = patch.patched_code;
  r.kind = search::patch_kind(patch);
  r.template_origin = format_location(program, patch.template_origin);
  r.attempt = patch.attempt_index;
  r.seed = patch.trial_seed;
  r.validation_ms = patch.validation_ms;
  return r;
}

Json to_json(const PatchRecord& r, bool with_timing) {
  Json j;
  j["bug_id"] = r.bug_id;
  j["file"] = r.file;
  j["line"] = r.line;
  j["column"] = r.column;
  j["original"] = r.original;
  j["patched"] = r.patched;
  j["kind"] = r.kind;
  j["template_origin"] = r.template_origin;
  j["attempt"] = r.attempt;
  j["seed"] = r.seed;
  if (with_timing) j["validation_ms"] = r.validation_ms;
  return j;
}

PatchRecord record_from_json(const Json& j) {
  try {
    PatchRecord r;
    r.bug_id = j.at("bug_id").get<std::string>();
    r.file = j.at("file").get<std::string>();
    r.line = j.at("line").get<int>();
    r.column = j.value("column", 0);
    r.original = j.at("original").get<std::string>();
    r.patched = j.at("patched").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.template_origin = j.value("template_origin", std::string());
    r.attempt = j.value("attempt", std::int64_t{0});
    r.seed = j.value("seed", std::uint64_t{0});
    r.validation_ms = j.value("validation_ms", 0.0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed patch record: ") + e.what());
  }
}

std::string to_jsonl(std::span<const PatchRecord> records, bool with_timing) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r, with_timing).dump();
    out += '\n';
  }
  return out;
}

std::vector<PatchRecord> read_jsonl(std::istream& in) {
  std::vector<PatchRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ReportError("line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

std::vector<BugStats> fold_stats(std::span<const PatchRecord> records) {
  struct Acc {
    std::set<std::pair<std::string, std::string>> patches;
    std::set<std::pair<std::string, int>> locations;
    std::set<std::string> kinds;
  };
  std::map<std::string, Acc> by_bug;
  for (const auto& r : records) {
    Acc& a = by_bug[r.bug_id];
    std::string site = r.file + ":" + std::to_string(r.line) + ":" +
                       std::to_string(r.column) + ":" + r.original;
    a.patches.emplace(std::move(site), r.patched);
    a.locations.emplace(r.file, r.line);
    a.kinds.insert(r.kind);
  }
  std::vector<BugStats> out;
  for (const auto& [id, a] : by_bug) {
    out.push_back(BugStats{id, static_cast<int>(a.patches.size()),
                           static_cast<int>(a.locations.size()),
                           static_cast<int>(a.kinds.size())});
  }
  return out;
}

std::string format_stats_table(std::span<const BugStats> stats) {
  std::size_t width = 6;
  for (const auto& s : stats) width = std::max(width, s.bug_id.size());
  std::ostringstream os;
  auto row = [&](const std::string& a, const std::string& b,
                 const std::string& c, const std::string& d) {
    os << a << std::string(width - a.size() + 2, ' ');
    os << std::string(b.size() < 8 ? 8 - b.size() : 0, ' ') << b;
    os << std::string(c.size() < 6 ? 6 - c.size() : 0, ' ') << c;
    os << std::string(d.size() < 7 ? 7 - d.size() : 0, ' ') << d << '\n';
  };
  row("bug", "#Patches", "#Loc", "#KindP");
  for (const auto& s : stats) {
    row(s.bug_id, std::to_string(s.patches), std::to_string(s.locations),
        std::to_string(s.kinds));
  }
  return os.str();
}

Json summary(std::span<const PatchRecord> records, std::int64_t attempts,
             double elapsed_ms) {
  std::set<std::pair<std::string, int>> locations;
  std::set<std::string> kinds;
  for (const auto& r : records) {
    locations.emplace(r.file, r.line);
    kinds.insert(r.kind);
  }
  Json j;
  j["patches"] = records.size();
  j["distinct_locations"] = locations.size();
  j["distinct_kinds"] = kinds.size();
  j["attempts"] = attempts;
  j["timing"] = Json{{"elapsed_ms", elapsed_ms}};
  return j;
}

namespace {

const mini::Node* find_site(const mini::Node& n, int line, int column,
                            const std::string& code) {
  if (mini::is_expression(n.kind) && n.loc.line == line &&
      n.loc.column == column && n.parent != nullptr &&
      mini::print_expression(n) == code) {
    return &n;
  }
  for (const auto& c : n.children) {
    if (const auto* f = find_site(*c, line, column, code)) return f;
  }
  return nullptr;
}

}  // namespace

Reapplication reapply(const mini::Program& program,
                      std::span<const mini::TestCase> tests,
                      const PatchRecord& record,
                      const mini::RunOptions& options) {
  const mini::Node* site = nullptr;
  for (const auto& f : program.files()) {
    if (f.path == record.file) {
      site = find_site(*f.module, record.line, record.column, record.original);
      break;
    }
  }
  if (site == nullptr) {
    throw ReportError("no expression '" + record.original + "' at " +
                      record.file + ":" + std::to_string(record.line) + ":" +
                      std::to_string(record.column));
  }
  std::unique_ptr<mini::Node> replacement;
  try {
    replacement = mini::parse_expression(record.patched, site->loc);
  } catch (const mini::SyntaxError& e) {
    throw ReportError("patched code does not parse: " + std::string(e.what()));
  }
  mini::Program patched = program.clone();
  patched.replace_expression(site->id, std::move(replacement));
  try {
    mini::typecheck(patched);
  } catch (const mini::TypeError& e) {
    throw ReportError("patched program does not type-check: " +
                      std::string(e.what()));
  }
  auto rep = mini::run_tests(patched, tests, options);
  return Reapplication{std::move(patched), std::move(rep)};
}

std::string dump_templates(const templates::TemplatePool& pool,
                           const mini::Program& program) {
  std::string out;
  for (const auto& t : pool.templates()) {
    Json j;
    j["template"] = t.code;
    j["return_type"] = t.return_type.str();
    j["kind"] = std::string(mini::kind_name(t.target_kind));
    j["origin"] = format_location(program, t.origin);
    j["support"] = t.support;
    Json phs = Json::array();
    for (const auto& p : t.placeholders) {
      phs.push_back(p.name());
    }
    j["placeholders"] = std::move(phs);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string dump_modpoints(std::span<const modpoints::ModificationPoint> mps,
                           const mini::Program& program) {
  std::string out;
  for (const auto& mp : mps) {
    Json j;
    j["id"] = mp.id;
    j["location"] = format_location(program, mp.location);
    j["code"] = mini::print_expression(*mp.expr);
    j["kind"] = std::string(mini::kind_name(mp.target_kind));
    j["return_type"] = mp.return_type.str();
    j["weight"] = mp.weight;
    Json vars = Json::array();
    for (const auto& v : mp.scope_vars) vars.push_back(v.name + ": " + v.type.str());
    j["scope"] = std::move(vars);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string dump_suspiciousness(
    std::span<const faultloc::SuspiciousStatement> ranked,
    const mini::Program& program) {
  std::string out;
  for (const auto& s : ranked) {
    Json j;
    j["location"] = format_location(program, s.location);
    const mini::Node* n = program.find(s.statement);
    j["kind"] = n != nullptr ? std::string(mini::kind_name(n->kind)) : "";
    j["suspiciousness"] = s.suspiciousness;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

void dump_table(std::ostringstream& os, const std::string& title,
                const namemodel::NameCooccurrenceTable& table, int top_k) {
  os << "== " << title << " (" << table.statements() << " statements, n_max "
     << table.n_max() << ")\n";
  for (int i = 1; i <= table.cap(); ++i) {
    const auto& sets = table.sets_of_size(i);
    if (sets.empty()) continue;
    std::vector<std::pair<namemodel::NameSet, int>> rows(sets.begin(),
                                                         sets.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
      return a.second > b.second;
    });
    if (rows.size() > static_cast<std::size_t>(top_k)) rows.resize(top_k);
    const int den = table.denominator(i);
    os << "  size " << i << " (denominator " << den << ")\n";
    for (const auto& [names, count] : rows) {
      os << "    {";
      for (std::size_t k = 0; k < names.size(); ++k) {
        os << (k > 0 ? ", " : "") << names[k];
      }
      std::ostringstream p;
      p.precision(4);
      p << std::fixed << (den > 0 ? static_cast<double>(count) / den : 0.0);
      os << "}  " << count << "  " << p.str() << '\n';
    }
  }
}

}  // namespace

std::string dump_name_model(const mini::Program& program, int top_k, int cap) {
  std::ostringstream os;
  const auto& all = program.statements();
  auto global = namemodel::build_table(
      std::span<const mini::Node* const>(all.data(), all.size()), cap);
  dump_table(os, "global", global, top_k);
  for (std::size_t f = 0; f < program.files().size(); ++f) {
    mini::SourceLocation at;
    at.file = static_cast<mini::FileId>(f);
    at.package = program.package_of(at.file);
    auto stmts = namemodel::select_statements(program, at,
                                              namemodel::CacheGranularity::File);
    if (stmts.empty()) continue;
    auto local = namemodel::build_table(stmts, cap);
    dump_table(os, "local " + program.file_path(at.file), local, top_k);
  }
  return os.str();
}

}  // namespace cardumen::report
