#include "cardumen/templates.hpp"

#include <set>
#include <unordered_map>

#include "cardumen/minilang/printer.hpp"

namespace cardumen::templates {

std::string Placeholder::name() const {
  return "_" + type.short_name() + "_" + std::to_string(index);
}

std::string_view scope_name(ScopeFilter s) {
  switch (s) {
    case ScopeFilter::Local: return "local";
    case ScopeFilter::Package: return "package";
    case ScopeFilter::Global: return "global";
  }
  return "?";
}

bool parse_scope(std::string_view text, ScopeFilter& out) {
  if (text == "local") {
    out = ScopeFilter::Local;
  } else if (text == "package") {
    out = ScopeFilter::Package;
  } else if (text == "global") {
    out = ScopeFilter::Global;
  } else {
    return false;
  }
  return true;
}

namespace {

void abstract(Node& n, std::unordered_map<std::string, int>& ids,
              Template& t) {
  if (n.kind == NodeKind::VarRead && (n.binding.kind == mini::RefKind::Local ||
                                      n.binding.kind == mini::RefKind::Global)) {
    auto [it, fresh] = ids.emplace(n.text, static_cast<int>(ids.size()));
    if (fresh) {
      t.placeholders.push_back(Placeholder{n.type, it->second});
      t.origin_names.push_back(n.text);
    }
    n.text = t.placeholders[static_cast<std::size_t>(it->second)].name();
    n.binding = mini::Binding{mini::RefKind::Placeholder, it->second};
    return;
  }
  for (auto& c : n.children) abstract(*c, ids, t);
}

}  // namespace

Template mine_template(const Node& expr) {
  Template t;
  auto body = expr.clone();
  body->parent = nullptr;
  std::unordered_map<std::string, int> ids;
  abstract(*body, ids, t);
  t.return_type = expr.type;
  t.target_kind = expr.kind;
  t.origin = expr.loc;
  t.occurrences.push_back(expr.loc);
  t.code = mini::print_expression(*body);
  t.body = std::move(body);
  return t;
}

TemplatePool TemplatePool::build(const mini::Program& program,
                                 const modpoints::TargetConfig& config) {
  TemplatePool pool;
  std::unordered_map<std::string, std::size_t> seen;
  for (const Node* stmt : program.statements()) {
    for (const Node* e : modpoints::statement_expressions(*stmt)) {
      if (!config.accepts(*e)) continue;
      Template t = mine_template(*e);
      std::string key = t.return_type.str() + "\n" + t.code;
      auto it = seen.find(key);
      if (it != seen.end()) {
        Template& existing = pool.templates_[it->second];
        ++existing.support;
        existing.occurrences.push_back(e->loc);
        continue;
      }
      seen.emplace(std::move(key), pool.templates_.size());
      pool.templates_.push_back(std::move(t));
    }
  }
  for (std::size_t i = 0; i < pool.templates_.size(); ++i) {
    const Template& t = pool.templates_[i];
    std::set<std::string> keys;
    for (const auto& occ : t.occurrences) {
      for (auto s : {ScopeFilter::Local, ScopeFilter::Package, ScopeFilter::Global}) {
        keys.insert(scope_key(occ, s));
      }
    }
    for (const auto& k : keys) {
      pool.index_[Key{t.return_type.str(), k}].push_back(i);
    }
  }
  return pool;
}

std::string TemplatePool::scope_key(const SourceLocation& at, ScopeFilter scope) {
  switch (scope) {
    case ScopeFilter::Local: return "F" + std::to_string(at.file);
    case ScopeFilter::Package: return "P" + std::to_string(at.package);
    case ScopeFilter::Global: return "G";
  }
  return "G";
}

std::vector<const Template*> TemplatePool::query(const Type& type,
                                                 const SourceLocation& at,
                                                 ScopeFilter scope) const {
  std::vector<const Template*> out;
  auto it = index_.find(Key{type.str(), scope_key(at, scope)});
  if (it == index_.end()) return out;
  out.reserve(it->second.size());
  for (std::size_t i : it->second) out.push_back(&templates_[i]);
  return out;
}

double template_weight(const Template& t,
                       std::span<const Template* const> candidates) {
  double total = 0.0;
  for (const Template* c : candidates) total += c->support;
  return total > 0.0 ? t.support / total : 0.0;
}

std::vector<double> template_weights(std::span<const Template* const> candidates) {
  double total = 0.0;
  for (const Template* c : candidates) total += c->support;
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const Template* c : candidates) out.push_back(c->support / total);
  return out;
}

}  // namespace cardumen::templates
