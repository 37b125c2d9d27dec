#include "cardumen/namemodel.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "cardumen/modpoints.hpp"

namespace cardumen::namemodel {

NameSet make_name_set(std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

NameSet statement_names(const mini::Node& stmt) {
  std::vector<std::string> names;
  if (stmt.kind == mini::NodeKind::Assignment) names.push_back(stmt.text);
  for (const mini::Node* e : modpoints::statement_expressions(stmt)) {
    if (e->kind == mini::NodeKind::VarRead &&
        (e->binding.kind == mini::RefKind::Local ||
         e->binding.kind == mini::RefKind::Global)) {
      names.push_back(e->text);
    }
  }
  return make_name_set(std::move(names));
}

namespace {

void for_each_subset(const NameSet& names, int size,
                     const std::function<void(const NameSet&)>& fn) {
  NameSet current;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(current.size()) == size) {
      fn(current);
      return;
    }
    for (std::size_t i = start; i < names.size(); ++i) {
      current.push_back(names[i]);
      self(self, i + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

void NameCooccurrenceTable::add_statement(const NameSet& names) {
  ++statements_;
  int k = static_cast<int>(names.size());
  if (k == 0) return;
  n_max_ = std::max(n_max_, k);
  if (static_cast<int>(with_at_least_.size()) < k) with_at_least_.resize(k, 0);
  for (int i = 0; i < k; ++i) ++with_at_least_[static_cast<std::size_t>(i)];
  int top = std::min(k, cap_);
  if (static_cast<int>(counts_.size()) < top) counts_.resize(top);
  for (int size = 1; size <= top; ++size) {
    auto& bucket = counts_[static_cast<std::size_t>(size - 1)];
    for_each_subset(names, size, [&](const NameSet& s) { ++bucket[s]; });
  }
}

int NameCooccurrenceTable::count(const NameSet& names) const {
  auto size = names.size();
  if (size == 0 || size > counts_.size()) return 0;
  const auto& bucket = counts_[size - 1];
  auto it = bucket.find(names);
  return it == bucket.end() ? 0 : it->second;
}

int NameCooccurrenceTable::denominator(int i) const {
  if (i < 1 || i > static_cast<int>(with_at_least_.size())) return 0;
  return with_at_least_[static_cast<std::size_t>(i - 1)];
}

const std::map<NameSet, int>& NameCooccurrenceTable::sets_of_size(int i) const {
  static const std::map<NameSet, int> empty;
  if (i < 1 || i > static_cast<int>(counts_.size())) return empty;
  return counts_[static_cast<std::size_t>(i - 1)];
}

double NameCooccurrenceTable::pml(const NameSet& query) const {
  NameSet names = make_name_set(query);
  int size = static_cast<int>(names.size());
  if (size == 0) throw std::invalid_argument("pml of an empty name set");
  if (size > n_max_) return 0.0;
  if (size > cap_) {
    double product = 1.0;
    for (const auto& n : names) product *= pml(NameSet{n});
    return product;
  }
  int den = denominator(size);
  return den == 0 ? 0.0 : static_cast<double>(count(names)) / den;
}

NameCooccurrenceTable build_table(std::span<const mini::Node* const> statements,
                                  int cap) {
  NameCooccurrenceTable table(cap);
  for (const mini::Node* s : statements) table.add_statement(statement_names(*s));
  return table;
}

std::vector<const mini::Node*> select_statements(const mini::Program& program,
                                                 const mini::SourceLocation& at,
                                                 CacheGranularity granularity) {
  std::vector<const mini::Node*> out;
  for (const mini::Node* s : program.statements()) {
    bool keep = granularity == CacheGranularity::File
                    ? s->loc.file == at.file
                    : s->loc.package == at.package;
    if (keep) out.push_back(s);
  }
  return out;
}

NameModel::NameModel(std::shared_ptr<const NameCooccurrenceTable> global,
                     std::shared_ptr<const NameCooccurrenceTable> cache,
                     double lambda)
    : global_(std::move(global)), cache_(std::move(cache)), lambda_(lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
}

double NameModel::probability(const NameSet& names) const {
  return lambda_ * global_->pml(names) + (1.0 - lambda_) * cache_->pml(names);
}

NameModel build_model(const mini::Program& program,
                      const mini::SourceLocation& mp_location, double lambda,
                      CacheGranularity granularity, int cap) {
  const auto& all = program.statements();
  auto global = std::make_shared<NameCooccurrenceTable>(
      build_table(std::span<const mini::Node* const>(all.data(), all.size()), cap));
  auto selected = select_statements(program, mp_location, granularity);
  auto cache = std::make_shared<NameCooccurrenceTable>(build_table(selected, cap));
  return NameModel(std::move(global), std::move(cache), lambda);
}

}  // namespace cardumen::namemodel
