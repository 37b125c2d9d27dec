#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cardumen/minilang/ast.hpp"

namespace cardumen::namemodel {

/// Sorted, duplicate-free variable names.
using NameSet = std::vector<std::string>;

NameSet make_name_set(std::vector<std::string> names);

/// Variable names referenced by a statement's own expressions, plus the
/// assignment target. Declared names and function names are not included.
NameSet statement_names(const mini::Node& stmt);

/// Co-occurrence counts of variable-name subsets over a statement corpus.
/// pml_i(S) = #statements whose names include S / #statements with at least
/// |S| distinct names.
class NameCooccurrenceTable {
 public:
  static constexpr int kDefaultCap = 4;

  explicit NameCooccurrenceTable(int cap = kDefaultCap) : cap_(cap) {}

  void add_statement(const NameSet& names);

  /// Probability of the set in this table. Sets larger than n_max give 0;
  /// sets larger than the subset cap use the product of pml_1 values.
  double pml(const NameSet& names) const;

  int count(const NameSet& names) const;
  /// Statements with at least i distinct names.
  int denominator(int i) const;
  int n_max() const { return n_max_; }
  int cap() const { return cap_; }
  int statements() const { return statements_; }
  /// Stored sets of size i (1 <= i <= cap) with their counts.
  const std::map<NameSet, int>& sets_of_size(int i) const;

 private:
  int cap_;
  int n_max_ = 0;
  int statements_ = 0;
  std::vector<std::map<NameSet, int>> counts_;  // index: size - 1
  std::vector<int> with_at_least_;              // index: i - 1
};

NameCooccurrenceTable build_table(std::span<const mini::Node* const> statements,
                                  int cap = NameCooccurrenceTable::kDefaultCap);

enum class CacheGranularity { File, Package };

/// Program statements of one file or one package.
std::vector<const mini::Node*> select_statements(const mini::Program& program,
                                                 const mini::SourceLocation& at,
                                                 CacheGranularity granularity);

/// Mixture of a whole-program table and a file/package cache table:
/// p = lambda * p_global + (1 - lambda) * p_cache.
class NameModel {
 public:
  NameModel(std::shared_ptr<const NameCooccurrenceTable> global,
            std::shared_ptr<const NameCooccurrenceTable> cache, double lambda);

  double probability(const NameSet& names) const;

  const NameCooccurrenceTable& global() const { return *global_; }
  const NameCooccurrenceTable& cache() const { return *cache_; }
  double lambda() const { return lambda_; }

 private:
  std::shared_ptr<const NameCooccurrenceTable> global_;
  std::shared_ptr<const NameCooccurrenceTable> cache_;
  double lambda_;
};

NameModel build_model(const mini::Program& program,
                      const mini::SourceLocation& mp_location, double lambda,
                      CacheGranularity granularity = CacheGranularity::File,
                      int cap = NameCooccurrenceTable::kDefaultCap);

}  // namespace cardumen::namemodel
