#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cardumen/minilang/ast.hpp"
#include "cardumen/modpoints.hpp"

namespace cardumen::templates {

using mini::Node;
using mini::NodeKind;
using mini::SourceLocation;
using mini::Type;

/// A typed hole, rendered `_<Type>_<index>`.
struct Placeholder {
  Type type;
  int index = 0;

  std::string name() const;
};

/// An expression with every variable read replaced by a placeholder.
/// Literals and function names are kept verbatim.
struct Template {
  std::shared_ptr<const Node> body;
  std::vector<Placeholder> placeholders;  // ordered by index
  Type return_type;
  NodeKind target_kind = NodeKind::Literal;
  SourceLocation origin;                   // first occurrence
  std::vector<SourceLocation> occurrences; // every abstracted occurrence
  int support = 1;
  std::string code;  // printed body
  /// Variable names bound to each placeholder at the origin occurrence.
  std::vector<std::string> origin_names;
};

/// Abstracts one type-checked expression. Placeholders are numbered from 0
/// in order of first occurrence; a repeated variable reuses its placeholder.
Template mine_template(const Node& expr);

enum class ScopeFilter { Local, Package, Global };

std::string_view scope_name(ScopeFilter s);
bool parse_scope(std::string_view text, ScopeFilter& out);

/// Templates mined from every qualifying expression of a program,
/// deduplicated by (return type, printed body). Immutable once built.
class TemplatePool {
 public:
  static TemplatePool build(const mini::Program& program,
                            const modpoints::TargetConfig& config = {});

  const std::vector<Template>& templates() const { return templates_; }
  std::size_t size() const { return templates_.size(); }

  /// Templates whose return type equals `type` and which were mined (at
  /// least once) inside the scope around `at`. Pool order.
  std::vector<const Template*> query(const Type& type, const SourceLocation& at,
                                     ScopeFilter scope) const;
  std::vector<const Template*> query(const modpoints::ModificationPoint& mp,
                                     ScopeFilter scope) const {
    return query(mp.return_type, mp.location, scope);
  }

 private:
  using Key = std::pair<std::string, std::string>;  // (type, scope key)
  static std::string scope_key(const SourceLocation& at, ScopeFilter scope);

  std::vector<Template> templates_;
  std::map<Key, std::vector<std::size_t>> index_;
};

/// support(t) / sum of support over the candidates.
double template_weight(const Template& t,
                       std::span<const Template* const> candidates);
std::vector<double> template_weights(std::span<const Template* const> candidates);

}  // namespace cardumen::templates
