#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <set>

#include "cardumen/templates.hpp"
#include "support/generator.hpp"
#include "support/helpers.hpp"

namespace cardumen::templates {
namespace {

using cardumen::testing::find_expr;
using cardumen::testing::load;
using cardumen::testing::load_one;

std::vector<std::string> placeholder_names(const Template& t) {
  std::vector<std::string> out;
  for (const auto& p : t.placeholders) out.push_back(p.name());
  return out;
}

// Puts the origin variable names back in place of the placeholders.
std::string restore(const Template& t) {
  auto body = t.body->clone();
  auto walk = [&](auto&& self, Node& n) -> void {
    if (n.binding.kind == mini::RefKind::Placeholder) {
      n.text = t.origin_names.at(static_cast<std::size_t>(n.binding.slot));
    }
    for (auto& c : n.children) self(self, *c);
  };
  walk(walk, *body);
  return mini::print_expression(*body);
}

TEST(Mine, RepeatedVariableSharesPlaceholder) {
  auto p = load_one("fun f(a: Int, b: Int, c: Int): Bool {\n  return ((a > b) && (c > a));\n}\n");
  Template t = mine_template(*find_expr(p.program, "(a > b) && (c > a)"));
  EXPECT_EQ(t.code, "(_Int_0 > _Int_1) && (_Int_2 > _Int_0)");
  EXPECT_EQ(placeholder_names(t), (std::vector<std::string>{"_Int_0", "_Int_1", "_Int_2"}));
  EXPECT_EQ(t.origin_names, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(t.return_type, Type::Bool());
  EXPECT_EQ(t.target_kind, NodeKind::BinaryOp);
  // structure: both reads of `a` point at placeholder 0
  const Node& lhs = *t.body->child(0)->child(0);
  const Node& rhs = *t.body->child(1)->child(1);
  EXPECT_EQ(lhs.binding.kind, mini::RefKind::Placeholder);
  EXPECT_EQ(lhs.binding.slot, 0);
  EXPECT_EQ(rhs.binding.slot, 0);
}

TEST(Mine, LiteralsKept) {
  auto p = load_one("fun f(x: Int): Int {\n  return x + 1;\n}\n");
  Template t = mine_template(*find_expr(p.program, "x + 1"));
  EXPECT_EQ(t.code, "_Int_0 + 1");
  EXPECT_EQ(t.placeholders.size(), 1u);
}

TEST(Mine, CalleeKeptAndFunctionArgumentAbstracted) {
  auto p = load_one(
      "fun solve(f: Fun(Float): Float, min: Float, max: Float): Float {\n"
      "  return f(min) + max;\n"
      "}\n"
      "fun g(f: Fun(Float): Float, min: Float, max: Float): Float {\n"
      "  return solve(f, min, max);\n"
      "}\n");
  Template t = mine_template(*find_expr(p.program, "solve(f, min, max)"));
  EXPECT_EQ(t.code, "solve(_Fun_0, _Float_1, _Float_2)");
  EXPECT_EQ(t.placeholders[0].type, Type::Function({Type::Float()}, Type::Float()));
  EXPECT_EQ(t.target_kind, NodeKind::Call);
  EXPECT_EQ(restore(t), "solve(f, min, max)");
}

TEST(Pool, DeduplicatesWithSupport) {
  auto p = load_one(
      "fun f(a: Int, b: Int): Int {\n"
      "  var x: Int = a + b;\n"
      "  var y: Int = x + a;\n"
      "  return y + x;\n"
      "}\n");
  auto pool = TemplatePool::build(p.program);
  auto it = std::find_if(pool.templates().begin(), pool.templates().end(),
                         [](const Template& t) { return t.code == "_Int_0 + _Int_1"; });
  ASSERT_NE(it, pool.templates().end());
  EXPECT_EQ(it->support, 3);
  EXPECT_EQ(it->occurrences.size(), 3u);
  EXPECT_EQ(it->origin.line, 2);
  EXPECT_EQ(it->origin_names, (std::vector<std::string>{"a", "b"}));
}

TEST(Pool, ZeroPlaceholderTemplatesKept) {
  auto p = load_one("fun f(): Float {\n  return 0.0 - 1.0;\n}\n");
  auto pool = TemplatePool::build(p.program);
  ASSERT_EQ(pool.size(), 1u);
  EXPECT_TRUE(pool.templates()[0].placeholders.empty());
}

TEST(Pool, TestBodiesAreNotMined) {
  auto p = load_one(
      "fun f(a: Int): Int {\n  return a;\n}\n"
      "fun test_f(): Void {\n  var q: Int = 2;\n  assert(f(q * q) == 4);\n}\n");
  auto pool = TemplatePool::build(p.program);
  for (const auto& t : pool.templates()) EXPECT_EQ(t.code.find('*'), std::string::npos);
}

TEST(Pool, BisectionConditionYieldsItsThreeTemplates) {
  auto project = mini::load_project(std::filesystem::path(CARDUMEN_TEST_DATA) /
                                    "corpus" / "bisect");
  auto pool = TemplatePool::build(project.program);
  const Node* cond = find_expr(project.program, "abs(max - min) <= absoluteAccuracy");
  ASSERT_NE(cond, nullptr);
  std::map<std::string, const Template*> from_line;
  for (const auto& t : pool.templates()) {
    for (const auto& occ : t.occurrences) {
      if (occ.line == cond->loc.line && occ.file == cond->loc.file) from_line[t.code] = &t;
    }
  }
  ASSERT_TRUE(from_line.count("abs(_Float_0 - _Float_1) <= _Float_2"));
  ASSERT_TRUE(from_line.count("abs(_Float_0 - _Float_1)"));
  ASSERT_TRUE(from_line.count("_Float_0 - _Float_1"));
  EXPECT_EQ(from_line["abs(_Float_0 - _Float_1) <= _Float_2"]->return_type, Type::Bool());
  EXPECT_EQ(from_line["abs(_Float_0 - _Float_1)"]->target_kind, NodeKind::Call);
  EXPECT_EQ(from_line["_Float_0 - _Float_1"]->return_type, Type::Float());
  // the remaining ones are the bare variable reads
  for (const auto& [code, t] : from_line) {
    if (t->target_kind != NodeKind::VarRead) continue;
    EXPECT_EQ(code, "_Float_0");
  }
  EXPECT_TRUE(std::any_of(pool.templates().begin(), pool.templates().end(),
                          [](const Template& t) { return t.code == "(_Float_0 * _Float_1) > 0.0"; }));
}

constexpr const char* kFileA =
    "fun fa(a: Int, b: Int): Bool {\n  return a < b;\n}\n";
constexpr const char* kFileB =
    "fun fb(c: Int, d: Int): Bool {\n  return c == d;\n}\n";
constexpr const char* kFileC =
    "fun fc(e: Int): Int {\n  return e * 2;\n}\n"
    "fun fd(e: Int, f: Int): Bool {\n  return e > f;\n}\n";

TEST(Query, LocationFilter) {
  auto p = load({{"pkg/a.mini", kFileA}, {"pkg/b.mini", kFileB}, {"other/c.mini", kFileC}});
  auto pool = TemplatePool::build(p.program);
  const Node* mp = find_expr(p.program, "a < b");
  auto codes = [&](ScopeFilter s) {
    std::set<std::string> out;
    for (const auto* t : pool.query(Type::Bool(), mp->loc, s)) out.insert(t->code);
    return out;
  };
  EXPECT_EQ(codes(ScopeFilter::Local), (std::set<std::string>{"_Int_0 < _Int_1"}));
  EXPECT_EQ(codes(ScopeFilter::Package),
            (std::set<std::string>{"_Int_0 < _Int_1", "_Int_0 == _Int_1"}));
  EXPECT_EQ(codes(ScopeFilter::Global),
            (std::set<std::string>{"_Int_0 < _Int_1", "_Int_0 == _Int_1", "_Int_0 > _Int_1"}));
}

TEST(Query, MatchesBruteForceFilter) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = cardumen::testing::ProgramGenerator(seed).generate();
    auto p = cardumen::testing::load(g.sources);
    auto pool = TemplatePool::build(p.program);
    for (const auto* stmt : p.program.statements()) {
      for (const auto* e : modpoints::statement_expressions(*stmt)) {
        if (!modpoints::TargetConfig{}.accepts(*e)) continue;
        std::vector<const Template*> previous;
        for (auto scope : {ScopeFilter::Local, ScopeFilter::Package, ScopeFilter::Global}) {
          std::vector<const Template*> want;
          for (const auto& t : pool.templates()) {
            if (t.return_type != e->type) continue;
            bool in = std::any_of(t.occurrences.begin(), t.occurrences.end(),
                                  [&](const mini::SourceLocation& o) {
                                    return scope == ScopeFilter::Global ||
                                           (scope == ScopeFilter::Package && o.package == e->loc.package) ||
                                           (scope == ScopeFilter::Local && o.file == e->loc.file);
                                  });
            if (in) want.push_back(&t);
          }
          auto got = pool.query(e->type, e->loc, scope);
          ASSERT_EQ(got, want) << "seed " << seed;
          for (const auto* t : previous) {
            EXPECT_NE(std::find(got.begin(), got.end(), t), got.end());
          }
          previous = got;
        }
      }
    }
  }
}

TEST(Weights, ProportionalToSupport) {
  Template a;
  a.support = 3;
  Template b;
  b.support = 1;
  std::vector<const Template*> c{&a, &b};
  auto w = template_weights(c);
  EXPECT_DOUBLE_EQ(w[0], 0.75);
  EXPECT_DOUBLE_EQ(w[1], 0.25);
  EXPECT_DOUBLE_EQ(template_weight(a, c), 0.75);
  std::vector<const Template*> single{&b};
  EXPECT_DOUBLE_EQ(template_weight(b, single), 1.0);
}

TEST(Weights, RecountOverRandomPools) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = cardumen::testing::ProgramGenerator(seed).generate();
    auto p = cardumen::testing::load(g.sources);
    auto pool = TemplatePool::build(p.program);
    // raw occurrence count per template text
    std::map<std::string, int> raw;
    for (const auto* stmt : p.program.statements()) {
      for (const auto* e : modpoints::statement_expressions(*stmt)) {
        if (modpoints::TargetConfig{}.accepts(*e)) {
          raw[e->type.str() + "|" + mine_template(*e).code]++;
        }
      }
    }
    std::vector<const Template*> all;
    for (const auto& t : pool.templates()) all.push_back(&t);
    if (all.empty()) continue;
    double total = 0.0;
    for (const auto* t : all) total += raw.at(t->return_type.str() + "|" + t->code);
    auto w = template_weights(all);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    for (std::size_t i = 0; i < all.size(); ++i) {
      EXPECT_GE(w[i], 0.0);
      EXPECT_DOUBLE_EQ(w[i], raw.at(all[i]->return_type.str() + "|" + all[i]->code) / total);
    }
  }
}

TEST(Soundness, RestoringPlaceholdersReproducesOrigin) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto g = cardumen::testing::ProgramGenerator(seed).generate();
    auto p = cardumen::testing::load(g.sources);
    for (const auto* stmt : p.program.statements()) {
      for (const auto* e : modpoints::statement_expressions(*stmt)) {
        if (!modpoints::TargetConfig{}.accepts(*e)) continue;
        Template t = mine_template(*e);
        EXPECT_EQ(restore(t), mini::print_expression(*e));
        EXPECT_EQ(t.return_type, e->type);
      }
    }
  }
}

TEST(Scope, Names) {
  ScopeFilter s;
  EXPECT_TRUE(parse_scope("local", s));
  EXPECT_EQ(s, ScopeFilter::Local);
  EXPECT_TRUE(parse_scope("global", s));
  EXPECT_EQ(scope_name(s), "global");
  EXPECT_FALSE(parse_scope("project", s));
}

}  // namespace
}  // namespace cardumen::templates
