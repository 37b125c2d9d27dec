#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "cardumen/search.hpp"
#include "support/helpers.hpp"

namespace cardumen::search {
namespace {

using cardumen::testing::find_expr;
using cardumen::testing::find_stmt;
using cardumen::testing::load_one;
using mini::Type;

mini::Project bisect() {
  return mini::load_project(std::filesystem::path(CARDUMEN_TEST_DATA) / "corpus" / "bisect");
}

/// Points of the statement starting with `prefix`, full suspiciousness.
std::vector<ModificationPoint> points_at(const mini::Program& p, const std::string& prefix) {
  const mini::Node* s = find_stmt(p, prefix);
  if (s == nullptr) throw std::runtime_error("no statement " + prefix);
  std::vector<faultloc::SuspiciousStatement> susp{{s->id, 1.0, s->loc}};
  return modpoints::extract_modification_points(susp, p);
}

const ModificationPoint& point(const std::vector<ModificationPoint>& mps,
                               const std::string& code) {
  for (const auto& mp : mps) {
    if (mini::print_expression(*mp.expr) == code) return mp;
  }
  throw std::runtime_error("no point " + code);
}

Template template_of(const mini::Program& p, const std::string& code) {
  return templates::mine_template(*find_expr(p, code));
}

TEST(Instantiate, FloatPairAtBisectionCondition) {
  auto project = bisect();
  auto mps = points_at(project.program, "if (abs(max - min)");
  const auto& mp = point(mps, "max - min");
  Template t = template_of(project.program, "max - min");
  EXPECT_EQ(compatible_variables(mp, t.placeholders[0]).size(), 13u);
  auto inst = instantiate(mp, t);
  ASSERT_TRUE(std::holds_alternative<std::vector<TemplateInstance>>(inst));
  const auto& list = std::get<std::vector<TemplateInstance>>(inst);
  EXPECT_EQ(list.size(), 169u);
  std::set<std::vector<std::string>> distinct;
  for (const auto& i : list) distinct.insert(i.bindings);
  EXPECT_EQ(distinct.size(), 169u);
}

TEST(Instantiate, FourPlaceholdersOverTenInts) {
  auto p = load_one(
      "fun f(a: Int, b: Int, c: Int, d: Int, e: Int, g: Int, h: Int, j: Int, k: Int, l: Int): Int {\n"
      "  return (a + b) * (c - d);\n"
      "}\n");
  auto mps = points_at(p.program, "return");
  const auto& mp = point(mps, "(a + b) * (c - d)");
  auto inst = instantiate(mp, templates::mine_template(*mp.expr));
  EXPECT_EQ(std::get<std::vector<TemplateInstance>>(inst).size(), 10000u);
}

TEST(Instantiate, NoPlaceholdersGivesOneInstance) {
  auto p = load_one("fun f(x: Float): Float {\n  return x + (0.0 - 1.0);\n}\n");
  auto mps = points_at(p.program, "return");
  auto inst = instantiate(point(mps, "x + (0.0 - 1.0)"), template_of(p.program, "0.0 - 1.0"));
  const auto& list = std::get<std::vector<TemplateInstance>>(inst);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_TRUE(list[0].bindings.empty());
}

TEST(Instantiate, SterileWhenATypeHasNoVariable) {
  auto p = load_one(
      "fun g(s: String, n: Int): Bool {\n  return len(s) > n;\n}\n"
      "fun f(n: Int): Bool {\n  return n > 0;\n}\n");
  auto mps = points_at(p.program, "return n > 0");
  auto inst = instantiate(point(mps, "n > 0"), template_of(p.program, "len(s) > n"));
  ASSERT_TRUE(std::holds_alternative<Sterile>(inst));
  EXPECT_EQ(std::get<Sterile>(inst).placeholder, 0);
}

constexpr const char* kRanking =
    "fun solve(f: Fun(Float): Float, a: Float, b: Float): Float {\n"
    "  return f(a) + b;\n"
    "}\n"
    "fun caller(f: Fun(Float): Float, yMin: Float, yMax: Float, initial: Float, functionValue: Float): Float {\n"
    "  var lo: Float = yMin + yMax;\n"
    "  var w: Float = f(yMin) + f(yMax);\n"
    "  var z: Float = f(yMin) - yMax;\n"
    "  var r: Float = solve(f, initial, functionValue);\n"
    "  return (r + lo) + (w + z);\n"
    "}\n";

TEST(Prioritize, RanksByNameCooccurrence) {
  auto p = load_one(kRanking);
  auto mps = points_at(p.program, "var r");
  const auto& mp = point(mps, "solve(f, initial, functionValue)");
  auto inst = std::get<std::vector<TemplateInstance>>(
      instantiate(mp, templates::mine_template(*mp.expr)));
  EXPECT_EQ(inst.size(), 49u);  // f, then 7 Floats twice
  auto model = namemodel::build_model(p.program, mp.location, 0.5);
  auto ranked = prioritize(inst, model, 1000);
  ASSERT_EQ(ranked.size(), 49u);
  using B = std::vector<std::string>;
  // {f, yMin, yMax} is in two of five statements with three or more names
  EXPECT_EQ(ranked[0].bindings, (B{"f", "yMax", "yMin"}));
  EXPECT_EQ(ranked[1].bindings, (B{"f", "yMin", "yMax"}));
  EXPECT_DOUBLE_EQ(ranked[0].score, 2.0 / 5.0);
  // {f, yMax} and {f, yMin}: two of six statements with two or more names
  EXPECT_EQ(ranked[2].bindings, (B{"f", "yMax", "yMax"}));
  EXPECT_EQ(ranked[3].bindings, (B{"f", "yMin", "yMin"}));
  EXPECT_DOUBLE_EQ(ranked[2].score, 2.0 / 6.0);
  EXPECT_EQ(ranked[4].bindings, (B{"f", "functionValue", "initial"}));
  EXPECT_EQ(ranked[5].bindings, (B{"f", "initial", "functionValue"}));
  EXPECT_DOUBLE_EQ(ranked[5].score, 1.0 / 5.0);
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    EXPECT_GE(ranked[i - 1].score, ranked[i].score);
  }
  auto top = prioritize(inst, model, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[2].bindings, ranked[2].bindings);
}

TEST(Prioritize, AllZeroScoresFallBackToLexicographicOrder) {
  auto p = load_one("fun f(q: Int, b: Int, k: Int): Int {\n  return q;\n}\n");
  auto mps = points_at(p.program, "return");
  Template t = templates::mine_template(*mps[0].expr);
  auto inst = std::get<std::vector<TemplateInstance>>(instantiate(mps[0], t));
  auto model = namemodel::build_model(p.program, mps[0].location, 0.5);
  auto ranked = prioritize(inst, model, 1000);
  ASSERT_EQ(ranked.size(), 3u);
  EXPECT_EQ(ranked[0].bindings[0], "q");  // the only name seen
  EXPECT_GT(ranked[0].score, 0.0);
  EXPECT_EQ(ranked[1].bindings[0], "b");
  EXPECT_EQ(ranked[2].bindings[0], "k");
  auto unseen = prioritize(inst, namemodel::build_model(load_one(
      "fun z(w: Int): Int {\n  return w;\n}\n").program, mps[0].location, 0.5), 1000);
  EXPECT_EQ(unseen[0].bindings[0], "b");
  EXPECT_EQ(unseen[2].bindings[0], "q");
  for (const auto& i : unseen) EXPECT_EQ(i.score, 0.0);
}

TEST(Synthesize, ReplacesTheExpression) {
  auto project = bisect();
  auto mps = points_at(project.program, "if ((fm * fmin)");
  const auto& mp = point(mps, "(fm * fmin) > 0.0");
  Template t = templates::mine_template(*mp.expr);
  TemplateInstance inst{&t, &mp, {"max", "min"}, 0.0};
  Candidate c = synthesize(project.program, inst);
  EXPECT_EQ(c.patch.original_code, "(fm * fmin) > 0.0");
  EXPECT_EQ(c.patch.patched_code, "(max * min) > 0.0");
  EXPECT_EQ(patch_kind(c.patch), "BinaryOp|IfStmt");
  EXPECT_EQ(c.patch.location.line, 31);
  EXPECT_EQ(c.patch.file, "solver.mini");
  EXPECT_NE(find_expr(c.program, "(max * min) > 0.0"), nullptr);
  EXPECT_EQ(find_expr(c.program, "(fm * fmin) > 0.0"), nullptr);
  // the source program is untouched
  EXPECT_NE(find_expr(project.program, "(fm * fmin) > 0.0"), nullptr);
}

TEST(Synthesize, PatchKinds) {
  auto p = load_one(kRanking);
  auto at_r = points_at(p.program, "var r");
  const auto& call = point(at_r, "solve(f, initial, functionValue)");
  Template t = templates::mine_template(*call.expr);
  Candidate c = synthesize(p.program, TemplateInstance{&t, &call, {"f", "yMin", "yMax"}, 0.0});
  EXPECT_EQ(c.patch.patched_code, "solve(f, yMin, yMax)");
  EXPECT_EQ(patch_kind(c.patch), "Call|LocalVarDecl");

  auto at_lo = points_at(p.program, "var lo");
  const auto& sum = point(at_lo, "yMin + yMax");
  Template ts = templates::mine_template(*sum.expr);
  Candidate cs = synthesize(p.program, TemplateInstance{&ts, &sum, {"initial", "yMin"}, 0.0});
  EXPECT_EQ(patch_kind(cs.patch), "BinaryOp|LocalVarDecl");

  auto q = load_one("fun f(a: Bool, b: Bool): Int {\n  if (!a) {\n    return 1;\n  }\n  return 0;\n}\n");
  auto at_if = points_at(q.program, "if");
  const auto& neg = point(at_if, "!a");
  Template tn = templates::mine_template(*neg.expr);
  Candidate cn = synthesize(q.program, TemplateInstance{&tn, &neg, {"b"}, 0.0});
  EXPECT_EQ(cn.patch.patched_code, "!b");
  EXPECT_EQ(patch_kind(cn.patch), "UnaryOp|IfStmt");
}

TEST(Validate, FailingTestsRunFirst) {
  auto project = bisect();
  std::vector<mini::TestCase> failing, passing;
  auto report = mini::run_tests(project.program, project.tests);
  for (std::size_t i = 0; i < project.tests.size(); ++i) {
    (report.results[i].outcome == mini::Outcome::Pass ? passing : failing)
        .push_back(project.tests[i]);
  }
  ASSERT_EQ(failing.size(), 2u);
  auto v = validate(project.program, failing, passing);
  EXPECT_EQ(v.failing, 2);
  EXPECT_FALSE(v.reached_regression);
  EXPECT_EQ(v.tests_run, 2);

  auto mps = points_at(project.program, "while");
  const auto& cond = point(mps, "i < iterationCount");
  Template t = templates::mine_template(*cond.expr);
  Candidate fix = synthesize(project.program,
                             TemplateInstance{&t, &cond, {"i", "maximalIterationCount"}, 0.0});
  auto ok = validate(fix.program, failing, passing);
  EXPECT_EQ(ok.failing, 0);
  EXPECT_TRUE(ok.reached_regression);
  EXPECT_EQ(ok.tests_run, 4);
}

TEST(Validate, ShortCircuitAgreesWithFullRun) {
  auto project = bisect();
  RepairEngine engine(project.program, project.tests, SearchConfig{});
  int compared = 0, adequate = 0;
  for (const auto& mp : engine.modification_points()) {
    for (const Template* t : engine.pool().query(mp, templates::ScopeFilter::Package)) {
      const auto* list = engine.prioritized(mp, *t);
      if (list == nullptr) continue;
      for (std::size_t i = 0; i < list->size() && i < 30; ++i) {
        Candidate c = synthesize(project.program, (*list)[i]);
        auto v = engine.validate_candidate(c);
        mini::RunOptions o;
        o.step_budget = engine.config().step_budget;
        auto full = mini::run_tests(c.program, project.tests, o);
        EXPECT_EQ(v.failing == 0, full.failing == 0) << c.patch.patched_code;
        if (v.reached_regression) EXPECT_EQ(v.failing, full.failing);
        adequate += full.failing == 0 ? 1 : 0;
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 200);
  EXPECT_GT(adequate, 0);
}

TEST(Engine, RejectsProgramsWithoutFailingTests) {
  auto p = load_one("fun f(): Int {\n  return 1;\n}\nfun test_f(): Void {\n  assert(f() == 1);\n}\n");
  EXPECT_THROW(RepairEngine(p.program, p.tests, SearchConfig{}), faultloc::NoFailingTests);
  auto q = load_one("fun f(): Int {\n  return 1;\n}\nfun test_f(): Void {\n  assert(f() == 2);\n}\n");
  SearchConfig c;
  c.faultloc.gamma = 1.0;
  EXPECT_THROW(RepairEngine(q.program, q.tests, c), faultloc::EmptySuspiciousSet);
}

TEST(Engine, ZeroAttemptsReturnsNothing) {
  auto project = bisect();
  SearchConfig c;
  c.max_attempts = 0;
  RepairEngine engine(project.program, project.tests, c);
  auto r = engine.run(42);
  EXPECT_TRUE(r.patches.empty());
  EXPECT_EQ(r.stats.attempts, 0);
}

TEST(Engine, RepairsBisection) {
  auto project = bisect();
  SearchConfig c;
  c.seed = 42;
  RepairEngine engine(project.program, project.tests, c);
  auto r = engine.run();
  ASSERT_FALSE(r.patches.empty());
  EXPECT_TRUE(std::any_of(r.patches.begin(), r.patches.end(), [](const Patch& p) {
    return p.patched_code == "i < maximalIterationCount" && p.location.line == 27;
  }));
  const auto& s = r.stats;
  EXPECT_EQ(s.attempts, c.max_attempts);
  EXPECT_EQ(s.attempts, s.no_templates + s.sterile + s.identity + s.typecheck_failures +
                            s.candidates);
  EXPECT_EQ(s.typecheck_failures, 0);
  EXPECT_GT(s.identity, 0);
  EXPECT_LE(s.validations, s.candidates);
  EXPECT_EQ(s.adequate, static_cast<std::int64_t>(r.patches.size()) + s.duplicates);
  std::set<std::pair<mini::NodeId, std::string>> keys;
  for (const auto& p : r.patches) {
    EXPECT_NE(p.patched_code, p.original_code);
    EXPECT_EQ(p.trial_seed, 42u);
    EXPECT_TRUE(keys.insert({p.node, p.patched_code}).second);
  }
}

TEST(Engine, SameSeedSameTrace) {
  auto project = bisect();
  SearchConfig c;
  c.max_attempts = 2000;
  c.record_trace = true;
  RepairEngine a(project.program, project.tests, c);
  RepairEngine b(project.program, project.tests, c);
  auto ra = a.run(7);
  auto rb = b.run(7);
  ASSERT_EQ(ra.trace.size(), 2000u);
  EXPECT_EQ(ra.trace, rb.trace);
  ASSERT_EQ(ra.patches.size(), rb.patches.size());
  for (std::size_t i = 0; i < ra.patches.size(); ++i) {
    EXPECT_EQ(ra.patches[i].patched_code, rb.patches[i].patched_code);
    EXPECT_EQ(ra.patches[i].attempt_index, rb.patches[i].attempt_index);
  }
  // a second run on the same engine replays the same navigation
  EXPECT_EQ(a.run(7).trace, ra.trace);
  EXPECT_NE(a.run(8).trace, ra.trace);
}

TEST(Engine, WithoutDedupRepeatsAreEmitted) {
  auto project = bisect();
  SearchConfig c;
  c.dedup = false;
  RepairEngine engine(project.program, project.tests, c);
  auto r = engine.run(42);
  EXPECT_EQ(r.stats.duplicates, 0);
  EXPECT_EQ(static_cast<std::int64_t>(r.patches.size()), r.stats.adequate);
}

TEST(WeightedChoice, Frequencies) {
  Rng rng(123);
  const std::vector<double> w{1.0, 1.0, 2.0};
  std::vector<int> hits(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++hits[weighted_index(w, rng)];
  EXPECT_NEAR(hits[0] / double(n), 0.25, 0.01);
  EXPECT_NEAR(hits[1] / double(n), 0.25, 0.01);
  EXPECT_NEAR(hits[2] / double(n), 0.50, 0.01);
}

TEST(WeightedChoice, EdgeCases) {
  Rng rng(1);
  const std::vector<double> one_zero{1.0, 0.0};
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(weighted_index(one_zero, rng), 0u);
  const std::vector<double> single{0.3};
  EXPECT_EQ(weighted_index(single, rng), 0u);
  const std::vector<double> zeros{0.0, 0.0};
  EXPECT_THROW(weighted_index(zeros, rng), AllZeroWeights);
  const std::vector<std::string> items{"a", "b"};
  EXPECT_EQ(weighted_choice<std::string>(items, one_zero, rng), "a");
}

TEST(WeightedChoice, ScalingWeightsKeepsTheSequence) {
  const std::vector<double> w{0.2, 0.7, 0.1, 0.4};
  std::vector<double> scaled;
  for (double x : w) scaled.push_back(x * 8.0);
  Rng a(99), b(99);
  for (int i = 0; i < 5000; ++i) EXPECT_EQ(weighted_index(w, a), weighted_index(scaled, b));
}

}  // namespace
}  // namespace cardumen::search
