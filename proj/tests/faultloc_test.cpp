#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cardumen/faultloc.hpp"
#include "support/helpers.hpp"

namespace cardumen::faultloc {
namespace {

using cardumen::testing::find_stmt;
using cardumen::testing::load_one;

Spectrum spectrum(int ef, int ep, int nf, int np) {
  Spectrum s;
  s.ef = ef;
  s.ep = ep;
  s.nf = nf;
  s.np = np;
  return s;
}

TEST(Spectra, CountsFromHandBuiltReport) {
  auto p = load_one(
      "fun f(x: Int): Int {\n"
      "  var y: Int = x + 1;\n"
      "  return y;\n"
      "}\n"
      "fun g(): Int {\n"
      "  return 0;\n"
      "}\n");
  const auto* s1 = find_stmt(p.program, "var y");
  const auto* s2 = find_stmt(p.program, "return y");
  ASSERT_NE(s1, nullptr);
  ASSERT_NE(s2, nullptr);
  mini::TestReport report;
  report.results.push_back({"test_fail", mini::Outcome::AssertionFailed, "", {s1->id, s2->id}});
  report.results.push_back({"test_pass", mini::Outcome::Pass, "", {s2->id}});
  report.failing = 1;
  report.passing = 1;
  auto spectra = collect_spectra(report, p.program);
  ASSERT_EQ(spectra.size(), 2u);  // `return 0;` is never covered
  const auto& a = spectra[0].statement == s1->id ? spectra[0] : spectra[1];
  const auto& b = spectra[0].statement == s1->id ? spectra[1] : spectra[0];
  EXPECT_EQ(a.ef, 1);
  EXPECT_EQ(a.ep, 0);
  EXPECT_EQ(a.nf, 0);
  EXPECT_EQ(a.np, 1);
  EXPECT_EQ(b.ef, 1);
  EXPECT_EQ(b.ep, 1);
  EXPECT_EQ(a.location.line, 2);
}

TEST(Spectra, NoFailingTestIsAnError) {
  auto p = load_one("fun f(): Int { return 1; }");
  mini::TestReport report;
  report.results.push_back({"test_a", mini::Outcome::Pass, "", {}});
  report.passing = 1;
  EXPECT_THROW(collect_spectra(report, p.program), NoFailingTests);
}

TEST(Spectra, FromRealRun) {
  auto p = load_one(
      "fun half(x: Int): Int {\n"
      "  var h: Int = x / 2;\n"
      "  return h + 1;\n"
      "}\n"
      "fun test_even(): Void { assert(half(4) == 2); }\n"
      "fun test_zero(): Void { assert(half(0) == 1); }\n");
  mini::RunOptions o;
  o.record_coverage = true;
  auto report = mini::run_tests(p.program, p.tests, o);
  EXPECT_EQ(report.failing, 1);
  auto spectra = collect_spectra(report, p.program);
  ASSERT_EQ(spectra.size(), 2u);
  for (const auto& s : spectra) {
    EXPECT_EQ(s.ef, 1);
    EXPECT_EQ(s.ep, 1);
    EXPECT_NEAR(ochiai(s), 1.0 / std::sqrt(2.0), 1e-12);
  }
}

TEST(Ochiai, DocumentedValues) {
  EXPECT_DOUBLE_EQ(ochiai(spectrum(1, 0, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(ochiai(spectrum(0, 5, 1, 0)), 0.0);
  EXPECT_NEAR(ochiai(spectrum(1, 1, 0, 0)), 0.7071, 1e-4);
  EXPECT_DOUBLE_EQ(ochiai(spectrum(1, 1, 0, 0)), 1.0 / std::sqrt(2.0));
}

TEST(Ochiai, StaysInUnitIntervalAndIsMonotoneInEf) {
  for (int nf = 0; nf < 6; ++nf) {
    for (int ep = 0; ep < 6; ++ep) {
      double prev = 0.0;
      for (int ef = 0; ef < 8; ++ef) {
        if (ef + nf == 0) continue;
        double v = ochiai(spectrum(ef, ep, nf, 3));
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_GE(v, prev);
        prev = v;
      }
    }
  }
}

std::vector<Spectrum> scored(std::initializer_list<double> scores) {
  // a formula-independent setup: pass scores through a custom formula
  std::vector<Spectrum> out;
  int i = 0;
  for (double s : scores) {
    Spectrum sp;
    sp.statement = ++i;
    sp.location.line = i;
    sp.ef = static_cast<int>(s * 1000.0);
    out.push_back(sp);
  }
  return out;
}

double thousandths(const Spectrum& s) { return s.ef / 1000.0; }

TEST(Rank, ThresholdAndOrder) {
  auto sp = scored({0.9, 0.5, 0.1});
  FaultLocConfig c{0.2, 10};
  auto r = rank_statements(sp, c, thousandths);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].statement, 1);
  EXPECT_EQ(r[1].statement, 2);
}

TEST(Rank, CapKeepsMaximum) {
  auto sp = scored({0.3, 0.8, 0.6});
  auto r = rank_statements(sp, FaultLocConfig{0.0, 1}, thousandths);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].statement, 2);
}

TEST(Rank, ThresholdIsStrict) {
  auto sp = scored({0.1, 0.2});
  auto r = rank_statements(sp, FaultLocConfig{0.1, 10}, thousandths);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].statement, 2);
}

TEST(Rank, NothingAboveThreshold) {
  auto sp = scored({0.05, 0.1});
  EXPECT_THROW(rank_statements(sp, FaultLocConfig{0.1, 10}, thousandths),
               EmptySuspiciousSet);
}

TEST(Rank, TiesBrokenBySourcePosition) {
  std::vector<Spectrum> sp;
  for (int i = 0; i < 4; ++i) {
    Spectrum s = spectrum(1, 1, 0, 0);
    s.statement = 10 - i;
    s.location.file = i % 2;
    s.location.line = 5 - i;
    sp.push_back(s);
  }
  auto r = rank_statements(sp, FaultLocConfig{}, ochiai);
  ASSERT_EQ(r.size(), 4u);
  for (std::size_t i = 1; i < r.size(); ++i) {
    EXPECT_LT(std::tie(r[i - 1].location.file, r[i - 1].location.line),
              std::tie(r[i].location.file, r[i].location.line));
  }
}

TEST(Rank, MatchesIndependentSortFilter) {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    std::vector<Spectrum> sp;
    const int n = 1 + static_cast<int>(rng() % 40);
    const int failing = 1 + static_cast<int>(rng() % 5);
    const int passing = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      Spectrum s;
      s.statement = i + 1;
      s.location.file = static_cast<int>(rng() % 2);
      s.location.line = 1 + static_cast<int>(rng() % 30);
      s.location.column = 1 + static_cast<int>(rng() % 3);
      s.ef = static_cast<int>(rng() % (failing + 1));
      s.nf = failing - s.ef;
      s.ep = static_cast<int>(rng() % (passing + 1));
      s.np = passing - s.ep;
      sp.push_back(s);
    }
    FaultLocConfig c;
    c.gamma = (rng() % 5) / 10.0;
    c.max_statements = 1 + rng() % 30;

    struct Row {
      double score;
      Spectrum s;
    };
    std::vector<Row> rows;
    for (const auto& s : sp) {
      double score = s.ef == 0 ? 0.0
                               : s.ef / std::sqrt(double(s.ef + s.nf) * double(s.ef + s.ep));
      if (score > c.gamma) rows.push_back({score, s});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.s.location.file != b.s.location.file) return a.s.location.file < b.s.location.file;
      if (a.s.location.line != b.s.location.line) return a.s.location.line < b.s.location.line;
      if (a.s.location.column != b.s.location.column) {
        return a.s.location.column < b.s.location.column;
      }
      return a.s.statement < b.s.statement;
    });
    if (rows.size() > c.max_statements) rows.resize(c.max_statements);

    if (rows.empty()) {
      EXPECT_THROW(rank_statements(sp, c), EmptySuspiciousSet);
      continue;
    }
    auto r = rank_statements(sp, c);
    ASSERT_EQ(r.size(), rows.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_EQ(r[i].statement, rows[i].s.statement);
      EXPECT_DOUBLE_EQ(r[i].suspiciousness, rows[i].score);
    }
    // determinism
    auto again = rank_statements(sp, c);
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i].statement, again[i].statement);
  }
}

}  // namespace
}  // namespace cardumen::faultloc
