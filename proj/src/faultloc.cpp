#include "cardumen/faultloc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace cardumen::faultloc {

std::vector<Spectrum> collect_spectra(const mini::TestReport& report,
                                      const mini::Program& program) {
  if (report.failing == 0) throw NoFailingTests();
  std::map<NodeId, Spectrum> by_stmt;
  for (const auto& r : report.results) {
    for (NodeId id : r.coverage) {
      const mini::Node* n = program.find(id);
      if (n == nullptr || !mini::is_statement(n->kind)) continue;
      auto& s = by_stmt[id];
      s.statement = id;
      s.location = n->loc;
      if (r.passed()) {
        ++s.ep;
      } else {
        ++s.ef;
      }
    }
  }
  std::vector<Spectrum> out;
  out.reserve(by_stmt.size());
  for (auto& [id, s] : by_stmt) {
    s.nf = report.failing - s.ef;
    s.np = report.passing - s.ep;
    out.push_back(s);
  }
  return out;
}

double ochiai(const Spectrum& s) {
  if (s.ef == 0) return 0.0;
  double denom = std::sqrt(static_cast<double>(s.ef + s.nf) *
                           static_cast<double>(s.ef + s.ep));
  if (denom == 0.0) return 0.0;
  return std::clamp(static_cast<double>(s.ef) / denom, 0.0, 1.0);
}

std::vector<SuspiciousStatement> rank_statements(std::span<const Spectrum> spectra,
                                                 const FaultLocConfig& config,
                                                 Formula formula) {
  std::vector<SuspiciousStatement> out;
  for (const auto& s : spectra) {
    double score = formula(s);
    if (score > config.gamma) out.push_back({s.statement, score, s.location});
  }
  std::sort(out.begin(), out.end(),
            [](const SuspiciousStatement& a, const SuspiciousStatement& b) {
              if (a.suspiciousness != b.suspiciousness) {
                return a.suspiciousness > b.suspiciousness;
              }
              return std::tie(a.location.file, a.location.line,
                              a.location.column, a.statement) <
                     std::tie(b.location.file, b.location.line,
                              b.location.column, b.statement);
            });
  if (out.size() > config.max_statements) out.resize(config.max_statements);
  if (out.empty()) throw EmptySuspiciousSet();
  return out;
}

}  // namespace cardumen::faultloc
