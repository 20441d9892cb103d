#include "rankfair/harness/correlate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rankfair/error.hpp"
#include "rankfair/metrics.hpp"
#include "rankfair/text.hpp"

namespace rankfair::harness {

namespace {

std::optional<double> try_spearman(const std::vector<double>& x, const std::vector<double>& y, std::string& note) {
  try {
    return spearman(x, y);
  } catch (const MetricsError& e) {
    if (!note.empty()) note += "; ";
    note += e.what();
    return std::nullopt;
  }
}

}  // namespace

CorrelationScope parse_scope(std::string_view name) {
  if (name == "global") return CorrelationScope::Global;
  if (name == "local") return CorrelationScope::Local;
  throw Error("unknown scope '" + std::string(name) + "' (expected global or local)");
}

std::vector<Correlation> correlate(const Table& results, CorrelationScope scope) {
  const auto c_alg = results.column("algorithm");
  const auto c_scope = results.column("scope");
  const auto c_gini = results.column("gini");
  const auto c_error = results.column("error");
  const std::string wanted = scope == CorrelationScope::Global ? "global" : "local";

  std::vector<std::string> algorithms;
  std::vector<std::vector<double>> gini, error;
  for (const auto& row : results.rows) {
    if (row[c_scope] != wanted) continue;
    auto g = parse_double(row[c_gini]);
    auto e = parse_double(row[c_error]);
    if (!g || !e) throw Error("non-numeric gini or error in results");
    auto it = std::find(algorithms.begin(), algorithms.end(), row[c_alg]);
    const auto idx = static_cast<std::size_t>(it - algorithms.begin());
    if (it == algorithms.end()) {
      algorithms.push_back(row[c_alg]);
      gini.emplace_back();
      error.emplace_back();
    }
    gini[idx].push_back(*g);
    error[idx].push_back(*e);
  }

  std::vector<Correlation> report;
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    Correlation c;
    c.algorithm = algorithms[a];
    c.scope = scope;
    c.rows = gini[a].size();
    std::vector<double> abs_error(error[a].size());
    std::transform(error[a].begin(), error[a].end(), abs_error.begin(), [](double v) { return std::fabs(v); });
    c.rho_signed = try_spearman(gini[a], error[a], c.note);
    c.rho_abs = try_spearman(gini[a], abs_error, c.note);
    report.push_back(std::move(c));
  }
  return report;
}

void write_correlations(const std::vector<Correlation>& report, std::ostream& out) {
  out << "algorithm,scope,rows,rho_gini_error,rho_gini_abs_error,note\n";
  for (const auto& c : report) {
    out << c.algorithm << ',' << (c.scope == CorrelationScope::Global ? "global" : "local") << ',' << c.rows << ','
        << (c.rho_signed ? format_value(*c.rho_signed) : "") << ',' << (c.rho_abs ? format_value(*c.rho_abs) : "")
        << ',';
    std::string note = c.note;
    std::replace(note.begin(), note.end(), ',', ';');
    out << note << '\n';
  }
}

}  // namespace rankfair::harness
