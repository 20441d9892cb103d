#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankfair/harness/results.hpp"

namespace rankfair::harness {

enum class CorrelationScope { Global, Local };

CorrelationScope parse_scope(std::string_view name);

struct Correlation {
  std::string algorithm;
  CorrelationScope scope = CorrelationScope::Global;
  std::size_t rows = 0;
  /// Spearman rho(gini, error) and rho(gini, |error|); empty when undefined.
  std::optional<double> rho_signed;
  std::optional<double> rho_abs;
  std::string note;
};

/// One correlation per algorithm present in the table, in order of first
/// appearance. Error rows are skipped.
std::vector<Correlation> correlate(const Table& results, CorrelationScope scope);

void write_correlations(const std::vector<Correlation>& report, std::ostream& out);

}  // namespace rankfair::harness
