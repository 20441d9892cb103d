#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankfair/metrics.hpp"
#include "rankfair/netgen.hpp"
#include "rankfair/ranking.hpp"

namespace rankfair::harness {

inline constexpr std::string_view kResultsHeader =
    "model,n,fm,d,hMM,hmm,gammaM,gammam,rep,seed,algorithm,scope,k,gini,fraction_minority,error,region";

enum class Scope { Global, Local, Failed };

std::string_view scope_name(Scope s) noexcept;

/// One tidy observation: a (network, algorithm, scope) measurement.
/// Failed rows carry no metrics; `message` is not serialized.
struct ResultRow {
  GeneratorParams params;
  std::size_t rep = 0;
  Algorithm algorithm = Algorithm::PageRank;
  Scope scope = Scope::Global;
  double k = 0.0;
  double gini = 0.0;
  double fraction_minority = 0.0;
  double error = 0.0;
  Region region = Region::V;
  std::string message;
};

/// The first ten columns; identifies the network a row belongs to.
std::string cell_key(const GeneratorParams& params, std::size_t rep);

std::string format_row(const ResultRow& row);

/// Rows for one summary: the global row first, then one per k.
std::vector<ResultRow> summary_rows(const GeneratorParams& params, std::size_t rep, Algorithm algorithm,
                                    const DisparitySummary& summary);

/// Header plus string cells, for the readers of results files.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name`; throws Error listing the available columns.
  std::size_t column(std::string_view name) const;
  std::optional<std::size_t> find_column(std::string_view name) const;
};

Table read_table(std::istream& in, const std::string& name = "table");
Table load_table(const std::filesystem::path& path);

}  // namespace rankfair::harness
