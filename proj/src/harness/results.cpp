#include "rankfair/harness/results.hpp"

#include <fstream>
#include <istream>

#include "rankfair/error.hpp"
#include "rankfair/text.hpp"

namespace rankfair::harness {

namespace {

std::string optional_value(const std::optional<double>& v) { return v ? format_value(*v, 10) : std::string(); }

}  // namespace

std::string_view scope_name(Scope s) noexcept {
  switch (s) {
    case Scope::Global: return "global";
    case Scope::Local: return "local";
    case Scope::Failed: return "error";
  }
  return "?";
}

std::string cell_key(const GeneratorParams& p, std::size_t rep) {
  std::string key;
  key += model_name(p.model);
  key += ',' + std::to_string(p.n);
  key += ',' + format_value(p.fm, 10);
  key += ',' + format_value(p.density, 10);
  key += ',' + optional_value(p.h_MM);
  key += ',' + optional_value(p.h_mm);
  key += ',' + optional_value(p.gamma_M);
  key += ',' + optional_value(p.gamma_m);
  key += ',' + std::to_string(rep);
  key += ',' + std::to_string(p.seed);
  return key;
}

std::string format_row(const ResultRow& row) {
  std::string line = cell_key(row.params, row.rep);
  line += ',';
  line += algorithm_name(row.algorithm);
  line += ',';
  line += scope_name(row.scope);
  line += ',';
  if (row.scope == Scope::Failed) {
    line += ",,,,error";
    return line;
  }
  if (row.scope == Scope::Local) line += format_value(row.k, 10);
  line += ',' + format_value(row.gini) + ',' + format_value(row.fraction_minority) + ',' +
          format_value(row.error) + ',';
  line += region_name(row.region);
  return line;
}

std::vector<ResultRow> summary_rows(const GeneratorParams& params, std::size_t rep, Algorithm algorithm,
                                    const DisparitySummary& summary) {
  std::vector<ResultRow> rows;
  ResultRow global;
  global.params = params;
  global.rep = rep;
  global.algorithm = algorithm;
  global.scope = Scope::Global;
  global.gini = summary.gini_global;
  global.fraction_minority = summary.baseline;
  global.error = summary.me_global;
  global.region = summary.region_global;
  rows.push_back(global);
  for (const auto& r : summary.local) {
    ResultRow local = global;
    local.scope = Scope::Local;
    local.k = r.k;
    local.gini = r.gini_local;
    local.fraction_minority = r.fraction_minority;
    local.error = r.error_local;
    local.region = r.region;
    rows.push_back(local);
  }
  return rows;
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

std::size_t Table::column(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  std::string available;
  for (const auto& h : header) available += (available.empty() ? "" : ", ") + h;
  throw Error("unknown column '" + std::string(name) + "'; available columns: " + available);
}

Table read_table(std::istream& in, const std::string& name) {
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(name, 1, "missing header");
  strip_cr(line);
  for (auto f : split(line, ',')) t.header.emplace_back(f);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != t.header.size()) throw ParseError(name, lineno, "wrong number of fields");
    std::vector<std::string> row;
    row.reserve(fields.size());
    for (auto f : fields) row.emplace_back(f);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_table(in, path.string());
}

}  // namespace rankfair::harness
