#include "rankfair/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "rankfair/error.hpp"
#include "rankfair/text.hpp"

namespace rankfair::harness {

namespace {

ResultRow error_row(const Cell& cell, Algorithm algorithm, std::string message) {
  ResultRow row;
  row.params = cell.params;
  row.rep = cell.rep;
  row.algorithm = algorithm;
  row.scope = Scope::Failed;
  row.message = std::move(message);
  return row;
}

RankScores rank_with(const DirectedGraph& graph, Algorithm algorithm, const SweepConfig& config,
                     unsigned wtf_workers) {
  if (algorithm == Algorithm::PageRank) return pagerank(graph);
  WtfOptions options;
  options.cot_size = config.cot_size;
  options.topk = config.topk;
  options.workers = wtf_workers;
  return wtf(graph, options);
}

// Existing results grouped by cell key, preserving line text.
struct PriorCell {
  std::map<std::string, std::vector<std::string>> lines_by_algorithm;
  bool has_error = false;
};

std::map<std::string, PriorCell> read_prior(const std::filesystem::path& path) {
  std::map<std::string, PriorCell> prior;
  std::ifstream in(path);
  if (!in) return prior;
  std::string line;
  if (!std::getline(in, line)) return prior;
  strip_cr(line);
  if (line != kResultsHeader) return prior;
  while (std::getline(in, line)) {
    strip_cr(line);
    auto fields = split(line, ',');
    if (fields.size() != 17) continue;
    std::string key;
    for (std::size_t i = 0; i < 10; ++i) key += (i ? "," : "") + std::string(fields[i]);
    auto& cell = prior[key];
    if (fields[11] == "error") cell.has_error = true;
    cell.lines_by_algorithm[std::string(fields[10])].push_back(line);
  }
  return prior;
}

// Complete means every requested algorithm has its global row and one row per k.
std::optional<std::vector<std::string>> reusable(const PriorCell& cell, const SweepConfig& config) {
  if (cell.has_error) return std::nullopt;
  std::vector<std::string> lines;
  for (auto a : config.algorithms) {
    auto it = cell.lines_by_algorithm.find(std::string(algorithm_name(a)));
    if (it == cell.lines_by_algorithm.end() || it->second.size() != 1 + config.k_grid.size()) return std::nullopt;
    lines.insert(lines.end(), it->second.begin(), it->second.end());
  }
  return lines;
}

void check_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto probe = dir / ".write-probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok") || !out.flush()) throw Error("output directory not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_metadata(const std::filesystem::path& path, const SweepConfig& config, const SweepOutcome& outcome) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "software=rankfair " << kVersion << '\n';
  out << "created=" << timestamp() << '\n';
  out << "cells=" << outcome.cells << '\n';
  out << "reused_cells=" << outcome.reused << '\n';
  out << "computed_cells=" << outcome.computed << '\n';
  out << "error_cells=" << outcome.error_cells << '\n';
  out << "rows=" << outcome.rows << '\n';
  out << "cell_seed=base_seed xor stable_hash(canonical parameters + \"|rep=\" + rep)\n";
  out << "topk_count=ceil(k*n/100) clamped to [1,n]\n";
  out << "rank_ties=descending score, ascending node id\n";
  out << "wtf_ties=relative tolerance " << format_value(kScoreTieTolerance) << ", ascending node id\n";
  out << "baseline=realized minority fraction\n";
  out << "regions=computed per row; figures use regions of mean (gini, error) per cell\n";
  out << "k_grid=";
  for (std::size_t i = 0; i < config.k_grid.size(); ++i) out << (i ? ";" : "") << format_value(config.k_grid[i]);
  out << '\n';
  out << "config=" << config_to_json(config) << '\n';
}

}  // namespace

std::vector<ResultRow> run_cell(const Cell& cell, const SweepConfig& config, unsigned wtf_workers) {
  std::vector<ResultRow> rows;
  DirectedGraph graph;
  try {
    graph = generate(cell.params);
  } catch (const std::exception& e) {
    for (auto a : config.algorithms) rows.push_back(error_row(cell, a, e.what()));
    return rows;
  }
  MetricsConfig metrics;
  metrics.k_grid = config.k_grid;
  metrics.beta = config.beta;
  for (auto a : config.algorithms) {
    try {
      const auto scores = rank_with(graph, a, config, wtf_workers);
      const auto summary = summarize(rank_nodes(scores.scores, graph.classes()), metrics);
      auto part = summary_rows(cell.params, cell.rep, a, summary);
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (const std::exception& e) {
      rows.push_back(error_row(cell, a, e.what()));
    }
  }
  return rows;
}

SweepOutcome run_sweep(const SweepConfig& config, const SweepOptions& options) {
  config.validate();
  SweepOutcome outcome;
  outcome.results_file = config.output_dir / kResultsFileName;
  outcome.metadata_file = config.output_dir / kMetadataFileName;
  check_writable(config.output_dir);

  const auto cells = expand_cells(config);
  outcome.cells = cells.size();
  const auto prior = options.resume ? read_prior(outcome.results_file) : std::map<std::string, PriorCell>{};

  std::vector<std::vector<std::string>> lines(cells.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto it = prior.find(cell_key(cells[i].params, cells[i].rep));
    if (it != prior.end()) {
      if (auto reused = reusable(it->second, config)) {
        lines[i] = std::move(*reused);
        ++outcome.reused;
        continue;
      }
    }
    pending.push_back(i);
  }

  unsigned workers = config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(pending.size(), 1)));
  std::vector<char> failed(cells.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < pending.size();) {
      const auto i = pending[j];
      // Lone workers hand their thread budget to WTF.
      auto rows = run_cell(cells[i], config, workers == 1 ? config.workers : 1);
      for (const auto& r : rows) {
        lines[i].push_back(format_row(r));
        if (r.scope == Scope::Failed) failed[i] = 1;
      }
      const auto d = done.fetch_add(1) + 1;
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(d, pending.size());
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  outcome.computed = pending.size();
  outcome.error_cells = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));

  const auto tmp = outcome.results_file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << kResultsHeader << '\n';
    for (const auto& cell_lines : lines)
      for (const auto& l : cell_lines) {
        out << l << '\n';
        ++outcome.rows;
      }
    if (!out.flush()) throw Error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, outcome.results_file);
  write_metadata(outcome.metadata_file, config, outcome);
  return outcome;
}

}  // namespace rankfair::harness
