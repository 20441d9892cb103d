#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "rankfair/harness/config.hpp"
#include "rankfair/harness/results.hpp"

namespace rankfair::harness {

/// Generate, rank with each algorithm, summarize. A failure produces one
/// error-scope row per affected algorithm instead of throwing.
std::vector<ResultRow> run_cell(const Cell& cell, const SweepConfig& config, unsigned wtf_workers = 1);

struct SweepOptions {
  /// Reuse rows of cells already present in an existing results file.
  bool resume = true;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct SweepOutcome {
  std::filesystem::path results_file;
  std::filesystem::path metadata_file;
  std::size_t cells = 0;
  std::size_t reused = 0;
  std::size_t computed = 0;
  std::size_t error_cells = 0;
  std::size_t rows = 0;
};

/// Writes <output_dir>/results.csv in canonical cell order and
/// <output_dir>/metadata.txt. Throws Error before running any cell when the
/// output directory is not writable.
SweepOutcome run_sweep(const SweepConfig& config, const SweepOptions& options = {});

inline constexpr const char* kResultsFileName = "results.csv";
inline constexpr const char* kMetadataFileName = "metadata.txt";
inline constexpr const char* kVersion = "1.0.0";

}  // namespace rankfair::harness
