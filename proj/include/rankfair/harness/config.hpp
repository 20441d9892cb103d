#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rankfair/metrics.hpp"
#include "rankfair/netgen.hpp"
#include "rankfair/ranking.hpp"

namespace rankfair::harness {

struct SweepConfig {
  std::vector<Model> models{Model::DPAH};
  std::size_t n = 2000;
  std::vector<double> fm{0.1, 0.2, 0.3, 0.4, 0.5};
  std::vector<double> h_MM;
  std::vector<double> h_mm;
  /// Activity exponent, applied to both groups.
  std::vector<double> gamma{3.0};
  std::vector<double> density{0.0015};
  double attachment_offset = kDefaultAttachmentOffset;
  std::size_t repetitions = 10;
  std::vector<Algorithm> algorithms{Algorithm::PageRank, Algorithm::WTF};
  std::size_t cot_size = 100;
  std::size_t topk = 10;
  std::vector<double> k_grid = default_k_grid();
  double beta = 0.05;
  std::uint64_t base_seed = 0;
  std::filesystem::path output_dir = "results";
  unsigned workers = 1;

  /// Throws Error when a grid is empty or a value is out of range.
  void validate() const;
};

/// One network to generate: generator parameters (seed filled in) plus the repetition index.
struct Cell {
  GeneratorParams params;
  std::size_t rep = 0;
};

/// base_seed XOR stable_hash(canonical parameters + repetition index).
std::uint64_t cell_seed(std::uint64_t base_seed, const GeneratorParams& params, std::size_t rep);

/// Cells in canonical order: model, fm, d, h_MM, h_mm, gamma, rep. Grids a
/// model does not use collapse to a single entry.
std::vector<Cell> expand_cells(const SweepConfig& config);

/// "paper-main", "paper-s4", "paper-s5". Throws Error for unknown names.
SweepConfig preset(std::string_view name);
std::vector<std::string_view> preset_names();

/// JSON object with SweepConfig fields; an optional "preset" key seeds the
/// defaults. Unknown keys are errors.
SweepConfig parse_config(std::string_view json_text);
SweepConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const SweepConfig& config);

}  // namespace rankfair::harness
