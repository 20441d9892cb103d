#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rankfair/harness/results.hpp"
#include "rankfair/metrics.hpp"

namespace rankfair::harness {

struct HeatmapRequest {
  std::string x = "hmm";
  std::string y = "hMM";
  std::vector<std::string> facets{"fm"};
  std::string algorithm = "PageRank";
  /// "global" or "local"; defaults to local when a dimension is k.
  std::optional<std::string> scope;
  double beta = 0.05;
  std::filesystem::path output_dir = ".";
  std::string prefix = "heatmap";
};

/// Cell aggregate: mean gini and mean error over matching rows, and the
/// region of those means.
struct HeatmapCell {
  std::string x, y;
  double gini = 0.0;
  double error = 0.0;
  std::size_t count = 0;
  Region region = Region::V;
};

struct HeatmapFacet {
  std::string label;  // "fm=0.1;..." or empty without facets
  std::vector<std::string> xs, ys;
  std::vector<HeatmapCell> cells;
};

/// Groups rows by facet and (x, y). Throws Error listing the available
/// columns when a dimension is missing.
std::vector<HeatmapFacet> aggregate_heatmap(const Table& results, const HeatmapRequest& request);

std::string render_svg(const HeatmapFacet& facet, const HeatmapRequest& request);

/// One SVG per facet; returns the written paths.
std::vector<std::filesystem::path> report_heatmap(const Table& results, const HeatmapRequest& request);

/// Fill color for a region (dark rows for high inequality, red/green/blue by inequity).
std::string_view region_color(Region r) noexcept;

}  // namespace rankfair::harness
