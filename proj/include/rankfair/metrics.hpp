#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rankfair/graph.hpp"

namespace rankfair {

/// Gini coefficient via the sorted identity; equals the mean absolute
/// difference over all ordered pairs divided by twice the mean. Throws
/// MetricsError on empty or all-zero input.
double gini(std::span<const double> values);

/// Nodes in descending score order, ties by ascending id, with parallel score
/// and class arrays.
struct RankedList {
  std::vector<NodeId> order;
  std::vector<double> scores;
  std::vector<NodeClass> classes;

  std::size_t size() const noexcept { return order.size(); }
};

RankedList rank_nodes(std::span<const double> scores, std::span<const NodeClass> classes);

/// ceil(k * n / 100), clamped to [1, n] for k in (0, 100].
std::size_t topk_count(std::size_t n, double k);

double topk_minority_fraction(const RankedList& ranked, double k);
double local_gini(const RankedList& ranked, double k);

/// Mean of (fraction - baseline) over the grid.
double mean_error(std::span<const double> fractions, double baseline);

enum class Region { I = 1, II, III, IV, V, VI, VII, VIII, IX };

std::string_view region_name(Region r) noexcept;

/// Rows by Gini band (>= 0.6, [0.3, 0.6), < 0.3), columns by mean error
/// (< -beta under, |me| <= beta fair, > beta over).
Region classify_region(double gini, double me, double beta = 0.05);

/// Pearson correlation of mid-ranks. Throws MetricsError on unequal lengths,
/// fewer than three points, or a constant ranking.
double spearman(std::span<const double> x, std::span<const double> y);

/// Mid-ranks (1-based, ties share their mean rank).
std::vector<double> average_ranks(std::span<const double> values);

std::vector<double> default_k_grid();

struct MetricsConfig {
  std::vector<double> k_grid = default_k_grid();
  double beta = 0.05;
  /// Defaults to the realized minority fraction.
  std::optional<double> baseline;
};

struct TopkRecord {
  double k = 0.0;
  double fraction_minority = 0.0;
  double gini_local = 0.0;
  double error_local = 0.0;
  Region region = Region::V;
};

struct DisparitySummary {
  double gini_global = 0.0;
  double me_global = 0.0;
  Region region_global = Region::V;
  double beta = 0.05;
  double baseline = 0.0;
  std::vector<TopkRecord> local;
};

DisparitySummary summarize(const RankedList& ranked, const MetricsConfig& config = {});

}  // namespace rankfair
