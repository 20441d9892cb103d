#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "rankfair/graph.hpp"

namespace rankfair {

/// Edge counts by (source class, target class) and each group's share of
/// nodes and of total in-degree. Arrays are indexed with index_of(NodeClass).
struct EmpiricalMixing {
  std::array<std::array<std::uint64_t, 2>, 2> edges{};
  std::array<std::uint64_t, 2> in_degree{};
  std::array<std::size_t, 2> nodes{};

  std::uint64_t total_edges() const noexcept;
  std::uint64_t out_edges(NodeClass c) const noexcept;

  /// e_aa / (e_aa + e_ab). Throws InferenceError when the group has no out-edges.
  double p_same(NodeClass c) const;
  /// Group share of total in-degree.
  double in_degree_share(NodeClass c) const;
  double group_fraction(NodeClass c) const;
};

/// Throws InferenceError on a graph without edges.
EmpiricalMixing empirical_mixing(const DirectedGraph& graph);

/// Probability that an edge from group a lands in group a, given in-degree
/// share c_a and homophily h_aa (cross-group weight 1 - h_aa):
///   h_aa c_a / (h_aa c_a + (1 - h_aa)(1 - c_a)).
/// Throws InferenceError when the denominator vanishes.
double predict_paa(double c_a, double h_aa);

/// e_same ln q + e_cross ln(1 - q), with 0 ln 0 = 0 and -inf outside support.
double binomial_log_likelihood(std::uint64_t same, std::uint64_t cross, double q);

struct GridFit {
  double h = 0.0;
  double log_likelihood = 0.0;
};

/// Maximizes the binomial likelihood over h in {0.00, 0.01, ..., 1.00};
/// ties resolve to the smaller h. `model(h)` gives the predicted same-group
/// probability and may return nullopt where it is undefined.
GridFit grid_search_homophily(std::uint64_t same, std::uint64_t cross,
                              const std::function<std::optional<double>(double)>& model);

struct HomophilyEstimate {
  double h_MM = 0.0;
  double h_mm = 0.0;
  double log_likelihood_M = 0.0;
  double log_likelihood_m = 0.0;
};

HomophilyEstimate infer_homophily_mle(const DirectedGraph& graph);

/// Continuous Hill/MLE exponent 1 + n / sum ln(x / x_min) over samples >= x_min.
/// `discrete` shifts the reference to x_min - 0.5 for integer data.
/// Throws InferenceError with fewer than 50 usable samples or a degenerate sum.
double fit_powerlaw_exponent(std::span<const double> samples, double x_min, bool discrete = false);

/// In-degree tail exponent sigma per group (p(k) ~ k^-sigma) and the growth
/// exponent theta = 1 / (sigma - 1).
struct ExponentEstimates {
  std::array<double, 2> sigma{};
  std::array<double, 2> theta{};
  std::array<double, 2> x_min{};
};

struct ExponentHomophilyEstimate {
  double h_MM = 0.0;
  double h_mm = 0.0;
  ExponentEstimates exponents;
};

/// `x_min` defaults per group to its smallest in-degree >= 1.
ExponentEstimates fit_in_degree_exponents(const DirectedGraph& graph, std::optional<double> x_min = std::nullopt);

ExponentHomophilyEstimate infer_homophily_from_exponents(const DirectedGraph& graph,
                                                         std::optional<double> x_min = std::nullopt);

}  // namespace rankfair
