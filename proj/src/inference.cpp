#include "rankfair/inference.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "rankfair/error.hpp"

namespace rankfair {

namespace {

constexpr NodeClass kClasses[] = {NodeClass::Majority, NodeClass::Minority};
constexpr std::size_t kMinTailSamples = 50;

const char* class_label(NodeClass c) { return c == NodeClass::Majority ? "majority" : "minority"; }

}  // namespace

std::uint64_t EmpiricalMixing::total_edges() const noexcept {
  return edges[0][0] + edges[0][1] + edges[1][0] + edges[1][1];
}

std::uint64_t EmpiricalMixing::out_edges(NodeClass c) const noexcept {
  const auto& row = edges[index_of(c)];
  return row[0] + row[1];
}

double EmpiricalMixing::p_same(NodeClass c) const {
  const auto out = out_edges(c);
  if (out == 0)
    throw InferenceError(std::string("the ") + class_label(c) + " group has no out-edges; p_same is undefined");
  return static_cast<double>(edges[index_of(c)][index_of(c)]) / static_cast<double>(out);
}

double EmpiricalMixing::in_degree_share(NodeClass c) const {
  const auto total = in_degree[0] + in_degree[1];
  if (total == 0) throw InferenceError("in-degree share undefined without edges");
  return static_cast<double>(in_degree[index_of(c)]) / static_cast<double>(total);
}

double EmpiricalMixing::group_fraction(NodeClass c) const {
  return static_cast<double>(nodes[index_of(c)]) / static_cast<double>(nodes[0] + nodes[1]);
}

EmpiricalMixing empirical_mixing(const DirectedGraph& graph) {
  if (graph.num_edges() == 0) throw InferenceError("cannot estimate mixing on a graph without edges");
  EmpiricalMixing m;
  for (NodeClass c : graph.classes()) ++m.nodes[index_of(c)];
  for (const auto& e : graph.edges()) {
    const auto s = index_of(graph.node_class(e.source));
    const auto t = index_of(graph.node_class(e.target));
    ++m.edges[s][t];
    ++m.in_degree[t];
  }
  return m;
}

double predict_paa(double c_a, double h_aa) {
  if (!(c_a >= 0.0 && c_a <= 1.0) || !(h_aa >= 0.0 && h_aa <= 1.0))
    throw InferenceError("predict_paa inputs must lie in [0,1]");
  const double same = h_aa * c_a;
  const double denom = same + (1.0 - h_aa) * (1.0 - c_a);
  if (!(denom > 0.0)) throw InferenceError("predict_paa: degenerate denominator");
  return same / denom;
}

double binomial_log_likelihood(std::uint64_t same, std::uint64_t cross, double q) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (!(q >= 0.0 && q <= 1.0)) return kNegInf;
  double ll = 0.0;
  if (same > 0) {
    if (q == 0.0) return kNegInf;
    ll += static_cast<double>(same) * std::log(q);
  }
  if (cross > 0) {
    if (q == 1.0) return kNegInf;
    ll += static_cast<double>(cross) * std::log1p(-q);
  }
  return ll;
}

GridFit grid_search_homophily(std::uint64_t same, std::uint64_t cross,
                              const std::function<std::optional<double>(double)>& model) {
  GridFit best{0.0, -std::numeric_limits<double>::infinity()};
  bool found = false;
  for (int step = 0; step <= 100; ++step) {
    const double h = step / 100.0;
    const auto q = model(h);
    if (!q) continue;
    const double ll = binomial_log_likelihood(same, cross, *q);
    if (ll == -std::numeric_limits<double>::infinity()) continue;
    if (!found || ll > best.log_likelihood) {
      best = {h, ll};
      found = true;
    }
  }
  if (!found) throw InferenceError("no homophily value on the grid gives a finite likelihood");
  return best;
}

HomophilyEstimate infer_homophily_mle(const DirectedGraph& graph) {
  const auto mix = empirical_mixing(graph);
  HomophilyEstimate est;
  for (NodeClass c : kClasses) {
    mix.p_same(c);  // surfaces the undefined-conditional error
    const double share = mix.in_degree_share(c);
    const auto& row = mix.edges[index_of(c)];
    const auto fit = grid_search_homophily(row[index_of(c)], row[index_of(other(c))],
                                           [share](double h) -> std::optional<double> {
                                             const double denom = h * share + (1.0 - h) * (1.0 - share);
                                             if (!(denom > 0.0)) return std::nullopt;
                                             return predict_paa(share, h);
                                           });
    if (c == NodeClass::Majority) {
      est.h_MM = fit.h;
      est.log_likelihood_M = fit.log_likelihood;
    } else {
      est.h_mm = fit.h;
      est.log_likelihood_m = fit.log_likelihood;
    }
  }
  return est;
}

double fit_powerlaw_exponent(std::span<const double> samples, double x_min, bool discrete) {
  if (!(x_min > 0.0)) throw InferenceError("x_min must be positive");
  const double reference = discrete ? x_min - 0.5 : x_min;
  if (!(reference > 0.0)) throw InferenceError("x_min must exceed 0.5 for discrete data");
  std::size_t count = 0;
  double log_sum = 0.0;
  for (double x : samples) {
    if (x >= x_min) {
      ++count;
      log_sum += std::log(x / reference);
    }
  }
  if (count < kMinTailSamples)
    throw InferenceError("power-law fit needs at least 50 samples >= x_min, got " + std::to_string(count));
  if (!(log_sum > 0.0)) throw InferenceError("power-law fit diverges: every sample equals x_min");
  return 1.0 + static_cast<double>(count) / log_sum;
}

ExponentEstimates fit_in_degree_exponents(const DirectedGraph& graph, std::optional<double> x_min) {
  ExponentEstimates out;
  for (NodeClass c : kClasses) {
    std::vector<double> degrees;
    double smallest = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < graph.num_nodes(); ++v) {
      if (graph.node_class(v) != c) continue;
      const auto k = static_cast<double>(graph.in_degree(v));
      degrees.push_back(k);
      if (k >= 1.0) smallest = std::min(smallest, k);
    }
    const double xm = x_min ? *x_min : smallest;
    if (!std::isfinite(xm))
      throw InferenceError(std::string("the ") + class_label(c) +
                           " group has no in-degree tail; use the mle estimator");
    double sigma;
    try {
      sigma = fit_powerlaw_exponent(degrees, xm, true);
    } catch (const InferenceError& e) {
      throw InferenceError(std::string("in-degree tail fit failed for the ") + class_label(c) + " group (" +
                           e.what() + "); use the mle estimator");
    }
    if (!(sigma > 1.0))
      throw InferenceError(std::string("in-degree exponent of the ") + class_label(c) +
                           " group is not above 1; use the mle estimator");
    out.sigma[index_of(c)] = sigma;
    out.theta[index_of(c)] = 1.0 / (sigma - 1.0);
    out.x_min[index_of(c)] = xm;
  }
  return out;
}

ExponentHomophilyEstimate infer_homophily_from_exponents(const DirectedGraph& graph, std::optional<double> x_min) {
  const auto mix = empirical_mixing(graph);
  ExponentHomophilyEstimate est;
  est.exponents = fit_in_degree_exponents(graph, x_min);
  for (NodeClass c : kClasses) {
    mix.p_same(c);
    const auto a = index_of(c), b = index_of(other(c));
    const double f_a = mix.group_fraction(c), f_b = mix.group_fraction(other(c));
    const double growth_a = 1.0 - est.exponents.theta[a];
    const double growth_b = 1.0 - est.exponents.theta[b];
    const auto fit = grid_search_homophily(
        mix.edges[a][a], mix.edges[a][b], [=](double h) -> std::optional<double> {
          const double same = f_a * h * growth_b;
          const double denom = same + f_b * (1.0 - h) * growth_a;
          if (denom == 0.0) return std::nullopt;
          return same / denom;
        });
    (c == NodeClass::Majority ? est.h_MM : est.h_mm) = fit.h;
  }
  return est;
}

}  // namespace rankfair
