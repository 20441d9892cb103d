#include "rankfair/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rankfair/error.hpp"
#include "rankfair/simd/kernels.hpp"

namespace rankfair {

double gini(std::span<const double> values) {
  if (values.empty()) throw MetricsError("gini of an empty list");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!(v >= 0.0)) throw MetricsError("gini requires nonnegative values");
  std::sort(sorted.begin(), sorted.end());
  const auto& k = simd::active_kernels();
  const double total = k.sum(sorted);
  if (!(total > 0.0)) throw MetricsError("gini is undefined when every value is zero");
  const double g = k.rank_weighted_sum(sorted) / (static_cast<double>(sorted.size()) * total);
  return std::max(0.0, g);
}

RankedList rank_nodes(std::span<const double> scores, std::span<const NodeClass> classes) {
  if (scores.size() != classes.size()) throw MetricsError("score and class arrays differ in length");
  RankedList out;
  out.order.resize(scores.size());
  std::iota(out.order.begin(), out.order.end(), 0U);
  std::sort(out.order.begin(), out.order.end(), [&](NodeId a, NodeId b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  });
  out.scores.reserve(scores.size());
  out.classes.reserve(scores.size());
  for (NodeId v : out.order) {
    out.scores.push_back(scores[v]);
    out.classes.push_back(classes[v]);
  }
  return out;
}

std::size_t topk_count(std::size_t n, double k) {
  if (!(k > 0.0 && k <= 100.0)) throw MetricsError("k must lie in (0, 100]");
  // The epsilon absorbs representation error in k (e.g. 15 * 20 / 100).
  const double raw = std::ceil(k * static_cast<double>(n) / 100.0 - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(raw, 1.0)), 1, std::max<std::size_t>(n, 1));
}

double topk_minority_fraction(const RankedList& ranked, double k) {
  if (ranked.size() == 0) throw MetricsError("empty ranking");
  const std::size_t top = topk_count(ranked.size(), k);
  const auto count = std::count(ranked.classes.begin(), ranked.classes.begin() + top, NodeClass::Minority);
  return static_cast<double>(count) / static_cast<double>(top);
}

double local_gini(const RankedList& ranked, double k) {
  if (ranked.size() == 0) throw MetricsError("empty ranking");
  const std::size_t top = topk_count(ranked.size(), k);
  return gini(std::span<const double>(ranked.scores.data(), top));
}

double mean_error(std::span<const double> fractions, double baseline) {
  if (fractions.empty()) throw MetricsError("mean error needs at least one k");
  double s = 0.0;
  for (double f : fractions) s += f - baseline;
  return s / static_cast<double>(fractions.size());
}

std::string_view region_name(Region r) noexcept {
  static constexpr std::string_view names[] = {"I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX"};
  return names[static_cast<int>(r) - 1];
}

Region classify_region(double gini_value, double me, double beta) {
  const int row = gini_value >= 0.6 ? 0 : (gini_value >= 0.3 ? 1 : 2);
  const int col = me < -beta ? 0 : (me > beta ? 2 : 1);
  return static_cast<Region>(row * 3 + col + 1);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t p = i; p < j; ++p) ranks[order[p]] = mid;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricsError("spearman inputs differ in length");
  if (x.size() < 3) throw MetricsError("spearman needs at least three points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  // Mean rank is (n+1)/2 regardless of ties.
  const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean, dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricsError("spearman undefined: a ranking has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> default_k_grid() {
  std::vector<double> grid;
  for (int k = 5; k <= 100; k += 5) grid.push_back(k);
  return grid;
}

DisparitySummary summarize(const RankedList& ranked, const MetricsConfig& config) {
  if (ranked.size() == 0) throw MetricsError("empty ranking");
  if (config.k_grid.empty()) throw MetricsError("k grid is empty");
  DisparitySummary s;
  s.beta = config.beta;
  s.baseline = config.baseline ? *config.baseline : minority_fraction(ranked.classes);
  s.gini_global = gini(ranked.scores);
  std::vector<double> fractions;
  for (double k : config.k_grid) {
    TopkRecord r;
    r.k = k;
    r.fraction_minority = topk_minority_fraction(ranked, k);
    r.gini_local = local_gini(ranked, k);
    r.error_local = r.fraction_minority - s.baseline;
    r.region = classify_region(r.gini_local, r.error_local, config.beta);
    fractions.push_back(r.fraction_minority);
    s.local.push_back(r);
  }
  s.me_global = mean_error(fractions, s.baseline);
  s.region_global = classify_region(s.gini_global, s.me_global, config.beta);
  return s;
}

}  // namespace rankfair
