#include "rankfair/ranking.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>

#include "rankfair/error.hpp"
#include "rankfair/simd/kernels.hpp"
#include "rankfair/text.hpp"

namespace rankfair {

namespace {

void check_options(const PageRankOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw Error("alpha must lie in (0,1)");
  if (!(o.tol > 0.0)) throw Error("tolerance must be positive");
}

/// Reachable subgraph from one source, with a pull-style CSR in local ids.
/// Local id 0 is the source.
struct LocalView {
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> indices;
  std::vector<double> inv_out;
  std::vector<double> dangling;
};

LocalView reachable_from(const DirectedGraph& g, NodeId source) {
  constexpr std::uint32_t kUnseen = 0xffffffffU;
  std::vector<std::uint32_t> local(g.num_nodes(), kUnseen);
  LocalView view;
  view.nodes.push_back(source);
  local[source] = 0;
  for (std::size_t head = 0; head < view.nodes.size(); ++head) {
    for (NodeId w : g.out_neighbors(view.nodes[head])) {
      if (local[w] == kUnseen) {
        local[w] = static_cast<std::uint32_t>(view.nodes.size());
        view.nodes.push_back(w);
      }
    }
  }
  const std::size_t m = view.nodes.size();
  view.offsets.assign(m + 1, 0);
  view.inv_out.resize(m);
  view.dangling.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const NodeId v = view.nodes[i];
    for (NodeId w : g.in_neighbors(v))
      if (local[w] != kUnseen) view.indices.push_back(local[w]);
    view.offsets[i + 1] = static_cast<std::uint32_t>(view.indices.size());
    const auto k = g.out_degree(v);
    view.inv_out[i] = k == 0 ? 0.0 : 1.0 / static_cast<double>(k);
    view.dangling[i] = k == 0 ? 1.0 : 0.0;
  }
  return view;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) noexcept {
  return a == Algorithm::PageRank ? "PageRank" : "WTF";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "pagerank") return Algorithm::PageRank;
  if (lower == "wtf") return Algorithm::WTF;
  throw Error("unknown algorithm '" + std::string(name) + "' (expected PageRank or WTF)");
}

RankScores pagerank(const DirectedGraph& graph, const PageRankOptions& options) {
  check_options(options);
  const std::size_t n = graph.num_nodes();
  if (n == 0) throw GraphError("pagerank of an empty graph");
  const auto& k = simd::active_kernels();
  const double alpha = options.alpha;
  const double inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> inv_out(n), dangling(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto d = graph.out_degree(v);
    inv_out[v] = d == 0 ? 0.0 : 1.0 / static_cast<double>(d);
    dangling[v] = d == 0 ? 1.0 : 0.0;
  }
  const auto& in = graph.in_csr();
  std::vector<double> x(n, inv_n), next(n), share(n);
  double residual = 0.0;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    k.multiply(x, inv_out, share);
    k.gather_sum(in.offsets, in.indices, share, next);
    const double lost = k.dot(x, dangling);
    k.scale_shift(next, alpha, (alpha * lost + (1.0 - alpha)) * inv_n);
    residual = k.l1_distance(next, x);
    x.swap(next);
    if (residual < options.tol) {
      const double total = k.sum(x);
      for (auto& v : x) v /= total;
      return {Algorithm::PageRank, std::move(x)};
    }
  }
  throw ConvergenceError("pagerank did not converge", residual, options.max_iter);
}

std::vector<double> personalized_pagerank(const DirectedGraph& graph, NodeId source,
                                          const PageRankOptions& options) {
  check_options(options);
  if (source >= graph.num_nodes()) throw GraphError("source node out of range");
  const auto& k = simd::active_kernels();
  const double alpha = options.alpha;
  const LocalView view = reachable_from(graph, source);
  const std::size_t m = view.nodes.size();

  std::vector<double> x(m, 0.0), next(m), share(m);
  x[0] = 1.0;
  double residual = 0.0;
  bool converged = false;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    k.multiply(x, view.inv_out, share);
    k.gather_sum(view.offsets, view.indices, share, next);
    const double lost = k.dot(x, view.dangling);
    k.scale_shift(next, alpha, 0.0);
    next[0] += alpha * lost + (1.0 - alpha);
    residual = k.l1_distance(next, x);
    x.swap(next);
    if (residual < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("personalized pagerank did not converge", residual, options.max_iter);

  const double total = k.sum(x);
  std::vector<double> scores(graph.num_nodes(), 0.0);
  for (std::size_t i = 0; i < m; ++i) scores[view.nodes[i]] = x[i] / total;
  return scores;
}

std::vector<NodeId> order_by_score(std::span<const double> scores, bool drop_zero) {
  std::vector<NodeId> order;
  order.reserve(scores.size());
  for (NodeId v = 0; v < scores.size(); ++v)
    if (!drop_zero || scores[v] > 0.0) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  });
  // Merge runs that differ only by iteration noise, then order each run by id.
  for (std::size_t start = 0; start < order.size();) {
    const double head = scores[order[start]];
    std::size_t end = start + 1;
    while (end < order.size() && head - scores[order[end]] <= kScoreTieTolerance * std::abs(head)) ++end;
    if (end - start > 1) std::sort(order.begin() + start, order.begin() + end);
    start = end;
  }
  return order;
}

std::vector<NodeId> circle_of_trust(const DirectedGraph& graph, NodeId source, std::size_t size,
                                    const PageRankOptions& options) {
  if (size == 0) throw Error("circle of trust size must be at least 1");
  auto scores = personalized_pagerank(graph, source, options);
  scores[source] = 0.0;
  auto order = order_by_score(scores, true);
  if (order.size() > size) order.resize(size);
  return order;
}

std::vector<double> salsa_authority_scores(const DirectedGraph& graph, std::span<const NodeId> circle,
                                           const SalsaOptions& options) {
  const std::size_t n = graph.num_nodes();
  constexpr std::uint32_t kNone = 0xffffffffU;

  std::vector<NodeId> hubs;
  std::vector<char> is_hub(n, 0);
  for (NodeId h : circle) {
    if (h >= n) throw GraphError("circle of trust references node outside the graph");
    if (!is_hub[h]) {
      is_hub[h] = 1;
      hubs.push_back(h);
    }
  }

  std::vector<std::uint32_t> auth_index(n, kNone);
  std::vector<NodeId> auths;
  std::vector<std::uint32_t> hub_offsets{0}, hub_targets;
  for (NodeId h : hubs) {
    for (NodeId a : graph.out_neighbors(h)) {
      if (auth_index[a] == kNone) {
        auth_index[a] = static_cast<std::uint32_t>(auths.size());
        auths.push_back(a);
      }
      hub_targets.push_back(auth_index[a]);
    }
    hub_offsets.push_back(static_cast<std::uint32_t>(hub_targets.size()));
  }
  std::vector<double> result(n, 0.0);
  const std::size_t edges = hub_targets.size();
  if (edges == 0) return result;

  const std::size_t H = hubs.size();
  const std::size_t A = auths.size();

  // Authority side of the bipartite graph in pull form.
  std::vector<std::uint32_t> auth_offsets(A + 1, 0), auth_sources(edges);
  for (auto a : hub_targets) ++auth_offsets[a + 1];
  for (std::size_t a = 0; a < A; ++a) auth_offsets[a + 1] += auth_offsets[a];
  {
    std::vector<std::uint32_t> cursor(auth_offsets.begin(), auth_offsets.end() - 1);
    for (std::uint32_t h = 0; h < H; ++h)
      for (auto p = hub_offsets[h]; p < hub_offsets[h + 1]; ++p) auth_sources[cursor[hub_targets[p]]++] = h;
  }

  std::vector<double> inv_hub_deg(H), inv_auth_deg(A);
  for (std::size_t h = 0; h < H; ++h) {
    const auto d = hub_offsets[h + 1] - hub_offsets[h];
    inv_hub_deg[h] = d == 0 ? 0.0 : 1.0 / d;
  }
  for (std::size_t a = 0; a < A; ++a) inv_auth_deg[a] = 1.0 / (auth_offsets[a + 1] - auth_offsets[a]);

  // Within a connected component the authority walk is stationary at in-degree over
  // component edges; scaled by the component's edge share that is in-degree over all
  // edges. Starting there keeps structurally tied authorities exactly tied.
  std::vector<double> x(A), next(A), auth_share(A), hub_mass(H), hub_share(H);
  for (std::size_t a = 0; a < A; ++a)
    x[a] = static_cast<double>(auth_offsets[a + 1] - auth_offsets[a]) / static_cast<double>(edges);

  const auto& k = simd::active_kernels();
  double residual = 0.0;
  bool converged = false;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    k.multiply(x, inv_auth_deg, auth_share);
    k.gather_sum(hub_offsets, hub_targets, auth_share, hub_mass);
    k.multiply(hub_mass, inv_hub_deg, hub_share);
    k.gather_sum(auth_offsets, auth_sources, hub_share, next);
    residual = k.l1_distance(next, x);
    x.swap(next);
    if (residual < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError("SALSA did not converge", residual, options.max_iter);
  for (std::size_t a = 0; a < A; ++a) result[auths[a]] = x[a];
  return result;
}

std::vector<NodeId> salsa_recommend(const DirectedGraph& graph, NodeId source, std::span<const NodeId> circle,
                                    std::size_t topk, const SalsaOptions& options) {
  if (source >= graph.num_nodes()) throw GraphError("source node out of range");
  auto scores = salsa_authority_scores(graph, circle, options);
  scores[source] = 0.0;
  for (NodeId w : graph.out_neighbors(source)) scores[w] = 0.0;
  auto order = order_by_score(scores, true);
  if (order.size() > topk) order.resize(topk);
  return order;
}

RankScores wtf(const DirectedGraph& graph, const WtfOptions& options) {
  const std::size_t n = graph.num_nodes();
  if (n < 2) throw GraphError("WTF needs at least two nodes");
  unsigned workers = options.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));

  std::vector<std::vector<std::uint32_t>> partial(workers, std::vector<std::uint32_t>(n, 0));
  std::atomic<std::size_t> next{0};
  auto work = [&](unsigned w) {
    auto& counts = partial[w];
    for (std::size_t u = next++; u < n; u = next++) {
      try {
        const auto source = static_cast<NodeId>(u);
        const auto circle = circle_of_trust(graph, source, options.cot_size, options.ppr);
        if (circle.empty()) continue;
        for (NodeId r : salsa_recommend(graph, source, circle, options.topk, options.salsa)) ++counts[r];
      } catch (const Error&) {
        // A failed user contributes an empty recommendation list.
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  RankScores out{Algorithm::WTF, std::vector<double>(n, 0.0)};
  for (std::size_t v = 0; v < n; ++v) {
    std::uint64_t total = 0;
    for (const auto& counts : partial) total += counts[v];
    out.scores[v] = static_cast<double>(total);
  }
  return out;
}

void write_scores(const RankScores& scores, std::ostream& out) {
  std::vector<NodeId> order(scores.scores.size());
  std::iota(order.begin(), order.end(), 0U);
  const auto& s = scores.scores;
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return s[a] != s[b] ? s[a] > s[b] : a < b; });
  out << "node_id,score\n";
  for (NodeId v : order) out << v << ',' << format_exact(s[v]) << '\n';
}

RankScores read_scores(std::istream& in, Algorithm algorithm, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(name, 1, "missing header");
  strip_cr(line);
  if (line != "node_id,score") throw ParseError(name, 1, "expected header 'node_id,score'");
  std::vector<double> scores;
  std::vector<char> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 2) throw ParseError(name, lineno, "wrong number of fields");
    const auto id = parse_double(f[0]);
    const auto score = parse_double(f[1]);
    if (!id || *id < 0 || *id != std::floor(*id) || *id > 4e9) throw ParseError(name, lineno, "invalid node id");
    if (!score || !(*score >= 0.0)) throw ParseError(name, lineno, "score must be a nonnegative number");
    const auto v = static_cast<std::size_t>(*id);
    if (v >= scores.size()) {
      scores.resize(v + 1, 0.0);
      seen.resize(v + 1, 0);
    }
    if (seen[v]) throw ParseError(name, lineno, "duplicate node id");
    seen[v] = 1;
    scores[v] = *score;
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) throw ParseError(name, lineno, "missing score for node " + std::to_string(v));
  return {algorithm, std::move(scores)};
}

}  // namespace rankfair
