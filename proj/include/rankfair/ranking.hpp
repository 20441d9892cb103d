#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankfair/graph.hpp"

namespace rankfair {

enum class Algorithm { PageRank, WTF };

std::string_view algorithm_name(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view name);

struct RankScores {
  Algorithm algorithm = Algorithm::PageRank;
  std::vector<double> scores;
};

struct PageRankOptions {
  double alpha = 0.85;
  double tol = 1e-10;
  std::size_t max_iter = 1000;
};

struct SalsaOptions {
  double tol = 1e-8;
  std::size_t max_iter = 1000;
};

struct WtfOptions {
  std::size_t cot_size = 100;
  std::size_t topk = 10;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 1;
  PageRankOptions ppr;
  SalsaOptions salsa;
};

/// Damped random walk with uniform teleportation. Dangling mass is spread
/// uniformly over all nodes. Scores sum to 1. Throws ConvergenceError.
RankScores pagerank(const DirectedGraph& graph, const PageRankOptions& options = {});

/// Random walk with restart at `source`; teleport and dangling mass both return to it.
std::vector<double> personalized_pagerank(const DirectedGraph& graph, NodeId source,
                                          const PageRankOptions& options = {});

/// Up to `size` nodes with the highest personalized PageRank from `source`,
/// excluding `source` and zero-score nodes.
std::vector<NodeId> circle_of_trust(const DirectedGraph& graph, NodeId source, std::size_t size,
                                    const PageRankOptions& options = {});

/// SALSA authority ranking on the bipartite graph hubs = `circle`,
/// authorities = out-neighbors of the hubs. Never returns `source` or one of
/// its existing out-neighbors.
std::vector<NodeId> salsa_recommend(const DirectedGraph& graph, NodeId source, std::span<const NodeId> circle,
                                    std::size_t topk = 10, const SalsaOptions& options = {});

/// SALSA authority scores indexed by node id (0 for non-authorities); exposed for testing.
std::vector<double> salsa_authority_scores(const DirectedGraph& graph, std::span<const NodeId> circle,
                                           const SalsaOptions& options = {});

/// Who-To-Follow counts: how many users' top-k recommendation lists contain each node.
RankScores wtf(const DirectedGraph& graph, const WtfOptions& options = {});

/// Scores within this relative distance rank as ties (then by ascending id).
inline constexpr double kScoreTieTolerance = 1e-9;

/// Node ids sorted by descending score; near-equal scores (kScoreTieTolerance,
/// relative) are ordered by ascending id. Zero scores are dropped when
/// `drop_zero` is set.
std::vector<NodeId> order_by_score(std::span<const double> scores, bool drop_zero = false);

/// `node_id,score` in descending score order, ties by ascending id.
void write_scores(const RankScores& scores, std::ostream& out);
RankScores read_scores(std::istream& in, Algorithm algorithm, const std::string& name = "scores");

}  // namespace rankfair
