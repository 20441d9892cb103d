#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

namespace rankfair {

using NodeId = std::uint32_t;

enum class NodeClass : std::uint8_t { Majority = 0, Minority = 1 };

constexpr NodeClass other(NodeClass c) noexcept {
  return c == NodeClass::Majority ? NodeClass::Minority : NodeClass::Majority;
}

constexpr std::size_t index_of(NodeClass c) noexcept { return static_cast<std::size_t>(c); }

struct Edge {
  NodeId source;
  NodeId target;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Compressed adjacency: neighbors of v are indices[offsets[v] .. offsets[v+1]), sorted.
struct Csr {
  std::vector<std::uint32_t> offsets;
  std::vector<NodeId> indices;

  std::span<const NodeId> row(NodeId v) const {
    return {indices.data() + offsets[v], indices.data() + offsets[v + 1]};
  }
};

enum class EdgeInsert { Added, Duplicate };

class DirectedGraph;

/// Mutable construction surface for DirectedGraph. Single-threaded.
class GraphBuilder {
 public:
  explicit GraphBuilder(std::vector<NodeClass> classes, std::vector<double> activities = {});

  /// Throws GraphError on self-loops and out-of-range ids. A duplicate is not
  /// an error: the edge set is unchanged and Duplicate is returned.
  EdgeInsert add_edge(NodeId source, NodeId target);

  bool has_edge(NodeId source, NodeId target) const;

  std::size_t num_nodes() const noexcept { return classes_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::size_t in_degree(NodeId v) const { return in_degree_.at(v); }
  std::size_t out_degree(NodeId v) const { return out_degree_.at(v); }
  std::span<const std::uint32_t> in_degrees() const noexcept { return in_degree_; }
  std::span<const NodeClass> classes() const noexcept { return classes_; }
  NodeClass node_class(NodeId v) const { return classes_.at(v); }

  DirectedGraph build() &&;

 private:
  static std::uint64_t key(NodeId s, NodeId t) noexcept {
    return (static_cast<std::uint64_t>(s) << 32) | t;
  }

  std::vector<NodeClass> classes_;
  std::vector<double> activities_;
  std::vector<Edge> edges_;
  std::unordered_set<std::uint64_t> edge_keys_;
  std::vector<std::uint32_t> in_degree_;
  std::vector<std::uint32_t> out_degree_;
};

/// Immutable simple digraph with one binary class per node and optional
/// per-node activity. All queries are const; safe to share across threads.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  std::size_t num_nodes() const noexcept { return classes_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  NodeClass node_class(NodeId v) const { return classes_.at(v); }
  std::span<const NodeClass> classes() const noexcept { return classes_; }

  bool has_activities() const noexcept { return !activities_.empty(); }
  std::span<const double> activities() const noexcept { return activities_; }

  /// Edges in insertion order.
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> out_neighbors(NodeId v) const { return out_.row(v); }
  std::span<const NodeId> in_neighbors(NodeId v) const { return in_.row(v); }
  std::size_t out_degree(NodeId v) const { return out_.offsets[v + 1] - out_.offsets[v]; }
  std::size_t in_degree(NodeId v) const { return in_.offsets[v + 1] - in_.offsets[v]; }

  const Csr& out_csr() const noexcept { return out_; }
  const Csr& in_csr() const noexcept { return in_; }

  bool has_edge(NodeId source, NodeId target) const;

 private:
  friend class GraphBuilder;

  std::vector<NodeClass> classes_;
  std::vector<double> activities_;
  std::vector<Edge> edges_;
  Csr out_;
  Csr in_;
};

std::size_t minority_count(std::span<const NodeClass> classes) noexcept;

/// Share of Minority nodes. Throws GraphError on an empty graph.
double minority_fraction(const DirectedGraph& graph);
double minority_fraction(std::span<const NodeClass> classes);

}  // namespace rankfair
