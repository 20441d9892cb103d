#include "rankfair/graph.hpp"

#include <algorithm>
#include <string>

#include "rankfair/error.hpp"

namespace rankfair {

namespace {

Csr make_csr(std::size_t n, std::span<const Edge> edges, bool by_source) {
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++csr.offsets[(by_source ? e.source : e.target) + 1];
  for (std::size_t v = 0; v < n; ++v) csr.offsets[v + 1] += csr.offsets[v];
  csr.indices.resize(edges.size());
  std::vector<std::uint32_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const auto& e : edges) {
    const NodeId row = by_source ? e.source : e.target;
    csr.indices[cursor[row]++] = by_source ? e.target : e.source;
  }
  for (std::size_t v = 0; v < n; ++v)
    std::sort(csr.indices.begin() + csr.offsets[v], csr.indices.begin() + csr.offsets[v + 1]);
  return csr;
}

}  // namespace

GraphBuilder::GraphBuilder(std::vector<NodeClass> classes, std::vector<double> activities)
    : classes_(std::move(classes)),
      activities_(std::move(activities)),
      in_degree_(classes_.size(), 0),
      out_degree_(classes_.size(), 0) {
  if (!activities_.empty() && activities_.size() != classes_.size())
    throw GraphError("activity vector length " + std::to_string(activities_.size()) +
                     " does not match node count " + std::to_string(classes_.size()));
  for (double a : activities_)
    if (!(a > 0.0)) throw GraphError("activities must be positive");
}

EdgeInsert GraphBuilder::add_edge(NodeId source, NodeId target) {
  const std::size_t n = classes_.size();
  if (source >= n || target >= n)
    throw GraphError("edge (" + std::to_string(source) + "," + std::to_string(target) +
                     ") references a node outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
  if (source == target) throw GraphError("self-loop on node " + std::to_string(source));
  if (!edge_keys_.insert(key(source, target)).second) return EdgeInsert::Duplicate;
  edges_.push_back({source, target});
  ++out_degree_[source];
  ++in_degree_[target];
  return EdgeInsert::Added;
}

bool GraphBuilder::has_edge(NodeId source, NodeId target) const {
  return edge_keys_.contains(key(source, target));
}

DirectedGraph GraphBuilder::build() && {
  DirectedGraph g;
  const std::size_t n = classes_.size();
  g.out_ = make_csr(n, edges_, true);
  g.in_ = make_csr(n, edges_, false);
  g.classes_ = std::move(classes_);
  g.activities_ = std::move(activities_);
  g.edges_ = std::move(edges_);
  edge_keys_.clear();
  return g;
}

bool DirectedGraph::has_edge(NodeId source, NodeId target) const {
  if (source >= num_nodes()) return false;
  const auto row = out_neighbors(source);
  return std::binary_search(row.begin(), row.end(), target);
}

std::size_t minority_count(std::span<const NodeClass> classes) noexcept {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), NodeClass::Minority));
}

double minority_fraction(std::span<const NodeClass> classes) {
  if (classes.empty()) throw GraphError("minority fraction of an empty graph is undefined");
  return static_cast<double>(minority_count(classes)) / static_cast<double>(classes.size());
}

double minority_fraction(const DirectedGraph& graph) { return minority_fraction(graph.classes()); }

}  // namespace rankfair
