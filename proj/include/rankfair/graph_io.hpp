#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rankfair/graph.hpp"

namespace rankfair {

// Nodes file: header `node_id,class[,activity]`, class token `M` or `m`.
// Edges file: header `source,target`, one directed edge per line.

DirectedGraph load_graph(const std::filesystem::path& nodes_file,
                         const std::filesystem::path& edges_file);

DirectedGraph read_graph(std::istream& nodes, std::istream& edges,
                         const std::string& nodes_name = "nodes",
                         const std::string& edges_name = "edges");

void save_graph(const DirectedGraph& graph, const std::filesystem::path& nodes_file,
                const std::filesystem::path& edges_file);

void write_nodes(const DirectedGraph& graph, std::ostream& out);
void write_edges(const DirectedGraph& graph, std::ostream& out);

char class_token(NodeClass c) noexcept;

}  // namespace rankfair
