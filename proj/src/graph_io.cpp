#include "rankfair/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "rankfair/error.hpp"
#include "rankfair/text.hpp"

namespace rankfair {

namespace {

std::uint64_t parse_id(std::string_view field, const std::string& file, std::size_t line) {
  std::uint64_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty())
    throw ParseError(file, line, "invalid node id '" + std::string(field) + "'");
  if (v > 0xffffffffULL) throw ParseError(file, line, "node id out of range");
  return v;
}

}  // namespace

char class_token(NodeClass c) noexcept { return c == NodeClass::Minority ? 'm' : 'M'; }

DirectedGraph read_graph(std::istream& nodes, std::istream& edges, const std::string& nodes_name,
                         const std::string& edges_name) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(nodes, line)) throw ParseError(nodes_name, 1, "missing header");
  strip_cr(line);
  bool with_activity = false;
  if (line == "node_id,class,activity") {
    with_activity = true;
  } else if (line != "node_id,class") {
    throw ParseError(nodes_name, 1, "expected header 'node_id,class[,activity]'");
  }

  std::vector<std::optional<NodeClass>> classes;
  std::vector<double> activities;
  while (std::getline(nodes, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != (with_activity ? 3u : 2u))
      throw ParseError(nodes_name, lineno, "wrong number of fields");
    const auto id = parse_id(fields[0], nodes_name, lineno);
    NodeClass cls;
    if (fields[1] == "M") {
      cls = NodeClass::Majority;
    } else if (fields[1] == "m") {
      cls = NodeClass::Minority;
    } else {
      throw ParseError(nodes_name, lineno, "unknown class token '" + std::string(fields[1]) + "'");
    }
    if (id >= classes.size()) {
      classes.resize(id + 1);
      if (with_activity) activities.resize(id + 1, 0.0);
    }
    if (classes[id]) throw ParseError(nodes_name, lineno, "duplicate node id " + std::to_string(id));
    classes[id] = cls;
    if (with_activity) {
      const auto a = parse_double(fields[2]);
      if (!a || !(*a > 0.0)) throw ParseError(nodes_name, lineno, "activity must be a positive number");
      activities[id] = *a;
    }
  }
  std::vector<NodeClass> dense;
  dense.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (!classes[i]) throw ParseError(nodes_name, lineno, "node ids are not dense: missing " + std::to_string(i));
    dense.push_back(*classes[i]);
  }

  GraphBuilder builder(std::move(dense), std::move(activities));
  lineno = 1;
  if (!std::getline(edges, line)) throw ParseError(edges_name, 1, "missing header");
  strip_cr(line);
  if (line != "source,target") throw ParseError(edges_name, 1, "expected header 'source,target'");
  while (std::getline(edges, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 2) throw ParseError(edges_name, lineno, "wrong number of fields");
    const auto s = parse_id(fields[0], edges_name, lineno);
    const auto t = parse_id(fields[1], edges_name, lineno);
    if (s >= builder.num_nodes() || t >= builder.num_nodes())
      throw ParseError(edges_name, lineno,
                       "edge references unknown node " + std::to_string(s >= builder.num_nodes() ? s : t));
    if (s == t) throw ParseError(edges_name, lineno, "self-loop");
    if (builder.add_edge(static_cast<NodeId>(s), static_cast<NodeId>(t)) == EdgeInsert::Duplicate)
      throw ParseError(edges_name, lineno, "duplicate edge");
  }
  return std::move(builder).build();
}

DirectedGraph load_graph(const std::filesystem::path& nodes_file, const std::filesystem::path& edges_file) {
  std::ifstream nodes(nodes_file);
  if (!nodes) throw Error("cannot open " + nodes_file.string());
  std::ifstream edges(edges_file);
  if (!edges) throw Error("cannot open " + edges_file.string());
  return read_graph(nodes, edges, nodes_file.string(), edges_file.string());
}

void write_nodes(const DirectedGraph& graph, std::ostream& out) {
  const bool with_activity = graph.has_activities();
  out << (with_activity ? "node_id,class,activity\n" : "node_id,class\n");
  for (NodeId v = 0; v < graph.num_nodes(); ++v) {
    out << v << ',' << class_token(graph.node_class(v));
    if (with_activity) out << ',' << format_exact(graph.activities()[v]);
    out << '\n';
  }
}

void write_edges(const DirectedGraph& graph, std::ostream& out) {
  out << "source,target\n";
  for (const auto& e : graph.edges()) out << e.source << ',' << e.target << '\n';
}

void save_graph(const DirectedGraph& graph, const std::filesystem::path& nodes_file,
                const std::filesystem::path& edges_file) {
  std::ofstream nodes(nodes_file, std::ios::binary);
  if (!nodes) throw Error("cannot write " + nodes_file.string());
  write_nodes(graph, nodes);
  std::ofstream edges(edges_file, std::ios::binary);
  if (!edges) throw Error("cannot write " + edges_file.string());
  write_edges(graph, edges);
  if (!nodes.flush() || !edges.flush()) throw Error("write failed");
}

}  // namespace rankfair
