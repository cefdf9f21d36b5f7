#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "htile/error.hpp"
#include "htile/graph.hpp"

namespace htile {

using json = nlohmann::json;

namespace detail {

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline long long read_int(const json& node, const std::string& where) {
  if (!node.is_number_integer()) throw ParseError(where + ": expected an integer");
  return node.get<long long>();
}

inline Edge read_edge(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2) throw ParseError(where + ": expected [u, v]");
  long long u = read_int(node[0], where + "[0]");
  long long v = read_int(node[1], where + "[1]");
  if (u < 0 || v < 0) throw ParseError(where + ": negative vertex index");
  if (u == v) throw ParseError(where + ": self-loop on vertex " + std::to_string(u));
  return {static_cast<Vertex>(u), static_cast<Vertex>(v)};
}

inline const json& member(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace detail

// Reads a whole file, or stdin when path is empty or "-".
inline std::string read_text(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// {"n": int, "edges": [[u, v], ...]}
inline Graph graph_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("graph document must be a JSON object");
  long long n = detail::read_int(detail::member(doc, "n"), "n");
  if (n < 0) throw ParseError("n: must be non-negative");
  const json& edges_node = detail::member(doc, "edges");
  if (!edges_node.is_array()) throw ParseError("edges: expected an array");
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (std::size_t k = 0; k < edges_node.size(); ++k) {
    std::string where = "edges[" + std::to_string(k) + "]";
    Edge e = detail::read_edge(edges_node[k], where);
    if (e.first >= static_cast<Vertex>(n) || e.second >= static_cast<Vertex>(n)) {
      throw ParseError(where + ": dangling vertex index (n = " + std::to_string(n) + ")");
    }
    if (seen[e.first][e.second]) throw ParseError(where + ": duplicate edge");
    seen[e.first][e.second] = seen[e.second][e.first] = true;
    edges.push_back(e);
  }
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

inline Graph parse_graph(const std::string& text) { return graph_from_json(detail::parse_document(text)); }

// {"r": int, "classes": [[v, ...], ...], "edges": [[u, v], ...]}. Vertex
// labels may be any distinct non-negative integers; they are renumbered
// 0..N-1 in increasing label order. Unknown top-level keys are ignored.
inline MultipartiteGraph multipartite_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("multipartite document must be a JSON object");
  long long r = detail::read_int(detail::member(doc, "r"), "r");
  if (r < 2) throw ParseError("r: must be at least 2");
  const json& classes_node = detail::member(doc, "classes");
  if (!classes_node.is_array()) throw ParseError("classes: expected an array");
  if (classes_node.size() != static_cast<std::size_t>(r)) {
    throw ParseError("classes: expected " + std::to_string(r) + " classes, found " +
                     std::to_string(classes_node.size()));
  }
  std::map<long long, std::size_t> class_of_label;
  for (std::size_t i = 0; i < classes_node.size(); ++i) {
    std::string where = "classes[" + std::to_string(i) + "]";
    if (!classes_node[i].is_array()) throw ParseError(where + ": expected an array");
    for (std::size_t k = 0; k < classes_node[i].size(); ++k) {
      std::string at = where + "[" + std::to_string(k) + "]";
      long long label = detail::read_int(classes_node[i][k], at);
      if (label < 0) throw ParseError(at + ": negative vertex index");
      if (!class_of_label.emplace(label, i).second) {
        throw ParseError(at + ": vertex " + std::to_string(label) + " listed in two classes");
      }
    }
  }
  std::map<long long, Vertex> index_of;
  for (const auto& [label, cls] : class_of_label) index_of.emplace(label, index_of.size());

  std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(r));
  for (const auto& [label, cls] : class_of_label) classes[cls].push_back(index_of[label]);

  const json& edges_node = detail::member(doc, "edges");
  if (!edges_node.is_array()) throw ParseError("edges: expected an array");
  std::vector<Edge> edges;
  std::map<Edge, std::size_t> seen;
  for (std::size_t k = 0; k < edges_node.size(); ++k) {
    std::string where = "edges[" + std::to_string(k) + "]";
    Edge raw = detail::read_edge(edges_node[k], where);
    auto u = index_of.find(static_cast<long long>(raw.first));
    auto v = index_of.find(static_cast<long long>(raw.second));
    if (u == index_of.end() || v == index_of.end()) {
      throw ParseError(where + ": dangling vertex index (not in any class)");
    }
    if (class_of_label[u->first] == class_of_label[v->first]) {
      throw ParseError(where + ": edge inside class " + std::to_string(class_of_label[u->first]));
    }
    Edge e{std::min(u->second, v->second), std::max(u->second, v->second)};
    if (!seen.emplace(e, k).second) throw ParseError(where + ": duplicate edge");
    edges.push_back(e);
  }
  return MultipartiteGraph(std::move(classes), std::move(edges));
}

inline MultipartiteGraph parse_multipartite(const std::string& text) {
  return multipartite_from_json(detail::parse_document(text));
}

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

inline json to_json(const MultipartiteGraph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.graph().edges()) edges.push_back({u, v});
  return {{"r", g.r()}, {"classes", g.classes()}, {"edges", edges}};
}

inline std::string serialize(const MultipartiteGraph& g) { return to_json(g).dump(); }
inline std::string serialize(const Graph& g) { return to_json(g).dump(); }

}  // namespace htile
