#pragma once

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "htile/error.hpp"

namespace htile {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;
using VertexSet = boost::dynamic_bitset<std::uint64_t>;

// Simple undirected graph on vertices 0..vertex_count-1. Immutable once built.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t vertex_count, std::vector<Edge> edges)
      : vertex_count_(vertex_count), adjacency_(vertex_count, VertexSet(vertex_count)) {
    for (auto& [u, v] : edges) {
      if (u >= vertex_count || v >= vertex_count) {
        throw ContractError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") has an endpoint outside 0.." + std::to_string(vertex_count));
      }
      if (u == v) throw ContractError("self-loop on vertex " + std::to_string(u));
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) {
      throw ContractError("duplicate edge (" + std::to_string(dup->first) + "," +
                          std::to_string(dup->second) + ")");
    }
    for (const auto& [u, v] : edges) {
      adjacency_[u].set(v);
      adjacency_[v].set(u);
    }
    edges_ = std::move(edges);
  }

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }

  // Sorted, each pair (u, v) with u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  bool adjacent(Vertex u, Vertex v) const { return adjacency_[u].test(v); }
  const VertexSet& neighbours(Vertex v) const { return adjacency_[v]; }
  std::size_t degree(Vertex v) const { return adjacency_[v].count(); }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<VertexSet> adjacency_;
};

// r-partite graph with explicit vertex classes. Classes partition 0..N-1 and
// no edge lies inside a class.
class MultipartiteGraph {
 public:
  MultipartiteGraph() = default;

  MultipartiteGraph(std::vector<std::vector<Vertex>> classes, std::vector<Edge> edges) {
    std::size_t total = 0;
    for (const auto& c : classes) total += c.size();
    if (classes.size() < 2) throw ContractError("a multipartite graph needs r >= 2 classes");
    class_of_.assign(total, kUnassigned);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      std::sort(classes[i].begin(), classes[i].end());
      for (Vertex v : classes[i]) {
        if (v >= total) {
          throw ContractError("class " + std::to_string(i) + " lists vertex " + std::to_string(v) +
                              " but classes only cover " + std::to_string(total) + " vertices");
        }
        if (class_of_[v] != kUnassigned) {
          throw ContractError("vertex " + std::to_string(v) + " appears in more than one class");
        }
        class_of_[v] = i;
      }
    }
    for (const auto& [u, v] : edges) {
      if (u < total && v < total && class_of_[u] == class_of_[v] && u != v) {
        throw ContractError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") lies inside class " + std::to_string(class_of_[u]));
      }
    }
    graph_ = Graph(total, std::move(edges));
    classes_ = std::move(classes);
    masks_.assign(classes_.size(), VertexSet(total));
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      for (Vertex v : classes_[i]) masks_[i].set(v);
    }
  }

  std::size_t r() const { return classes_.size(); }
  std::size_t vertex_count() const { return graph_.vertex_count(); }
  const Graph& graph() const { return graph_; }
  const std::vector<std::vector<Vertex>>& classes() const { return classes_; }
  const std::vector<Vertex>& vertex_class(std::size_t i) const { return classes_[i]; }
  std::size_t class_of(Vertex v) const { return class_of_[v]; }
  const VertexSet& class_mask(std::size_t i) const { return masks_[i]; }
  bool adjacent(Vertex u, Vertex v) const { return graph_.adjacent(u, v); }

  std::vector<std::size_t> class_sizes() const {
    std::vector<std::size_t> sizes;
    for (const auto& c : classes_) sizes.push_back(c.size());
    return sizes;
  }

  bool balanced() const {
    return std::all_of(classes_.begin(), classes_.end(),
                       [&](const auto& c) { return c.size() == classes_.front().size(); });
  }

  // Class size when balanced.
  std::size_t n() const { return classes_.empty() ? 0 : classes_.front().size(); }

  friend bool operator==(const MultipartiteGraph& a, const MultipartiteGraph& b) {
    return a.classes_ == b.classes_ && a.graph_ == b.graph_;
  }

 private:
  static constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

  Graph graph_;
  std::vector<std::vector<Vertex>> classes_;
  std::vector<std::size_t> class_of_;
  std::vector<VertexSet> masks_;
};

// delta*(G): least number of neighbours any vertex of V_i has in V_j, over i != j.
inline std::size_t min_multipartite_degree(const MultipartiteGraph& g) {
  for (std::size_t i = 0; i < g.r(); ++i) {
    if (g.vertex_class(i).empty()) {
      throw ContractError("class " + std::to_string(i) + " is empty");
    }
  }
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t j = 0; j < g.r(); ++j) {
      if (j == g.class_of(v)) continue;
      best = std::min(best, (g.graph().neighbours(v) & g.class_mask(j)).count());
    }
  }
  return best;
}

// Clone k of vertex v becomes vertex v*m + k.
inline MultipartiteGraph blow_up(const MultipartiteGraph& g, std::size_t m) {
  detail::require(m >= 1, "blow-up factor must be positive");
  std::vector<std::vector<Vertex>> classes(g.r());
  for (std::size_t i = 0; i < g.r(); ++i) {
    for (Vertex v : g.vertex_class(i)) {
      for (std::size_t k = 0; k < m; ++k) classes[i].push_back(v * m + k);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(g.graph().edge_count() * m * m);
  for (const auto& [u, v] : g.graph().edges()) {
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) edges.emplace_back(u * m + p, v * m + q);
    }
  }
  return MultipartiteGraph(std::move(classes), std::move(edges));
}

// Complete r-partite graph with the given class sizes; class i holds a
// contiguous index range.
inline MultipartiteGraph complete_multipartite(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<Vertex>> classes(sizes.size());
  Vertex next = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t k = 0; k < sizes[i]; ++k) classes[i].push_back(next++);
  }
  std::vector<std::size_t> class_of(next);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (Vertex v : classes[i]) class_of[v] = i;
  }
  std::vector<Edge> edges;
  for (Vertex u = 0; u < next; ++u) {
    for (Vertex v = u + 1; v < next; ++v) {
      if (class_of[u] != class_of[v]) edges.emplace_back(u, v);
    }
  }
  return MultipartiteGraph(std::move(classes), std::move(edges));
}

// r x r block layout: block (column i, row j) holds block_size(i, j) vertices.
// Columns are the partition classes; rows cut across them. Vertices are
// numbered column by column, and within a column row by row.
class BlockStructure {
 public:
  BlockStructure() = default;

  explicit BlockStructure(std::vector<std::vector<std::size_t>> block_sizes)
      : sizes_(std::move(block_sizes)) {
    const std::size_t r = sizes_.size();
    detail::require(r >= 2, "block structure needs r >= 2");
    for (const auto& column : sizes_) {
      detail::require(column.size() == r, "block size matrix must be r x r");
    }
    n_ = std::accumulate(sizes_[0].begin(), sizes_[0].end(), std::size_t{0});
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t sum = std::accumulate(sizes_[i].begin(), sizes_[i].end(), std::size_t{0});
      if (sum != n_) {
        throw ContractError("column " + std::to_string(i) + " sums to " + std::to_string(sum) +
                            ", expected " + std::to_string(n_));
      }
      for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t k = 0; k < sizes_[i][j]; ++k) {
          column_of_.push_back(i);
          row_of_.push_back(j);
        }
      }
    }
  }

  std::size_t r() const { return sizes_.size(); }
  std::size_t n() const { return n_; }
  std::size_t vertex_count() const { return column_of_.size(); }
  std::size_t block_size(std::size_t column, std::size_t row) const { return sizes_[column][row]; }
  const std::vector<std::vector<std::size_t>>& block_sizes() const { return sizes_; }
  std::size_t column_of(Vertex v) const { return column_of_[v]; }
  std::size_t row_of(Vertex v) const { return row_of_[v]; }

  std::size_t row_size(std::size_t row) const {
    std::size_t total = 0;
    for (const auto& column : sizes_) total += column[row];
    return total;
  }

  std::size_t max_block() const {
    std::size_t best = 0;
    for (const auto& column : sizes_) best = std::max(best, *std::max_element(column.begin(), column.end()));
    return best;
  }

 private:
  std::vector<std::vector<std::size_t>> sizes_;
  std::size_t n_ = 0;
  std::vector<std::size_t> column_of_;
  std::vector<std::size_t> row_of_;
};

}  // namespace htile
