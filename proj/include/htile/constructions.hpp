#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "htile/error.hpp"
#include "htile/graph.hpp"
#include "htile/params.hpp"
#include "htile/patterns.hpp"
#include "htile/rational.hpp"

namespace htile {

enum class ConstructionFamily { Custom, GcdObstruction, SigmaObstruction };

inline const char* to_string(ConstructionFamily f) {
  switch (f) {
    case ConstructionFamily::Custom: return "custom";
    case ConstructionFamily::GcdObstruction: return "gcd_obstruction";
    case ConstructionFamily::SigmaObstruction: return "sigma_obstruction";
  }
  return "custom";
}

// block_sizes[i][j] = size of the block in column i, row j.
struct ConstructionSpec {
  std::size_t r = 0;
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> block_sizes;
  ConstructionFamily family = ConstructionFamily::Custom;
};

struct BlockConstruction {
  MultipartiteGraph graph;
  BlockStructure blocks;
};

// Two vertices are adjacent exactly when they differ in both row and column.
inline BlockConstruction build_block_construction(const ConstructionSpec& spec) {
  detail::require(spec.block_sizes.size() == spec.r, "block matrix must have r columns");
  for (std::size_t i = 0; i < spec.r; ++i) {
    detail::require(spec.block_sizes[i].size() == spec.r, "block matrix must be r x r");
    std::size_t sum = std::accumulate(spec.block_sizes[i].begin(), spec.block_sizes[i].end(), std::size_t{0});
    if (sum != spec.n) {
      throw ContractError("column " + std::to_string(i) + " sums to " + std::to_string(sum) + " instead of n = " +
                          std::to_string(spec.n));
    }
  }
  BlockStructure blocks(spec.block_sizes);
  const std::size_t total = blocks.vertex_count();
  std::vector<std::vector<Vertex>> classes(spec.r);
  for (Vertex v = 0; v < total; ++v) classes[blocks.column_of(v)].push_back(v);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < total; ++u) {
    for (Vertex v = u + 1; v < total; ++v) {
      if (blocks.row_of(u) != blocks.row_of(v) && blocks.column_of(u) != blocks.column_of(v)) {
        edges.emplace_back(u, v);
      }
    }
  }
  return {MultipartiteGraph(std::move(classes), std::move(edges)), std::move(blocks)};
}

namespace detail {

inline ChromaticProfile profile_for_construction(const Graph& h) {
  ChromaticProfile p = chromatic_profile(h);
  require(p.r >= 3, "constructions need chi(H) >= 3");
  return p;
}

}  // namespace detail

// Row 1 gets exactly one more vertex than row 2, so no perfect tiling exists
// when gcd(H) > 1.
inline ConstructionSpec gcd_lower_bound_spec(const Graph& h, std::size_t n) {
  const ChromaticProfile p = detail::profile_for_construction(h);
  detail::require(!p.gcd.is_infinite() && p.gcd.value() > 1, "gcd construction needs 1 < gcd(H) < inf");
  const std::size_t r = p.r;
  detail::require(n >= r, "gcd construction needs n >= r");
  ConstructionSpec spec{r, n, std::vector<std::vector<std::size_t>>(r, std::vector<std::size_t>(r, n / r)),
                        ConstructionFamily::GcdObstruction};
  const std::size_t extra = n % r;
  if (extra == 0) {
    spec.block_sizes[0][0] += 1;
    spec.block_sizes[0][2] -= 1;
    return spec;
  }
  // Round-robin the ceil(n/r) cells: column i gets rows i*extra, ..., i*extra+extra-1 (mod r),
  // so every row holds the same number of them.
  for (std::size_t t = 0; t < r * extra; ++t) spec.block_sizes[t / extra][t % r] += 1;
  // Shift one ceil cell from row 3 to row 1 inside a single column.
  for (std::size_t i = r; i-- > 0;) {
    auto& column = spec.block_sizes[i];
    if (column[2] > column[0]) {
      std::swap(column[0], column[2]);
      return spec;
    }
  }
  throw Error("internal: no column available to unbalance rows 1 and 3");
}

// Row 1 is too small: every copy of H needs sigma(H) h vertices there.
inline ConstructionSpec sigma_lower_bound_spec(const Graph& h, std::size_t n) {
  const ChromaticProfile p = detail::profile_for_construction(h);
  detail::require(!p.gcd.is_infinite() && p.gcd.value() == 1, "sigma construction needs gcd(H) = 1");
  const long first_row = ceil_to_long(p.sigma * static_cast<long>(n));
  detail::require(first_row >= 1, "sigma construction needs ceil(sigma(H) n) >= 1");
  const std::size_t r = p.r;
  ConstructionSpec spec{r, n, std::vector<std::vector<std::size_t>>(r, std::vector<std::size_t>(r, 0)),
                        ConstructionFamily::SigmaObstruction};
  const std::size_t top = static_cast<std::size_t>(first_row - 1);
  const std::size_t rest = n - top;
  for (auto& column : spec.block_sizes) {
    column[0] = top;
    for (std::size_t j = 1; j < r; ++j) column[j] = rest / (r - 1) + (j - 1 < rest % (r - 1) ? 1 : 0);
  }
  return spec;
}

// Class sizes (srh+1, srh, ..., srh, srh-1) of the complete r-partite U(H).
inline std::vector<std::size_t> build_U(const Graph& h, std::size_t s) {
  const ChromaticProfile p = detail::profile_for_construction(h);
  detail::require(!p.gcd.is_infinite() && p.gcd.value() == 1, "U(H) needs gcd(H) = 1");
  detail::require(s >= 1, "U(H) needs s >= 1");
  const std::size_t base = s * p.r * p.h;
  std::vector<std::size_t> sizes(p.r, base);
  sizes.front() += 1;
  sizes.back() -= 1;
  return sizes;
}

struct MinimalU {
  std::size_t s = 0;
  std::vector<std::size_t> sizes;
  PatternSolution solution;
};

inline std::optional<MinimalU> find_min_s_for_U(const Graph& h, std::size_t s_max) {
  const ChromaticProfile p = detail::profile_for_construction(h);
  detail::require(!p.gcd.is_infinite() && p.gcd.value() == 1, "U(H) needs gcd(H) = 1");
  for (std::size_t s = 1; s <= s_max; ++s) {
    auto sizes = build_U(h, s);
    if (auto sol = pattern_tiling_complete_multipartite(sizes, h)) return MinimalU{s, sizes, *sol};
  }
  return std::nullopt;
}

struct AugmentedGraph {
  MultipartiteGraph graph;
  std::vector<bool> dummy;  // per vertex of graph
};

// Adds m vertices to every class, each adjacent to everything outside its
// own class. Original vertices keep their indices.
inline AugmentedGraph augment_with_dummies(const MultipartiteGraph& g, std::size_t m) {
  detail::require(g.balanced(), "dummy augmentation needs a balanced host");
  const std::size_t base = g.vertex_count();
  const std::size_t r = g.r();
  auto classes = g.classes();
  std::vector<std::size_t> class_of(base + r * m);
  for (Vertex v = 0; v < base; ++v) class_of[v] = g.class_of(v);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      Vertex d = base + i * m + k;
      classes[i].push_back(d);
      class_of[d] = i;
    }
  }
  std::vector<Edge> edges = g.graph().edges();
  for (Vertex d = base; d < base + r * m; ++d) {
    for (Vertex u = 0; u < d; ++u) {
      if (class_of[u] != class_of[d]) edges.emplace_back(u, d);
    }
  }
  AugmentedGraph out{MultipartiteGraph(std::move(classes), std::move(edges)), std::vector<bool>(base + r * m, false)};
  for (Vertex d = base; d < base + r * m; ++d) out.dummy[d] = true;
  return out;
}

// Balanced r-partite graph, class i = {i n, ..., i n + n - 1}, with
// delta* >= delta_target: every pair of classes gets a delta_target-regular
// bipartite graph (shifted matchings under random relabellings) and then each
// remaining cross pair is added independently with probability extra_edge_p.
inline MultipartiteGraph random_partite_graph(std::size_t r, std::size_t n, std::size_t delta_target,
                                              std::uint64_t seed, double extra_edge_p = 0.2) {
  detail::require(r >= 2, "need r >= 2");
  if (delta_target > n) {
    throw ContractError("delta target " + std::to_string(delta_target) + " exceeds class size " + std::to_string(n));
  }
  detail::require(extra_edge_p >= 0.0 && extra_edge_p <= 1.0, "edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Vertex>> classes(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < n; ++k) classes[i].push_back(i * n + k);
  }
  std::vector<std::vector<bool>> adj(r * n, std::vector<bool>(r * n, false));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      std::vector<Vertex> left = classes[i], right = classes[j];
      std::shuffle(left.begin(), left.end(), rng);
      std::shuffle(right.begin(), right.end(), rng);
      for (std::size_t t = 0; t < delta_target; ++t) {
        for (std::size_t k = 0; k < n; ++k) {
          Vertex u = left[k], v = right[(k + t) % n];
          adj[u][v] = adj[v][u] = true;
        }
      }
    }
  }
  std::bernoulli_distribution coin(extra_edge_p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < r * n; ++u) {
    for (Vertex v = u + 1; v < r * n; ++v) {
      if (u / n == v / n) continue;
      if (!adj[u][v] && coin(rng)) adj[u][v] = true;
      if (adj[u][v]) edges.emplace_back(u, v);
    }
  }
  return MultipartiteGraph(std::move(classes), std::move(edges));
}

}  // namespace htile
