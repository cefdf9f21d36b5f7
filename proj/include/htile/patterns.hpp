#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "htile/error.hpp"
#include "htile/graph.hpp"
#include "htile/params.hpp"
#include "htile/tiling.hpp"

namespace htile {

// counts[k] copies of H are placed with per-class sizes patterns[k].
struct PatternSolution {
  std::vector<std::vector<std::size_t>> patterns;
  std::vector<std::size_t> counts;
};

// Perfect H-tiling of the complete multipartite graph with the given class
// sizes, decided as integer feasibility over H's colouring patterns. Needs
// one host class per colour: sizes.size() == chi(H). Among several
// solutions, the lexicographically largest count vector (patterns in
// ascending order) is returned.
inline std::optional<PatternSolution> pattern_tiling_complete_multipartite(const std::vector<std::size_t>& sizes,
                                                                           const Graph& h) {
  auto patterns = colouring_patterns(h);
  const std::size_t r = patterns.front().sizes.size();
  detail::require(sizes.size() == r, "host has " + std::to_string(sizes.size()) +
                                         " classes but chi(H) = " + std::to_string(r));
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total % h.vertex_count() != 0) return std::nullopt;

  PatternSolution sol;
  for (const auto& p : patterns) sol.patterns.push_back(p.sizes);
  sol.counts.assign(patterns.size(), 0);

  std::set<std::pair<std::size_t, std::vector<std::size_t>>> dead;
  std::vector<std::size_t> residual = sizes;
  std::function<bool(std::size_t)> place = [&](std::size_t k) {
    if (std::all_of(residual.begin(), residual.end(), [](std::size_t x) { return x == 0; })) return true;
    if (k == sol.patterns.size()) return false;
    if (dead.count({k, residual})) return false;
    const auto& p = sol.patterns[k];
    std::size_t most = total;
    for (std::size_t i = 0; i < r; ++i) {
      if (p[i] > 0) most = std::min(most, residual[i] / p[i]);
    }
    for (std::size_t c = most + 1; c-- > 0;) {
      for (std::size_t i = 0; i < r; ++i) residual[i] -= c * p[i];
      sol.counts[k] = c;
      bool ok = place(k + 1);
      for (std::size_t i = 0; i < r; ++i) residual[i] += c * p[i];
      if (ok) return true;
    }
    sol.counts[k] = 0;
    dead.insert({k, residual});
    return false;
  };
  if (!place(0)) return std::nullopt;
  return sol;
}

// Lays the copies out on complete_multipartite(sizes): each copy takes the
// next unused vertices of every class, following a colouring of H that
// realises its pattern.
inline Tiling realize_pattern_solution(const std::vector<std::size_t>& sizes, const Graph& h,
                                       const PatternSolution& sol) {
  auto patterns = colouring_patterns(h);
  std::vector<Vertex> next(sizes.size());
  for (std::size_t i = 1; i < sizes.size(); ++i) next[i] = next[i - 1] + sizes[i - 1];
  std::vector<Vertex> end(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) end[i] = next[i] + sizes[i];

  Tiling t;
  for (std::size_t k = 0; k < sol.patterns.size(); ++k) {
    auto it = std::find_if(patterns.begin(), patterns.end(),
                           [&](const Pattern& p) { return p.sizes == sol.patterns[k]; });
    detail::require(it != patterns.end(), "pattern is not realised by any colouring of H");
    for (std::size_t copy = 0; copy < sol.counts[k]; ++copy) {
      HCopy c;
      c.witness.resize(h.vertex_count());
      for (Vertex v = 0; v < h.vertex_count(); ++v) {
        std::size_t cls = it->colours[v];
        detail::require(next[cls] < end[cls], "pattern counts exceed class " + std::to_string(cls));
        c.witness[v] = next[cls]++;
      }
      c.image = c.witness;
      std::sort(c.image.begin(), c.image.end());
      t.copies.push_back(std::move(c));
    }
  }
  return t;
}

// Every copy of H in a block host meets each row in at least sigma(H) h
// vertices, so no tiling has more than floor(min_j |V^j| / (sigma(H) h)) copies.
inline std::size_t row_tiling_upper_bound(const BlockStructure& blocks, const Graph& h) {
  const ChromaticProfile p = chromatic_profile(h);
  const std::size_t per_row = p.a.get_num().get_ui();  // sigma h is the least class size
  detail::require(per_row >= 1, "sigma(H) h must be at least 1");
  std::size_t smallest = blocks.row_size(0);
  for (std::size_t j = 1; j < blocks.r(); ++j) smallest = std::min(smallest, blocks.row_size(j));
  return smallest / per_row;
}

}  // namespace htile
