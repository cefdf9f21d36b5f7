#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "htile/error.hpp"
#include "htile/graph.hpp"
#include "htile/rational.hpp"
#include "htile/simplex.hpp"

namespace htile {

// A transversal K_r of G (vertices[i] lies in class i) with a designated root.
// Under an (a, b) weighting the root carries a and every other vertex b.
struct WeightedRootedClique {
  std::vector<Vertex> vertices;
  Vertex root = 0;

  friend auto operator<=>(const WeightedRootedClique&, const WeightedRootedClique&) = default;
};

struct FractionalTiling {
  std::vector<std::pair<WeightedRootedClique, Rational>> weights;
  bool perfect = true;
};

// x with x.1 > 0 and x . 1_{a,b}(K) <= 0 for every rooted clique K.
struct FarkasCertificate {
  std::vector<Rational> x;
};

struct FractionalOptions {
  std::size_t column_cap = 2'000'000;
  std::optional<std::size_t> max_pivots;
};

struct WeightedTilingSolution {
  std::variant<FractionalTiling, FarkasCertificate> outcome;
  std::size_t columns = 0;
  std::size_t pivots = 0;

  bool feasible() const { return std::holds_alternative<FractionalTiling>(outcome); }
  const FractionalTiling& tiling() const { return std::get<FractionalTiling>(outcome); }
  const FarkasCertificate& certificate() const { return std::get<FarkasCertificate>(outcome); }
};

namespace detail {

// Calls visit(vertices) for every transversal K_r, in lexicographic order of
// (vertex in class 0, vertex in class 1, ...).
inline void for_each_transversal_clique(const MultipartiteGraph& g,
                                        const std::function<void(const std::vector<Vertex>&)>& visit) {
  const std::size_t r = g.r();
  std::vector<Vertex> chosen(r);
  std::function<void(std::size_t, const VertexSet&)> extend = [&](std::size_t i, const VertexSet& common) {
    if (i == r) {
      visit(chosen);
      return;
    }
    VertexSet candidates = common & g.class_mask(i);
    for (auto v = candidates.find_first(); v != VertexSet::npos; v = candidates.find_next(v)) {
      chosen[i] = v;
      extend(i + 1, common & g.graph().neighbours(v));
    }
  };
  VertexSet all(g.vertex_count());
  all.set();
  extend(0, all);
}

inline Rational weighted_load(const WeightedRootedClique& k, Vertex v, const Rational& a, const Rational& b) {
  return v == k.root ? a : b;
}

}  // namespace detail

// Every (a, b)-weighted rooted K_r of G: r rooted copies per K_r when a != b,
// one (rooted at its lowest-index vertex) when a == b.
inline std::vector<WeightedRootedClique> enumerate_rooted_cliques(const MultipartiteGraph& g, const Rational& a,
                                                                  const Rational& b,
                                                                  std::size_t cap = FractionalOptions{}.column_cap) {
  std::vector<WeightedRootedClique> out;
  const bool same = a == b;
  detail::for_each_transversal_clique(g, [&](const std::vector<Vertex>& vs) {
    std::size_t added = same ? 1 : vs.size();
    if (out.size() + added > cap) {
      throw ResourceError("more than " + std::to_string(cap) +
                          " rooted K_r copies; use a smaller host or raise the column cap");
    }
    if (same) {
      out.push_back({vs, *std::min_element(vs.begin(), vs.end())});
    } else {
      for (Vertex root : vs) out.push_back({vs, root});
    }
  });
  return out;
}

// Independent checks: both re-derive everything from the graph directly.
inline bool verify_fractional_tiling(const MultipartiteGraph& g, const Rational& a, const Rational& b,
                                     const FractionalTiling& tiling, std::string* diagnostic = nullptr) {
  auto fail = [&](const std::string& why) {
    if (diagnostic) *diagnostic = why;
    return false;
  };
  std::vector<Rational> load(g.vertex_count(), Rational(0));
  for (std::size_t k = 0; k < tiling.weights.size(); ++k) {
    const auto& [clique, weight] = tiling.weights[k];
    const auto& vs = clique.vertices;
    std::string where = "weights[" + std::to_string(k) + "]";
    if (vs.size() != g.r()) return fail(where + ": clique does not have r vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i] >= g.vertex_count() || g.class_of(vs[i]) != i) {
        return fail(where + ": vertex " + std::to_string(i) + " is not in class " + std::to_string(i));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (!g.adjacent(vs[i], vs[j])) return fail(where + ": vertices do not form a clique");
      }
    }
    if (std::find(vs.begin(), vs.end(), clique.root) == vs.end()) return fail(where + ": root not in clique");
    if (weight < 0) return fail(where + ": negative weight");
    for (Vertex v : vs) load[v] += weight * detail::weighted_load(clique, v, a, b);
  }
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (load[v] > 1) return fail("vertex " + std::to_string(v) + " has load " + to_string(load[v]) + " > 1");
    if (tiling.perfect && load[v] != 1) {
      return fail("vertex " + std::to_string(v) + " has load " + to_string(load[v]) + " != 1");
    }
  }
  return true;
}

inline bool verify_farkas_certificate(const MultipartiteGraph& g, const Rational& a, const Rational& b,
                                      const FarkasCertificate& cert) {
  if (cert.x.size() != g.vertex_count()) return false;
  Rational total = 0;
  for (const auto& xi : cert.x) total += xi;
  if (total <= 0) return false;

  // Plain nested search over classes with pairwise adjacency tests.
  const std::size_t r = g.r();
  std::vector<Vertex> chosen;
  bool ok = true;
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (!ok) return;
    if (i == r) {
      Rational base = 0;
      for (Vertex v : chosen) base += b * cert.x[v];
      for (Vertex root : chosen) {
        Rational dot = base - b * cert.x[root] + a * cert.x[root];
        if (dot > 0) ok = false;
      }
      return;
    }
    for (Vertex v : g.vertex_class(i)) {
      bool fits = std::all_of(chosen.begin(), chosen.end(), [&](Vertex u) { return g.adjacent(u, v); });
      if (!fits) continue;
      chosen.push_back(v);
      extend(i + 1);
      chosen.pop_back();
    }
  };
  extend(0);
  return ok;
}

// Decides whether G has a perfect (a, b)-weighted fractional K_r-tiling by
// phase-one simplex on {A w = 1, w >= 0}. A positive phase-one optimum yields
// its dual vector as the Farkas certificate. Either output is verified before
// it is returned.
inline WeightedTilingSolution solve_perfect_weighted_tiling(const MultipartiteGraph& g, const Rational& a,
                                                            const Rational& b, const FractionalOptions& opts = {}) {
  detail::require(g.r() >= 2, "need r >= 2");
  detail::require(g.balanced(), "host must be balanced");
  detail::require(a > 0 && b > 0, "weights a and b must be positive");

  const std::size_t m = g.vertex_count();
  auto cliques = enumerate_rooted_cliques(g, a, b, opts.column_cap);
  std::vector<LpColumn> columns;
  columns.reserve(cliques.size() + m);
  for (const auto& k : cliques) {
    LpColumn col;
    for (Vertex v : k.vertices) {
      col.rows.push_back(v);
      col.values.push_back(detail::weighted_load(k, v, a, b));
    }
    col.cost = 0;
    columns.push_back(std::move(col));
  }
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < m; ++i) {
    basis.push_back(columns.size());
    columns.push_back({{i}, {Rational(1)}, Rational(1)});
  }

  ExactSimplex lp(m, columns, std::vector<Rational>(m, Rational(1)), basis);
  LpResult res = lp.solve(opts.max_pivots);

  WeightedTilingSolution out;
  out.columns = cliques.size();
  out.pivots = res.pivots;
  if (sgn(res.objective) == 0) {
    FractionalTiling tiling;
    tiling.perfect = true;
    for (std::size_t j = 0; j < cliques.size(); ++j) {
      if (sgn(res.primal[j]) != 0) tiling.weights.emplace_back(cliques[j], res.primal[j]);
    }
    std::string why;
    if (!verify_fractional_tiling(g, a, b, tiling, &why)) {
      throw Error("internal: simplex produced an invalid tiling: " + why);
    }
    out.outcome = std::move(tiling);
  } else {
    FarkasCertificate cert{res.duals};
    if (!verify_farkas_certificate(g, a, b, cert)) {
      throw Error("internal: simplex produced an invalid Farkas certificate");
    }
    out.outcome = std::move(cert);
  }
  return out;
}

// max sum w(H') subject to every vertex load <= 1, w >= 0; copies are
// vertex sets.
inline Rational max_fractional_H_tiling(const MultipartiteGraph& g, const std::vector<std::vector<Vertex>>& copies,
                                        const FractionalOptions& opts = {}) {
  if (copies.empty()) return 0;
  if (copies.size() > opts.column_cap) {
    throw ResourceError("more than " + std::to_string(opts.column_cap) + " copies for the fractional bound");
  }
  const std::size_t m = g.vertex_count();
  std::vector<LpColumn> columns;
  columns.reserve(copies.size() + m);
  for (const auto& c : copies) {
    LpColumn col;
    for (Vertex v : c) {
      col.rows.push_back(v);
      col.values.emplace_back(1);
    }
    col.cost = -1;
    columns.push_back(std::move(col));
  }
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < m; ++i) {
    basis.push_back(columns.size());
    columns.push_back({{i}, {Rational(1)}, Rational(0)});
  }
  ExactSimplex lp(m, columns, std::vector<Rational>(m, Rational(1)), basis);
  return -lp.solve(opts.max_pivots).objective;
}

// Maps a perfect tiling of blow_up(g, m) back to g: each rooted clique of g
// gets the summed weight of its m^r clone copies, divided by m.
inline FractionalTiling project_blown_up_tiling(std::size_t m, const FractionalTiling& blown,
                                                const Rational& a, const Rational& b) {
  std::map<WeightedRootedClique, Rational> acc;
  for (const auto& [k, w] : blown.weights) {
    WeightedRootedClique base;
    for (Vertex v : k.vertices) base.vertices.push_back(v / m);
    base.root = a == b ? *std::min_element(base.vertices.begin(), base.vertices.end()) : k.root / m;
    acc[base] += w;
  }
  FractionalTiling out;
  out.perfect = blown.perfect;
  for (auto& [k, w] : acc) {
    Rational scaled = w / static_cast<long>(m);
    out.weights.emplace_back(k, scaled);
  }
  return out;
}

}  // namespace htile
