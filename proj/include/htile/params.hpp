#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "htile/error.hpp"
#include "htile/graph.hpp"
#include "htile/rational.hpp"

namespace htile {

// Exhaustive colouring is exponential in |V(H)|; profiles refuse larger H.
inline constexpr std::size_t kMaxPatternVertices = 16;

// One proper colouring. class_sizes[c] = number of vertices with colour c.
struct Colouring {
  std::vector<std::size_t> class_sizes;
  std::vector<std::size_t> colours;
};

// gcd(H) is either a positive integer or infinite (every colouring equitable).
class GcdValue {
 public:
  static GcdValue infinite() { return GcdValue(); }
  explicit GcdValue(long value) : value_(value) {}

  bool is_infinite() const { return !value_.has_value(); }
  long value() const {
    if (!value_) throw ContractError("gcd is infinite");
    return *value_;
  }
  std::string str() const { return value_ ? std::to_string(*value_) : "inf"; }

  friend bool operator==(const GcdValue&, const GcdValue&) = default;

 private:
  GcdValue() = default;
  std::optional<long> value_;
};

struct ChromaticProfile {
  std::size_t h = 0;
  std::size_t r = 0;
  // Every class-size multiset realised by a proper r-colouring, each sorted ascending.
  std::set<std::vector<std::size_t>> size_multisets;
  std::set<long> difference_set;
  GcdValue gcd = GcdValue::infinite();
  Rational sigma;
  Rational chi_cr;
  Rational chi_star;
  Rational a;
  Rational b;
};

namespace detail {

inline std::vector<Vertex> greedy_clique(const Graph& g) {
  std::vector<Vertex> order(g.vertex_count());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex u, Vertex v) { return g.degree(u) > g.degree(v); });
  std::vector<Vertex> clique;
  for (Vertex v : order) {
    bool joins = std::all_of(clique.begin(), clique.end(), [&](Vertex c) { return g.adjacent(c, v); });
    if (joins) clique.push_back(v);
  }
  return clique;
}

// Clique first, then repeatedly the vertex with most already-placed
// neighbours (ties: higher degree, then lower index).
inline std::vector<Vertex> colouring_order(const Graph& g, const std::vector<Vertex>& clique) {
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> order(clique);
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> placed_nbrs(n, 0);
  auto place = [&](Vertex v) {
    placed[v] = true;
    for (Vertex u = 0; u < n; ++u) {
      if (g.adjacent(u, v)) ++placed_nbrs[u];
    }
  };
  for (Vertex v : clique) place(v);
  while (order.size() < n) {
    std::optional<Vertex> best;
    for (Vertex v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (!best || placed_nbrs[v] > placed_nbrs[*best] ||
          (placed_nbrs[v] == placed_nbrs[*best] && g.degree(v) > g.degree(*best))) {
        best = v;
      }
    }
    order.push_back(*best);
    place(*best);
  }
  return order;
}

// Visits every proper colouring with colours 0..r-1 in which clique[k] has
// colour k. Stops early when visit returns false.
inline void for_each_anchored_colouring(const Graph& g, std::size_t r, const std::vector<Vertex>& clique,
                                        const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  const std::size_t n = g.vertex_count();
  if (clique.size() > r) return;
  std::vector<Vertex> order = colouring_order(g, clique);
  std::vector<std::vector<Vertex>> earlier(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (g.adjacent(order[k], order[j])) earlier[k].push_back(order[j]);
    }
  }
  std::vector<std::size_t> colours(n, 0);
  bool stop = false;
  std::function<void(std::size_t)> assign = [&](std::size_t k) {
    if (stop) return;
    if (k == n) {
      if (!visit(colours)) stop = true;
      return;
    }
    Vertex v = order[k];
    std::size_t lo = 0, hi = r;
    if (k < clique.size()) lo = k, hi = k + 1;
    for (std::size_t c = lo; c < hi && !stop; ++c) {
      bool ok = std::none_of(earlier[k].begin(), earlier[k].end(), [&](Vertex u) { return colours[u] == c; });
      if (!ok) continue;
      colours[v] = c;
      assign(k + 1);
    }
  };
  assign(0);
}

inline std::vector<std::size_t> sizes_of(const std::vector<std::size_t>& colours, std::size_t r) {
  std::vector<std::size_t> sizes(r, 0);
  for (std::size_t c : colours) ++sizes[c];
  return sizes;
}

inline bool colourable(const Graph& g, std::size_t k) {
  if (g.vertex_count() == 0) return true;
  bool found = false;
  // Any k-colourable graph has a k-colouring giving the greedy clique colours 0..q-1.
  for_each_anchored_colouring(g, k, greedy_clique(g), [&](const std::vector<std::size_t>&) {
    found = true;
    return false;
  });
  return found;
}

inline long gcd_of_differences(const std::set<long>& differences, bool& infinite) {
  long g = 0;
  for (long d : differences) g = std::gcd(g, d < 0 ? -d : d);
  infinite = g == 0;
  return g;
}

}  // namespace detail

inline std::size_t chromatic_number(const Graph& h) {
  detail::require(h.vertex_count() >= 1, "chromatic number needs at least one vertex");
  std::size_t k = std::max<std::size_t>(1, detail::greedy_clique(h).size());
  while (!detail::colourable(h, k)) ++k;
  return k;
}

// Every proper assignment of colours 0..r-1 to V(H), each exactly once, in a
// deterministic order. Empty when r < chi(H).
inline std::vector<Colouring> enumerate_r_colourings(const Graph& h, std::size_t r) {
  detail::require(h.vertex_count() >= 1, "colouring enumeration needs at least one vertex");
  detail::require(h.vertex_count() <= kMaxPatternVertices,
                  "colouring enumeration is limited to " + std::to_string(kMaxPatternVertices) + " vertices");
  std::vector<Vertex> clique = detail::greedy_clique(h);
  const std::size_t q = clique.size();
  // Colour permutations that are increasing on the non-clique colours: each
  // labelled colouring is exactly one of these applied to one anchored colouring.
  std::vector<std::vector<std::size_t>> perms;
  if (q <= r) {
    std::vector<std::size_t> p(r);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do {
      if (std::is_sorted(p.begin() + static_cast<long>(q), p.end())) perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::vector<Colouring> out;
  detail::for_each_anchored_colouring(h, r, clique, [&](const std::vector<std::size_t>& colours) {
    for (const auto& p : perms) {
      Colouring c;
      c.colours.resize(colours.size());
      for (std::size_t v = 0; v < colours.size(); ++v) c.colours[v] = p[colours[v]];
      c.class_sizes = detail::sizes_of(c.colours, r);
      out.push_back(std::move(c));
    }
    return true;
  });
  return out;
}

// One representative colouring (colours 0..r-1, r = chi(H)) per class-size
// multiset. Keys are the multisets sorted ascending; representative class
// sizes are arbitrary permutations of the key.
inline std::map<std::vector<std::size_t>, std::vector<std::size_t>> colouring_representatives(const Graph& h) {
  detail::require(h.vertex_count() >= 1, "H must have at least one vertex");
  detail::require(h.vertex_count() <= kMaxPatternVertices,
                  "|V(H)| = " + std::to_string(h.vertex_count()) + " exceeds the profile limit of " +
                      std::to_string(kMaxPatternVertices));
  const std::size_t r = chromatic_number(h);
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> reps;
  detail::for_each_anchored_colouring(h, r, detail::greedy_clique(h), [&](const std::vector<std::size_t>& colours) {
    auto sizes = detail::sizes_of(colours, r);
    std::sort(sizes.begin(), sizes.end());
    reps.try_emplace(std::move(sizes), colours);
    return true;
  });
  return reps;
}

inline ChromaticProfile chromatic_profile(const Graph& h) {
  auto reps = colouring_representatives(h);
  ChromaticProfile p;
  p.h = h.vertex_count();
  p.r = chromatic_number(h);
  if (p.r < 2) throw ContractError("chromatic profile needs chi(H) >= 2 (H has no edges)");
  for (const auto& [sizes, colours] : reps) {
    p.size_multisets.insert(sizes);
    for (std::size_t x : sizes) {
      for (std::size_t y : sizes) p.difference_set.insert(static_cast<long>(x) - static_cast<long>(y));
    }
  }
  bool infinite = false;
  long g = detail::gcd_of_differences(p.difference_set, infinite);
  p.gcd = infinite ? GcdValue::infinite() : GcdValue(g);

  std::size_t min_class = p.h;
  for (const auto& sizes : p.size_multisets) min_class = std::min(min_class, sizes.front());
  const long h_long = static_cast<long>(p.h);
  const long r_long = static_cast<long>(p.r);
  p.sigma = make_rational(static_cast<long>(min_class), h_long);
  p.chi_cr = Rational(r_long - 1) / (Rational(1) - p.sigma);
  p.chi_cr.canonicalize();
  p.chi_star = (!p.gcd.is_infinite() && p.gcd.value() == 1) ? p.chi_cr : Rational(r_long);
  p.a = p.sigma * h_long;
  p.b = (Rational(1) - p.sigma) * h_long / (r_long - 1);
  p.a.canonicalize();
  p.b.canonicalize();
  return p;
}

// Labelled class-size vectors of proper chi(H)-colourings (all permutations
// of every multiset), each with a colouring realising it. Sorted ascending.
struct Pattern {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> colours;
};

inline std::vector<Pattern> colouring_patterns(const Graph& h) {
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> patterns;
  for (const auto& [multiset, colours] : colouring_representatives(h)) {
    const std::size_t r = multiset.size();
    std::vector<std::size_t> p(r);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do {
      std::vector<std::size_t> recoloured(colours.size());
      for (std::size_t v = 0; v < colours.size(); ++v) recoloured[v] = p[colours[v]];
      auto sizes = detail::sizes_of(recoloured, r);
      patterns.try_emplace(std::move(sizes), std::move(recoloured));
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::vector<Pattern> out;
  for (auto& [sizes, colours] : patterns) out.push_back({sizes, colours});
  return out;
}

}  // namespace htile
