#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "htile/error.hpp"
#include "htile/fractional.hpp"
#include "htile/graph.hpp"
#include "htile/params.hpp"
#include "htile/rational.hpp"

namespace htile {

// One copy of H in G, identified by its vertex image. witness[v] is the host
// vertex that H-vertex v maps to.
struct HCopy {
  std::vector<Vertex> image;  // sorted
  std::vector<Vertex> witness;
};

struct Tiling {
  std::vector<HCopy> copies;

  std::size_t size() const { return copies.size(); }
  std::size_t covered() const {
    std::size_t total = 0;
    for (const auto& c : copies) total += c.image.size();
    return total;
  }
};

enum class SearchStatus { Found, NoneExists, Unknown };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::NoneExists: return "none";
    case SearchStatus::Unknown: return "unknown";
  }
  return "unknown";
}

struct SearchOptions {
  std::uint64_t node_budget = 50'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
  std::size_t copy_cap = 2'000'000;
  // The root LP bound is skipped when there are more copies than this.
  std::size_t lp_bound_columns = 100'000;
  bool use_lp_bound = true;
  // Attaching the block layout of a block-construction host enables row pruning.
  std::optional<BlockStructure> blocks;
};

struct PerfectTilingResult {
  SearchStatus status = SearchStatus::Unknown;
  Tiling tiling;
  std::uint64_t nodes = 0;
  std::size_t copies = 0;
};

struct MaxTilingResult {
  Tiling tiling;
  bool optimal = false;
  std::size_t upper_bound = 0;
  std::uint64_t nodes = 0;
  std::size_t copies = 0;
};

namespace detail {

struct BlockHash {
  std::size_t operator()(const std::vector<std::uint64_t>& blocks) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto b : blocks) h = (h ^ std::hash<std::uint64_t>{}(b)) * 0x100000001b3ULL;
    return h;
  }
};

// H-vertex order for embedding: start at a max-degree vertex, then always the
// vertex with most already-ordered neighbours.
inline std::vector<Vertex> embedding_order(const Graph& h) {
  std::vector<Vertex> seed;
  if (h.vertex_count() > 0) {
    Vertex best = 0;
    for (Vertex v = 1; v < h.vertex_count(); ++v) {
      if (h.degree(v) > h.degree(best)) best = v;
    }
    seed.push_back(best);
  }
  return colouring_order(h, seed);
}

}  // namespace detail

// Every h-subset of V(G) that hosts a copy of H, once, with the first witness
// found. Order is deterministic.
inline std::vector<HCopy> enumerate_H_copies(const Graph& g, const Graph& h,
                                             std::size_t cap = SearchOptions{}.copy_cap) {
  std::vector<HCopy> out;
  const std::size_t hn = h.vertex_count();
  if (hn == 0 || hn > g.vertex_count()) return out;
  std::vector<Vertex> order = detail::embedding_order(h);
  std::vector<std::vector<Vertex>> placed_nbrs(hn);
  for (std::size_t k = 0; k < hn; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (h.adjacent(order[k], order[j])) placed_nbrs[k].push_back(order[j]);
    }
  }
  std::unordered_set<std::vector<std::uint64_t>, detail::BlockHash> seen;
  std::vector<Vertex> witness(hn);
  VertexSet used(g.vertex_count());
  VertexSet all(g.vertex_count());
  all.set();

  std::function<void(std::size_t)> extend = [&](std::size_t k) {
    if (k == hn) {
      std::vector<std::uint64_t> key;
      boost::to_block_range(used, std::back_inserter(key));
      if (!seen.insert(std::move(key)).second) return;
      if (out.size() >= cap) {
        throw ResourceError("more than " + std::to_string(cap) + " copies of H in the host");
      }
      HCopy c;
      c.witness = witness;
      c.image = witness;
      std::sort(c.image.begin(), c.image.end());
      out.push_back(std::move(c));
      return;
    }
    VertexSet candidates = all;
    for (Vertex u : placed_nbrs[k]) candidates &= g.neighbours(witness[u]);
    candidates -= used;
    for (auto v = candidates.find_first(); v != VertexSet::npos; v = candidates.find_next(v)) {
      witness[order[k]] = v;
      used.set(v);
      extend(k + 1);
      used.reset(v);
    }
  };
  extend(0);
  return out;
}

inline std::vector<HCopy> enumerate_H_copies(const MultipartiteGraph& g, const Graph& h,
                                             std::size_t cap = SearchOptions{}.copy_cap) {
  return enumerate_H_copies(g.graph(), h, cap);
}

// Disjointness, embedding validity of every witness, and (optionally) full coverage.
inline bool verify_tiling(const Graph& g, const Graph& h, const Tiling& t, bool require_perfect,
                          std::string* diagnostic = nullptr) {
  auto fail = [&](const std::string& why) {
    if (diagnostic) *diagnostic = why;
    return false;
  };
  std::vector<bool> covered(g.vertex_count(), false);
  for (std::size_t k = 0; k < t.copies.size(); ++k) {
    const HCopy& c = t.copies[k];
    std::string where = "copy " + std::to_string(k);
    if (c.witness.size() != h.vertex_count()) return fail(where + ": witness has wrong length");
    std::vector<Vertex> img = c.witness;
    std::sort(img.begin(), img.end());
    if (std::adjacent_find(img.begin(), img.end()) != img.end()) return fail(where + ": witness not injective");
    if (img != c.image) return fail(where + ": image does not match witness");
    for (Vertex v : img) {
      if (v >= g.vertex_count()) return fail(where + ": vertex out of range");
      if (covered[v]) return fail(where + ": overlaps an earlier copy at vertex " + std::to_string(v));
      covered[v] = true;
    }
    for (const auto& [x, y] : h.edges()) {
      if (!g.adjacent(c.witness[x], c.witness[y])) return fail(where + ": H-edge not mapped to a host edge");
    }
  }
  if (require_perfect && t.covered() != g.vertex_count()) return fail("tiling does not cover every vertex");
  return true;
}

namespace detail {

// Decides whether target is a non-negative integer combination of the
// generators (all non-zero, same length). Results are memoised per target.
class CountFeasibility {
 public:
  explicit CountFeasibility(std::vector<std::vector<int>> generators) : gens_(std::move(generators)) {
    std::sort(gens_.begin(), gens_.end());
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
  }

  bool feasible(const std::vector<int>& target) {
    auto it = memo_.find(target);
    if (it != memo_.end()) return it->second;
    bool result = false;
    auto first = std::find_if(target.begin(), target.end(), [](int x) { return x != 0; });
    if (first == target.end()) {
      result = true;
    } else {
      const auto i = static_cast<std::size_t>(first - target.begin());
      std::vector<int> rest(target.size());
      for (const auto& g : gens_) {
        if (g[i] == 0) continue;
        bool fits = true;
        for (std::size_t k = 0; k < g.size() && fits; ++k) {
          rest[k] = target[k] - g[k];
          fits = rest[k] >= 0;
        }
        if (fits && feasible(rest)) {
          result = true;
          break;
        }
      }
    }
    memo_.emplace(target, result);
    return result;
  }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
      std::size_t h = 1469598103934665603ULL;
      for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
      return h;
    }
  };
  std::vector<std::vector<int>> gens_;
  std::unordered_map<std::vector<int>, bool, Hash> memo_;
};

struct SearchAborted {};

// Shared state for exact-cover and packing search over a fixed copy list.
// A copy is available while none of its vertices is dead (covered or discarded).
class CoverSearch {
 public:
  CoverSearch(std::size_t vertex_count, const std::vector<HCopy>& copies, std::size_t h,
              std::vector<std::vector<std::size_t>> partitions, const SearchOptions& opts)
      : n_(vertex_count), h_(h), copies_(copies), opts_(opts), alive_(vertex_count, true),
        copies_of_(vertex_count), blocked_(copies.size(), 0), avail_(vertex_count, 0) {
    for (std::size_t c = 0; c < copies_.size(); ++c) {
      for (Vertex v : copies_[c].image) {
        copies_of_[v].push_back(c);
        ++avail_[v];
      }
    }
    alive_count_ = n_;
    for (auto& part : partitions) {
      Partition p;
      std::size_t parts = 0;
      for (auto x : part) parts = std::max(parts, x + 1);
      p.part_of = std::move(part);
      p.alive.assign(parts, 0);
      for (Vertex v = 0; v < n_; ++v) ++p.alive[p.part_of[v]];
      p.min_use.assign(parts, h_);
      std::vector<std::vector<int>> signatures;
      for (const auto& c : copies_) {
        std::vector<int> sig(parts, 0);
        for (Vertex v : c.image) ++sig[p.part_of[v]];
        for (std::size_t j = 0; j < parts; ++j) p.min_use[j] = std::min<std::size_t>(p.min_use[j], sig[j]);
        signatures.push_back(std::move(sig));
      }
      if (copies_.empty()) std::fill(p.min_use.begin(), p.min_use.end(), 0);
      p.feasibility.emplace(std::move(signatures));
      partitions_.push_back(std::move(p));
    }
    start_ = std::chrono::steady_clock::now();
  }

  std::uint64_t nodes() const { return nodes_; }

  // Exact cover. Returns true with chosen_ holding the cover.
  bool perfect() {
    tick();
    if (alive_count_ == 0) return true;
    if (alive_count_ % h_ != 0) return false;
    const std::size_t needed = alive_count_ / h_;
    for (auto& p : partitions_) {
      std::vector<int> target(p.alive.begin(), p.alive.end());
      if (!p.feasibility->feasible(target)) return false;
      for (std::size_t j = 0; j < p.alive.size(); ++j) {
        if (p.min_use[j] > 0 && p.alive[j] / p.min_use[j] < needed) return false;
      }
    }
    std::optional<Vertex> pick;
    for (Vertex v = 0; v < n_; ++v) {
      if (!alive_[v]) continue;
      if (!pick || avail_[v] < avail_[*pick]) pick = v;
      if (avail_[*pick] == 0) return false;
    }
    for (std::size_t c : copies_of_[*pick]) {
      if (blocked_[c] != 0) continue;
      take(c);
      if (perfect()) return true;
      untake(c);
    }
    return false;
  }

  // Branch and bound for a maximum packing; best_ holds the incumbent.
  void maximise(std::size_t global_bound) {
    global_bound_ = global_bound;
    maximise_from();
  }

  bool reached_bound() const { return best_.size() >= global_bound_; }
  const std::vector<std::size_t>& chosen() const { return chosen_; }
  const std::vector<std::size_t>& best() const { return best_; }
  void set_incumbent(std::vector<std::size_t> incumbent) { best_ = std::move(incumbent); }

  // Upper bound on how many more disjoint copies fit in the live vertices.
  std::size_t packing_bound() const {
    std::size_t useful = 0;
    for (Vertex v = 0; v < n_; ++v) useful += (alive_[v] && avail_[v] > 0) ? 1 : 0;
    std::size_t bound = useful / h_;
    for (const auto& p : partitions_) {
      if (!p.rows) continue;
      std::vector<std::size_t> useful_in(p.alive.size(), 0);
      for (Vertex v = 0; v < n_; ++v) {
        if (alive_[v] && avail_[v] > 0) ++useful_in[p.part_of[v]];
      }
      for (std::size_t j = 0; j < useful_in.size(); ++j) {
        if (p.min_use[j] > 0) bound = std::min(bound, useful_in[j] / p.min_use[j]);
      }
    }
    return bound;
  }

  // Only the row partition of a block host feeds the packing bound.
  void mark_rows(std::size_t index) { partitions_.at(index).rows = true; }

 private:
  struct Partition {
    std::vector<std::size_t> part_of;
    std::vector<std::size_t> alive;
    std::vector<std::size_t> min_use;
    std::optional<CountFeasibility> feasibility;
    bool rows = false;
  };

  void tick() {
    ++nodes_;
    if (nodes_ > opts_.node_budget) throw SearchAborted{};
    if (opts_.time_limit && (nodes_ & 1023) == 0 &&
        std::chrono::steady_clock::now() - start_ > *opts_.time_limit) {
      throw SearchAborted{};
    }
  }

  void kill(Vertex v) {
    alive_[v] = false;
    --alive_count_;
    for (auto& p : partitions_) --p.alive[p.part_of[v]];
    for (std::size_t c : copies_of_[v]) {
      if (blocked_[c]++ == 0) {
        for (Vertex u : copies_[c].image) --avail_[u];
      }
    }
  }

  void revive(Vertex v) {
    for (auto it = copies_of_[v].rbegin(); it != copies_of_[v].rend(); ++it) {
      if (--blocked_[*it] == 0) {
        for (Vertex u : copies_[*it].image) ++avail_[u];
      }
    }
    for (auto& p : partitions_) ++p.alive[p.part_of[v]];
    ++alive_count_;
    alive_[v] = true;
  }

  void take(std::size_t c) {
    chosen_.push_back(c);
    for (Vertex v : copies_[c].image) kill(v);
  }

  void untake(std::size_t c) {
    const auto& img = copies_[c].image;
    for (auto it = img.rbegin(); it != img.rend(); ++it) revive(*it);
    chosen_.pop_back();
  }

  void maximise_from() {
    tick();
    if (chosen_.size() > best_.size()) best_ = chosen_;
    if (reached_bound()) return;
    if (chosen_.size() + packing_bound() <= best_.size()) return;
    std::optional<Vertex> pick;
    for (Vertex v = 0; v < n_; ++v) {
      if (!alive_[v] || avail_[v] == 0) continue;
      if (!pick || avail_[v] < avail_[*pick]) pick = v;
    }
    if (!pick) return;
    for (std::size_t c : copies_of_[*pick]) {
      if (blocked_[c] != 0) continue;
      take(c);
      maximise_from();
      untake(c);
      if (reached_bound()) return;
    }
    kill(*pick);
    maximise_from();
    revive(*pick);
  }

  std::size_t n_;
  std::size_t h_;
  const std::vector<HCopy>& copies_;
  const SearchOptions& opts_;
  std::vector<bool> alive_;
  std::size_t alive_count_ = 0;
  std::vector<std::vector<std::size_t>> copies_of_;
  std::vector<std::size_t> blocked_;
  std::vector<std::size_t> avail_;
  std::vector<Partition> partitions_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  std::size_t global_bound_ = 0;
  std::uint64_t nodes_ = 0;
  std::chrono::steady_clock::time_point start_;
};

inline std::vector<std::vector<std::size_t>> search_partitions(const MultipartiteGraph* g,
                                                               const SearchOptions& opts, bool& has_rows) {
  std::vector<std::vector<std::size_t>> parts;
  if (g) {
    std::vector<std::size_t> cls(g->vertex_count());
    for (Vertex v = 0; v < g->vertex_count(); ++v) cls[v] = g->class_of(v);
    parts.push_back(std::move(cls));
  }
  has_rows = false;
  if (opts.blocks) {
    std::vector<std::size_t> rows(opts.blocks->vertex_count());
    for (Vertex v = 0; v < rows.size(); ++v) rows[v] = opts.blocks->row_of(v);
    parts.push_back(std::move(rows));
    has_rows = true;
  }
  return parts;
}

inline Tiling tiling_of(const std::vector<HCopy>& copies, const std::vector<std::size_t>& ids) {
  Tiling t;
  for (std::size_t c : ids) t.copies.push_back(copies[c]);
  return t;
}

inline std::vector<std::vector<Vertex>> images_of(const std::vector<HCopy>& copies) {
  std::vector<std::vector<Vertex>> images;
  images.reserve(copies.size());
  for (const auto& c : copies) images.push_back(c.image);
  return images;
}

inline PerfectTilingResult perfect_tiling_impl(const Graph& g, const MultipartiteGraph* mg, const Graph& h,
                                               const SearchOptions& opts) {
  PerfectTilingResult result;
  const std::size_t hn = h.vertex_count();
  detail::require(hn >= 1, "H must have at least one vertex");
  if (opts.blocks) {
    detail::require(opts.blocks->vertex_count() == g.vertex_count(), "block structure does not match the host");
  }
  if (g.vertex_count() % hn != 0) {
    result.status = SearchStatus::NoneExists;
    return result;
  }
  if (g.vertex_count() == 0) {
    result.status = SearchStatus::Found;
    return result;
  }
  auto copies = enumerate_H_copies(g, h, opts.copy_cap);
  result.copies = copies.size();
  const std::size_t needed = g.vertex_count() / hn;

  if (mg && opts.use_lp_bound && !copies.empty() && copies.size() <= opts.lp_bound_columns) {
    Rational lp = max_fractional_H_tiling(*mg, images_of(copies));
    if (lp < static_cast<long>(needed)) {
      result.status = SearchStatus::NoneExists;
      result.nodes = 1;
      return result;
    }
  }

  bool has_rows = false;
  CoverSearch search(g.vertex_count(), copies, hn, search_partitions(mg, opts, has_rows), opts);
  try {
    if (search.perfect()) {
      result.status = SearchStatus::Found;
      result.tiling = tiling_of(copies, search.chosen());
      std::string why;
      if (!verify_tiling(g, h, result.tiling, true, &why)) {
        throw Error("internal: exact cover produced an invalid tiling: " + why);
      }
    } else {
      result.status = SearchStatus::NoneExists;
    }
  } catch (const SearchAborted&) {
    result.status = SearchStatus::Unknown;
  }
  result.nodes = search.nodes();
  return result;
}

inline MaxTilingResult max_tiling_impl(const Graph& g, const MultipartiteGraph* mg, const Graph& h,
                                       const SearchOptions& opts) {
  MaxTilingResult result;
  const std::size_t hn = h.vertex_count();
  detail::require(hn >= 1, "H must have at least one vertex");
  if (opts.blocks) {
    detail::require(opts.blocks->vertex_count() == g.vertex_count(), "block structure does not match the host");
  }
  auto copies = enumerate_H_copies(g, h, opts.copy_cap);
  result.copies = copies.size();
  if (copies.empty()) {
    result.optimal = true;
    return result;
  }

  bool has_rows = false;
  auto parts = search_partitions(mg, opts, has_rows);
  CoverSearch search(g.vertex_count(), copies, hn, std::move(parts), opts);
  if (has_rows) search.mark_rows(mg ? 1 : 0);

  std::size_t bound = search.packing_bound();
  if (mg && opts.use_lp_bound && copies.size() <= opts.lp_bound_columns) {
    Rational lp = max_fractional_H_tiling(*mg, images_of(copies));
    bound = std::min<std::size_t>(bound, static_cast<std::size_t>(floor_of(lp).get_ui()));
  }
  result.upper_bound = bound;

  // Greedy incumbent in copy order.
  std::vector<bool> used(g.vertex_count(), false);
  std::vector<std::size_t> greedy;
  for (std::size_t c = 0; c < copies.size(); ++c) {
    const auto& img = copies[c].image;
    if (std::none_of(img.begin(), img.end(), [&](Vertex v) { return used[v]; })) {
      for (Vertex v : img) used[v] = true;
      greedy.push_back(c);
    }
  }
  search.set_incumbent(greedy);

  bool exhausted = false;
  try {
    if (greedy.size() < bound) search.maximise(bound);
    exhausted = true;
  } catch (const SearchAborted&) {
  }
  result.tiling = tiling_of(copies, search.best());
  result.optimal = exhausted || result.tiling.size() >= bound;
  result.nodes = search.nodes();
  std::string why;
  if (!verify_tiling(g, h, result.tiling, false, &why)) {
    throw Error("internal: packing search produced an invalid tiling: " + why);
  }
  return result;
}

}  // namespace detail

// Found: a verified perfect tiling. NoneExists: exhaustive search (or an
// admissible bound) rules one out. Unknown: node budget or time limit hit.
inline PerfectTilingResult perfect_H_tiling(const MultipartiteGraph& g, const Graph& h,
                                            const SearchOptions& opts = {}) {
  return detail::perfect_tiling_impl(g.graph(), &g, h, opts);
}

inline PerfectTilingResult perfect_H_tiling(const Graph& g, const Graph& h, const SearchOptions& opts = {}) {
  return detail::perfect_tiling_impl(g, nullptr, h, opts);
}

// Largest H-tiling found; optimal when the search finished or met its upper bound.
inline MaxTilingResult max_H_tiling(const MultipartiteGraph& g, const Graph& h, const SearchOptions& opts = {}) {
  return detail::max_tiling_impl(g.graph(), &g, h, opts);
}

inline MaxTilingResult max_H_tiling(const Graph& g, const Graph& h, const SearchOptions& opts = {}) {
  return detail::max_tiling_impl(g, nullptr, h, opts);
}

}  // namespace htile
