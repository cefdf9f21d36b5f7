#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "htile/constructions.hpp"
#include "htile/params.hpp"
#include "htile/tiling.hpp"
#include "oracles.hpp"

using namespace htile;

namespace {

using Sizes = std::vector<std::size_t>;

std::size_t max_block(const ConstructionSpec& spec) {
  std::size_t m = 0;
  for (const auto& column : spec.block_sizes) m = std::max(m, *std::max_element(column.begin(), column.end()));
  return m;
}

std::vector<Graph> graphs_with_finite_gcd_above_one() {
  std::vector<Graph> out{oracle::k113()};
  std::mt19937_64 rng(404);
  while (out.size() < 6) {
    Graph h = oracle::random_connected(4 + rng() % 4, 0.5, rng);
    auto p = oracle::profile(h);
    if (p.r >= 3 && p.gcd > 1) out.push_back(h);
  }
  return out;
}

}  // namespace

TEST(GcdConstruction, ShapeAcrossSizes) {
  for (const Graph& h : graphs_with_finite_gcd_above_one()) {
    const std::size_t r = chromatic_number(h);
    for (std::size_t n = r; n <= 14; ++n) {
      auto spec = gcd_lower_bound_spec(h, n);
      EXPECT_EQ(spec.family, ConstructionFamily::GcdObstruction);
      auto built = build_block_construction(spec);
      const auto& b = built.blocks;
      EXPECT_EQ(b.row_size(0), b.row_size(1) + 1) << "n=" << n;
      for (std::size_t j = 3; j < r; ++j) EXPECT_EQ(b.row_size(j), b.row_size(1));
      const std::size_t ceil_n_r = (n + r - 1) / r;
      EXPECT_EQ(max_block(spec), n % r == 0 ? n / r + 1 : ceil_n_r);
      EXPECT_EQ(min_multipartite_degree(built.graph), n - max_block(spec));
    }
  }
}

TEST(GcdConstruction, K113HostsHaveNoPerfectTiling) {
  for (std::size_t n : {9u, 10u}) {
    auto built = build_block_construction(gcd_lower_bound_spec(oracle::k113(), n));
    SearchOptions opts;
    opts.blocks = built.blocks;
    EXPECT_EQ(perfect_H_tiling(built.graph, oracle::k113(), opts).status, SearchStatus::NoneExists) << n;
    EXPECT_EQ(perfect_H_tiling(built.graph, oracle::k113()).status, SearchStatus::NoneExists) << n;
  }
}

TEST(GcdConstruction, Preconditions) {
  EXPECT_THROW(gcd_lower_bound_spec(oracle::c5(), 10), ContractError);
  EXPECT_THROW(gcd_lower_bound_spec(oracle::complete(3), 10), ContractError);
  EXPECT_THROW(gcd_lower_bound_spec(oracle::k113(), 2), ContractError);
  EXPECT_THROW(gcd_lower_bound_spec(Graph(4, {{0, 1}, {2, 3}}), 10), ContractError);
}

TEST(SigmaConstruction, FiveCycleAtTen) {
  auto spec = sigma_lower_bound_spec(oracle::c5(), 10);
  EXPECT_EQ(spec.family, ConstructionFamily::SigmaObstruction);
  for (const auto& column : spec.block_sizes) EXPECT_EQ(column, (Sizes{1, 5, 4}));
  auto built = build_block_construction(spec);
  EXPECT_EQ(min_multipartite_degree(built.graph), 5u);
  EXPECT_EQ(built.blocks.row_size(0), 3u);
}

TEST(SigmaConstruction, FirstRowSitsJustBelowSigmaN) {
  for (std::size_t n = 1; n <= 20; ++n) {
    auto built = build_block_construction(sigma_lower_bound_spec(oracle::c5(), n));
    const std::size_t first = (n + 4) / 5 - 1;
    EXPECT_EQ(built.blocks.row_size(0), 3 * first);
    for (const auto& column : built.blocks.block_sizes()) {
      EXPECT_EQ(std::accumulate(column.begin(), column.end(), std::size_t{0}), n);
      EXPECT_LE(column[1] - column[2], 1u);
    }
  }
  EXPECT_THROW(sigma_lower_bound_spec(oracle::k113(), 10), ContractError);
}

TEST(BlockConstruction, RejectsBadMatrices) {
  EXPECT_THROW(build_block_construction({3, 4, {{1, 1, 2}, {1, 1, 2}}, ConstructionFamily::Custom}), ContractError);
  EXPECT_THROW(build_block_construction({2, 4, {{1, 2}, {2, 2}}, ConstructionFamily::Custom}), ContractError);
}

TEST(UGraph, SizesForFiveCycle) {
  EXPECT_EQ(build_U(oracle::c5(), 1), (Sizes{16, 15, 14}));
  EXPECT_EQ(build_U(oracle::c5(), 2), (Sizes{31, 30, 29}));
  EXPECT_THROW(build_U(oracle::c5(), 0), ContractError);
  EXPECT_THROW(build_U(oracle::k113(), 1), ContractError);
  EXPECT_THROW(build_U(oracle::complete(3), 1), ContractError);
}

TEST(UGraph, MinimalSForFiveCycle) {
  auto u = find_min_s_for_U(oracle::c5(), 8);
  ASSERT_TRUE(u);
  EXPECT_EQ(u->s, 1u);
  EXPECT_EQ(u->sizes, (Sizes{16, 15, 14}));
  EXPECT_EQ(u->solution.counts, (Sizes{2, 3, 4}));
  EXPECT_FALSE(find_min_s_for_U(oracle::c5(), 0));
  EXPECT_THROW(find_min_s_for_U(oracle::k113(), 8), ContractError);
}

TEST(UGraph, TilesForRandomGcdOneGraphs) {
  std::mt19937_64 rng(55);
  int checked = 0;
  while (checked < 8) {
    Graph h = oracle::random_connected(3 + rng() % 4, 0.5, rng);
    auto p = oracle::profile(h);
    if (p.r < 3 || p.gcd != 1) continue;
    auto u = find_min_s_for_U(h, 3);
    ASSERT_TRUE(u);
    Tiling t = realize_pattern_solution(u->sizes, h, u->solution);
    EXPECT_TRUE(verify_tiling(complete_multipartite(u->sizes).graph(), h, t, true));
    ++checked;
  }
}

TEST(Dummies, RaiseMinDegreeByM) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::random_multipartite({3, 3, 3}, 0.5, rng);
    std::size_t m = rng() % 4;
    auto aug = augment_with_dummies(g, m);
    EXPECT_EQ(aug.graph.vertex_count(), 9 + 3 * m);
    EXPECT_EQ(oracle::delta_star(aug.graph), oracle::delta_star(g) + m);
    EXPECT_EQ(std::count(aug.dummy.begin(), aug.dummy.end(), true), static_cast<long>(3 * m));
    for (Vertex u = 0; u < 9; ++u) {
      EXPECT_EQ(aug.graph.class_of(u), g.class_of(u));
      for (Vertex v = 0; v < 9; ++v) EXPECT_EQ(aug.graph.adjacent(u, v), g.adjacent(u, v));
    }
  }
}

TEST(Dummies, ZeroIsIdentity) {
  std::mt19937_64 rng(9);
  auto g = oracle::random_multipartite({4, 4, 4}, 0.5, rng);
  EXPECT_EQ(augment_with_dummies(g, 0).graph, g);
  EXPECT_THROW(augment_with_dummies(complete_multipartite({2, 1, 2}), 1), ContractError);
}

TEST(Dummies, DroppingDummyCopiesLosesAtMostRM) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    auto g = oracle::random_multipartite({3, 3, 3}, 0.45, rng);
    const std::size_t m = 1 + t % 2;
    auto aug = augment_with_dummies(g, m);
    auto big = max_H_tiling(aug.graph, oracle::complete(3));
    std::size_t kept = 0;
    for (const auto& c : big.tiling.copies) {
      if (std::none_of(c.image.begin(), c.image.end(), [&](Vertex v) { return aug.dummy[v]; })) ++kept;
    }
    EXPECT_GE(kept + 3 * m, big.tiling.size());
    EXPECT_LE(kept, max_H_tiling(g, oracle::complete(3)).tiling.size());
  }
}

TEST(RandomPartite, SeededAndAboveTarget) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t target = 0; target <= n; ++target) {
      auto g = random_partite_graph(3, n, target, 1000 + n * 10 + target, 0.1);
      EXPECT_EQ(g, random_partite_graph(3, n, target, 1000 + n * 10 + target, 0.1));
      EXPECT_TRUE(g.balanced());
      EXPECT_GE(min_multipartite_degree(g), target);
    }
  }
  EXPECT_EQ(random_partite_graph(4, 5, 5, 1, 0.0), complete_multipartite({5, 5, 5, 5}));
  EXPECT_EQ(random_partite_graph(3, 5, 0, 1, 0.0).graph().edge_count(), 0u);
  EXPECT_EQ(random_partite_graph(3, 5, 2, 1, 0.0).graph().edge_count(), 3u * 5 * 2);
  EXPECT_THROW(random_partite_graph(3, 5, 6, 1), ContractError);
  EXPECT_THROW(random_partite_graph(3, 5, 2, 1, 1.5), ContractError);
}

TEST(RandomPartite, SeedsDiffer) {
  EXPECT_NE(random_partite_graph(3, 8, 3, 1), random_partite_graph(3, 8, 3, 2));
}
