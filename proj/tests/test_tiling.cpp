#include <gtest/gtest.h>

#include <random>
#include <set>

#include "htile/constructions.hpp"
#include "htile/fractional.hpp"
#include "htile/tiling.hpp"
#include "oracles.hpp"

using namespace htile;

namespace {

std::vector<std::vector<Vertex>> images(const std::vector<HCopy>& copies) {
  std::vector<std::vector<Vertex>> out;
  for (const auto& c : copies) out.push_back(c.image);
  return out;
}

HCopy copy_from_witness(std::vector<Vertex> w) {
  HCopy c{w, w};
  std::sort(c.image.begin(), c.image.end());
  return c;
}

}  // namespace

TEST(Copies, FiveCycleInItself) {
  Graph g = oracle::c5();
  auto copies = enumerate_H_copies(g, g);
  ASSERT_EQ(copies.size(), 1u);
  EXPECT_EQ(copies[0].image, (std::vector<Vertex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(oracle::count_subgraph_copies(g, g), 1u);
}

TEST(Copies, TrianglesInCompleteTripartite) {
  auto g = complete_multipartite({2, 2, 2});
  EXPECT_EQ(enumerate_H_copies(g, oracle::complete(3)).size(), 8u);
}

TEST(Copies, ImagesNotSubgraphsAreCounted) {
  // One vertex set of size 5, but it carries several distinct five-cycles.
  auto g = complete_multipartite({2, 2, 1});
  EXPECT_EQ(enumerate_H_copies(g, oracle::c5()).size(), 1u);
  EXPECT_EQ(oracle::count_subgraph_copies(g.graph(), oracle::c5()), 4u);
}

TEST(Copies, MatchSubsetOracleAndWitnessesEmbed) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 2 + rng() % 2;
    auto g = oracle::random_multipartite({n, n, n}, 0.5 + 0.1 * (t % 4), rng);
    Graph h = (t % 3 == 0) ? oracle::complete(3) : (t % 3 == 1 ? oracle::c5() : oracle::k113());
    auto copies = enumerate_H_copies(g, h);
    auto got = images(copies);
    std::set<std::vector<Vertex>> as_set(got.begin(), got.end());
    ASSERT_EQ(as_set.size(), got.size());
    auto expected = oracle::host_subsets(g.graph(), h);
    EXPECT_EQ(as_set, std::set<std::vector<Vertex>>(expected.begin(), expected.end()));
    for (const auto& c : copies) {
      for (const auto& [u, v] : h.edges()) EXPECT_TRUE(g.adjacent(c.witness[u], c.witness[v]));
    }
  }
}

TEST(Copies, CapIsAResourceError) {
  EXPECT_THROW(enumerate_H_copies(complete_multipartite({3, 3, 3}), oracle::complete(3), 5), ResourceError);
}

TEST(VerifyTiling, DetectsEveryDefect) {
  Graph g = complete_multipartite({2, 2, 2}).graph();
  Graph k3 = oracle::complete(3);
  Tiling good{{copy_from_witness({0, 2, 4}), copy_from_witness({1, 3, 5})}};
  std::string why;
  EXPECT_TRUE(verify_tiling(g, k3, good, true, &why)) << why;

  Tiling overlap{{copy_from_witness({0, 2, 4}), copy_from_witness({0, 3, 5})}};
  EXPECT_FALSE(verify_tiling(g, k3, overlap, false, &why));

  Tiling non_edge{{copy_from_witness({0, 1, 4})}};
  EXPECT_FALSE(verify_tiling(g, k3, non_edge, false, &why));

  Tiling partial{{copy_from_witness({0, 2, 4})}};
  EXPECT_TRUE(verify_tiling(g, k3, partial, false));
  EXPECT_FALSE(verify_tiling(g, k3, partial, true, &why));

  HCopy mismatched = copy_from_witness({0, 2, 4});
  mismatched.image = {1, 2, 4};
  EXPECT_FALSE(verify_tiling(g, k3, Tiling{{mismatched}}, false, &why));
  EXPECT_FALSE(verify_tiling(g, k3, Tiling{{copy_from_witness({0, 2})}}, false, &why));
  EXPECT_NE(why.find("copy 0"), std::string::npos);
}

TEST(PerfectTiling, KnownInstances) {
  auto found = perfect_H_tiling(complete_multipartite({4, 3, 3}), oracle::c5());
  ASSERT_EQ(found.status, SearchStatus::Found);
  EXPECT_EQ(found.tiling.size(), 2u);
  EXPECT_TRUE(verify_tiling(complete_multipartite({4, 3, 3}).graph(), oracle::c5(), found.tiling, true));

  EXPECT_EQ(perfect_H_tiling(complete_multipartite({5, 4, 1}), oracle::c5()).status, SearchStatus::NoneExists);
  EXPECT_EQ(perfect_H_tiling(complete_multipartite({3, 3, 3}), oracle::c5()).status, SearchStatus::NoneExists);
  EXPECT_EQ(perfect_H_tiling(complete_multipartite({3, 3, 3}), oracle::complete(3)).status, SearchStatus::Found);
}

TEST(PerfectTiling, AgreesWithBruteForce) {
  std::mt19937_64 rng(17);
  int found = 0, none = 0;
  for (int t = 0; t < 60; ++t) {
    Graph h = (t % 2) ? oracle::complete(3) : oracle::c5();
    std::size_t n = (t % 2) ? 2 + rng() % 2 : 5;
    std::vector<std::size_t> sizes(3, n);
    if (t % 2 == 0) sizes = {4, 3, 3};
    auto g = oracle::random_multipartite(sizes, 0.55 + 0.05 * (t % 7), rng);
    auto subsets = oracle::host_subsets(g.graph(), h);
    bool exists = oracle::max_disjoint(subsets, g.vertex_count()) * h.vertex_count() == g.vertex_count();
    for (bool lp : {true, false}) {
      SearchOptions opts;
      opts.use_lp_bound = lp;
      auto res = perfect_H_tiling(g, h, opts);
      ASSERT_NE(res.status, SearchStatus::Unknown);
      EXPECT_EQ(res.status == SearchStatus::Found, exists) << "trial " << t;
      if (res.status == SearchStatus::Found) {
        EXPECT_TRUE(verify_tiling(g.graph(), h, res.tiling, true));
      }
    }
    (exists ? found : none)++;
  }
  EXPECT_GT(found, 0);
  EXPECT_GT(none, 0);
}

TEST(PerfectTiling, TinyBudgetGivesUnknown) {
  // Without its block layout this host needs a few hundred nodes.
  auto g = build_block_construction(gcd_lower_bound_spec(oracle::k113(), 10)).graph;
  SearchOptions opts;
  opts.node_budget = 1;
  opts.use_lp_bound = false;
  auto res = perfect_H_tiling(g, oracle::k113(), opts);
  EXPECT_EQ(res.status, SearchStatus::Unknown);
  EXPECT_TRUE(res.tiling.copies.empty());
}

TEST(PerfectTiling, PlainGraphHost) {
  Graph g = oracle::cycle(6);
  EXPECT_EQ(perfect_H_tiling(g, Graph(2, {{0, 1}})).status, SearchStatus::Found);
  EXPECT_EQ(perfect_H_tiling(g, oracle::complete(3)).status, SearchStatus::NoneExists);
}

TEST(MaxTiling, AgreesWithBruteForce) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 60; ++t) {
    Graph h = (t % 3 == 0) ? oracle::complete(3) : (t % 3 == 1 ? oracle::c5() : oracle::k113());
    auto g = oracle::random_multipartite({3 + rng() % 2, 3, 3}, 0.4 + 0.1 * (t % 5), rng);
    auto expected = oracle::max_disjoint(oracle::host_subsets(g.graph(), h), g.vertex_count());
    auto res = max_H_tiling(g, h);
    EXPECT_TRUE(res.optimal);
    EXPECT_EQ(res.tiling.size(), expected) << "trial " << t;
    EXPECT_GE(res.upper_bound, res.tiling.size());
    EXPECT_LE(res.upper_bound, g.vertex_count() / h.vertex_count());
    EXPECT_TRUE(verify_tiling(g.graph(), h, res.tiling, false));
  }
}

TEST(MaxTiling, BoundsSandwichTheFractionalValue) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto g = oracle::random_multipartite({4, 4, 4}, 0.5 + 0.05 * (t % 6), rng);
    Graph h = oracle::c5();
    auto res = max_H_tiling(g, h);
    Rational lp = max_fractional_H_tiling(g, images(enumerate_H_copies(g, h)));
    EXPECT_LE(Rational(static_cast<long>(res.tiling.size())), lp);
    EXPECT_LE(lp, make_rational(static_cast<long>(g.vertex_count()), 5));
  }
}

TEST(MaxTiling, CompleteTripartiteFiveCycle) {
  auto res = max_H_tiling(complete_multipartite({5, 5, 5}), oracle::c5());
  EXPECT_EQ(res.tiling.size(), 3u);
  EXPECT_TRUE(res.optimal);
}

TEST(MaxTiling, NoCopiesIsTriviallyOptimal) {
  auto res = max_H_tiling(complete_multipartite({1, 1, 1}), oracle::c5());
  EXPECT_EQ(res.copies, 0u);
  EXPECT_EQ(res.tiling.size(), 0u);
  EXPECT_TRUE(res.optimal);
}

TEST(MaxTiling, SigmaHostReachesTheRowBound) {
  auto built = build_block_construction(sigma_lower_bound_spec(oracle::c5(), 10));
  SearchOptions opts;
  opts.blocks = built.blocks;
  auto res = max_H_tiling(built.graph, oracle::c5(), opts);
  EXPECT_TRUE(res.optimal);
  EXPECT_EQ(res.tiling.size(), 3u);
  EXPECT_EQ(row_tiling_upper_bound(built.blocks, oracle::c5()), 3u);
  auto without = max_H_tiling(built.graph, oracle::c5());
  EXPECT_TRUE(without.optimal);
  EXPECT_EQ(without.tiling.size(), 3u);
}

TEST(MaxTiling, MismatchedBlocksRejected) {
  SearchOptions opts;
  opts.blocks = BlockStructure({{1, 1}, {1, 1}});
  EXPECT_THROW(max_H_tiling(complete_multipartite({3, 3, 3}), oracle::complete(3), opts), ContractError);
}

TEST(MaxTiling, Deterministic) {
  std::mt19937_64 rng(37);
  auto g = oracle::random_multipartite({4, 4, 4}, 0.7, rng);
  auto a = max_H_tiling(g, oracle::c5()), b = max_H_tiling(g, oracle::c5());
  ASSERT_EQ(a.tiling.size(), b.tiling.size());
  for (std::size_t k = 0; k < a.tiling.size(); ++k) EXPECT_EQ(a.tiling.copies[k].witness, b.tiling.copies[k].witness);
  EXPECT_EQ(a.nodes, b.nodes);
}
