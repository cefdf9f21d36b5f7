#include <gtest/gtest.h>

#include <optional>
#include <random>
#include <vector>

#include "htile/simplex.hpp"

using namespace htile;

namespace {

struct DenseLp {
  std::size_t m = 0;
  std::vector<std::vector<Rational>> a;  // m x k
  std::vector<Rational> rhs;
  std::vector<Rational> cost;
};

// Optimum over all basic feasible solutions by direct Gaussian elimination.
std::optional<Rational> brute_optimum(const DenseLp& lp) {
  const std::size_t k = lp.cost.size();
  std::optional<Rational> best;
  std::vector<std::size_t> pick;
  auto solve_basis = [&]() {
    const std::size_t m = lp.m;
    std::vector<std::vector<Rational>> mat(m, std::vector<Rational>(m + 1));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) mat[i][j] = lp.a[i][pick[j]];
      mat[i][m] = lp.rhs[i];
    }
    for (std::size_t c = 0; c < m; ++c) {
      std::size_t p = c;
      while (p < m && mat[p][c] == 0) ++p;
      if (p == m) return;
      std::swap(mat[p], mat[c]);
      for (std::size_t i = 0; i < m; ++i) {
        if (i == c || mat[i][c] == 0) continue;
        Rational f = mat[i][c] / mat[c][c];
        for (std::size_t j = c; j <= m; ++j) mat[i][j] -= f * mat[c][j];
      }
    }
    Rational obj = 0;
    for (std::size_t i = 0; i < m; ++i) {
      Rational x = mat[i][m] / mat[i][i];
      if (x < 0) return;
      obj += lp.cost[pick[i]] * x;
    }
    if (!best || obj < *best) best = obj;
  };
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() == lp.m) {
      solve_basis();
      return;
    }
    for (std::size_t j = from; j < k; ++j) {
      pick.push_back(j);
      self(self, j + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

// Appends unit columns so the simplex has its starting basis.
std::vector<LpColumn> to_columns(DenseLp& lp, std::vector<std::size_t>& basis, const Rational& unit_cost) {
  std::vector<LpColumn> cols;
  const std::size_t k = lp.cost.size();
  for (std::size_t j = 0; j < k; ++j) {
    LpColumn c;
    for (std::size_t i = 0; i < lp.m; ++i) {
      if (lp.a[i][j] != 0) {
        c.rows.push_back(i);
        c.values.push_back(lp.a[i][j]);
      }
    }
    c.cost = lp.cost[j];
    cols.push_back(c);
  }
  for (std::size_t i = 0; i < lp.m; ++i) {
    basis.push_back(cols.size());
    cols.push_back({{i}, {Rational(1)}, unit_cost});
    for (std::size_t r = 0; r < lp.m; ++r) lp.a[r].push_back(r == i ? 1 : 0);
    lp.cost.push_back(unit_cost);
  }
  return cols;
}

DenseLp random_lp(std::mt19937_64& rng, std::size_t m, std::size_t k, long scale) {
  DenseLp lp;
  lp.m = m;
  lp.a.assign(m, std::vector<Rational>(k));
  for (auto& row : lp.a)
    for (auto& x : row) x = Rational(static_cast<long>(1 + rng() % 5) * scale, static_cast<long>(1 + rng() % 3));
  for (auto& row : lp.a)
    for (auto& x : row) x.canonicalize();
  for (std::size_t i = 0; i < m; ++i) lp.rhs.emplace_back(static_cast<long>(1 + rng() % 7));
  for (std::size_t j = 0; j < k; ++j) lp.cost.emplace_back(static_cast<long>(rng() % 7) - 3);
  return lp;
}

}  // namespace

TEST(Simplex, TinyKnownOptimum) {
  // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6.  Optimum x = 8/5, y = 6/5.
  std::vector<LpColumn> cols = {{{0, 1}, {Rational(1), Rational(3)}, Rational(-1)},
                                {{0, 1}, {Rational(2), Rational(1)}, Rational(-1)},
                                {{0}, {Rational(1)}, Rational(0)},
                                {{1}, {Rational(1)}, Rational(0)}};
  for (auto rule : {PivotRule::DantzigWithBlandFallback, PivotRule::Bland}) {
    ExactSimplex lp(2, cols, {Rational(4), Rational(6)}, {2, 3}, rule);
    auto res = lp.solve();
    EXPECT_EQ(res.objective, make_rational(-14, 5));
    EXPECT_EQ(res.primal[0], make_rational(8, 5));
    EXPECT_EQ(res.primal[1], make_rational(6, 5));
    // Duals certify optimality: reduced costs are non-negative.
    for (const auto& c : cols) {
      Rational d = c.cost;
      for (std::size_t k = 0; k < c.rows.size(); ++k) d -= res.duals[c.rows[k]] * c.values[k];
      EXPECT_GE(d, 0);
    }
  }
}

TEST(Simplex, MatchesBasisEnumeration) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + rng() % 3, k = 1 + rng() % 5;
    DenseLp lp = random_lp(rng, m, k, 1);
    std::vector<std::size_t> basis;
    auto cols = to_columns(lp, basis, Rational(0));
    auto expected = brute_optimum(lp);
    ASSERT_TRUE(expected.has_value());
    for (auto rule : {PivotRule::DantzigWithBlandFallback, PivotRule::Bland}) {
      ExactSimplex solver(m, cols, lp.rhs, basis, rule);
      auto res = solver.solve();
      EXPECT_EQ(res.objective, *expected) << "trial " << t;
      for (std::size_t i = 0; i < m; ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < cols.size(); ++j) row += lp.a[i][j] * res.primal[j];
        EXPECT_EQ(row, lp.rhs[i]);
      }
      for (const auto& x : res.primal) EXPECT_GE(x, 0);
    }
  }
}

TEST(Simplex, WideCoefficientsUseExactPricing) {
  // Coefficients far beyond the machine-integer pricing path.
  std::mt19937_64 rng(5);
  const long big = 1L << 40;
  for (int t = 0; t < 20; ++t) {
    DenseLp lp = random_lp(rng, 2, 4, big);
    std::vector<std::size_t> basis;
    auto cols = to_columns(lp, basis, Rational(0));
    auto expected = brute_optimum(lp);
    ExactSimplex solver(2, cols, lp.rhs, basis);
    EXPECT_EQ(solver.solve().objective, *expected);
  }
}

TEST(Simplex, PhaseOneDetectsInfeasibility) {
  // x1 + x2 = 1 and 2 x1 + 2 x2 = 3 cannot both hold: positive artificial optimum.
  std::vector<LpColumn> cols = {{{0, 1}, {Rational(1), Rational(2)}, Rational(0)},
                                {{0, 1}, {Rational(1), Rational(2)}, Rational(0)},
                                {{0}, {Rational(1)}, Rational(1)},
                                {{1}, {Rational(1)}, Rational(1)}};
  ExactSimplex lp(2, cols, {Rational(1), Rational(3)}, {2, 3});
  auto res = lp.solve();
  EXPECT_GT(res.objective, 0);
  // y . rhs > 0 and y . A_j <= 0 on the structural columns.
  EXPECT_EQ(res.duals[0] * 1 + res.duals[1] * 3, res.objective);
  for (std::size_t j = 0; j < 2; ++j) {
    Rational dot = 0;
    for (std::size_t k = 0; k < cols[j].rows.size(); ++k) dot += res.duals[cols[j].rows[k]] * cols[j].values[k];
    EXPECT_LE(dot, 0);
  }
}

TEST(Simplex, UnboundedIsAContractError) {
  // min -x  s.t.  x - y + s = 1: x can grow with y.
  std::vector<LpColumn> cols = {{{0}, {Rational(1)}, Rational(-1)},
                                {{0}, {Rational(-1)}, Rational(0)},
                                {{0}, {Rational(1)}, Rational(0)}};
  ExactSimplex lp(1, cols, {Rational(1)}, {2});
  EXPECT_THROW(lp.solve(), ContractError);
}

TEST(Simplex, PivotLimitIsAResourceError) {
  std::vector<LpColumn> cols = {{{0}, {Rational(1)}, Rational(-1)}, {{0}, {Rational(1)}, Rational(0)}};
  ExactSimplex lp(1, cols, {Rational(1)}, {1});
  EXPECT_THROW(lp.solve(0), ResourceError);
}

TEST(Simplex, RejectsBadStartingBasis) {
  std::vector<LpColumn> cols = {{{0}, {Rational(2)}, Rational(0)}};
  EXPECT_THROW(ExactSimplex(1, cols, {Rational(1)}, {0}), ContractError);
  std::vector<LpColumn> unit = {{{0}, {Rational(1)}, Rational(0)}};
  EXPECT_THROW(ExactSimplex(1, unit, {Rational(-1)}, {0}), ContractError);
}
