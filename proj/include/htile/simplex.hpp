#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "htile/error.hpp"
#include "htile/rational.hpp"

namespace htile {

// Sparse LP column: entries (rows[k], values[k]) plus objective coefficient.
struct LpColumn {
  std::vector<std::size_t> rows;
  std::vector<Rational> values;
  Rational cost;
};

struct LpResult {
  Rational objective;
  std::vector<Rational> primal;  // one value per column
  std::vector<Rational> duals;   // y = c_B B^-1, one per row
  std::size_t pivots = 0;
};

enum class PivotRule {
  // Most negative reduced cost; after a run of degenerate pivots it switches
  // to Bland's rule until the objective strictly improves again.
  DantzigWithBlandFallback,
  // Bland's rule throughout.
  Bland,
};

// Exact revised primal simplex for
//     minimise cost . x  subject to  A x = rhs,  x >= 0,
// with rhs >= 0 and a starting basis of unit columns (initial_basis[i] is a
// column equal to e_i). Both pivot rules terminate: Bland's rule cannot cycle,
// and Dantzig steps only resume after a strict objective decrease. Ratio ties
// leave by lowest column index. The basis inverse is kept dense; rows are
// few, columns many. Pricing runs on integers: duals and columns are scaled
// by positive common denominators, which preserves every comparison.
class ExactSimplex {
 public:
  ExactSimplex(std::size_t rows, const std::vector<LpColumn>& columns, std::vector<Rational> rhs,
               std::vector<std::size_t> initial_basis, PivotRule rule = PivotRule::DantzigWithBlandFallback)
      : m_(rows), columns_(columns), xb_(std::move(rhs)), basis_(std::move(initial_basis)), rule_(rule) {
    detail::require(xb_.size() == m_ && basis_.size() == m_, "simplex: dimension mismatch");
    is_basic_.assign(columns_.size(), false);
    for (std::size_t i = 0; i < m_; ++i) {
      const LpColumn& c = columns_.at(basis_[i]);
      detail::require(c.rows.size() == 1 && c.rows[0] == i && c.values[0] == 1,
                      "simplex: initial basis column " + std::to_string(basis_[i]) + " is not e_" +
                          std::to_string(i));
      detail::require(xb_[i] >= 0, "simplex: right-hand side must be non-negative");
      is_basic_[basis_[i]] = true;
    }
    binv_.assign(m_, std::vector<Rational>(m_));
    for (std::size_t i = 0; i < m_; ++i) binv_[i][i] = 1;
    scale_columns();
  }

  LpResult solve(std::optional<std::size_t> max_pivots = std::nullopt) {
    std::size_t pivots = 0;
    std::size_t degenerate_run = 0;
    bool bland = rule_ == PivotRule::Bland;
    std::vector<Rational> y(m_);
    std::vector<Rational> alpha(m_);
    Rational term, ratio, best_ratio;
    for (;;) {
      compute_duals(y);
      std::optional<std::size_t> entering = price(y, bland);
      if (!entering) break;
      if (max_pivots && pivots >= *max_pivots) {
        throw ResourceError("simplex exceeded " + std::to_string(*max_pivots) + " pivots");
      }

      const LpColumn& col = columns_[*entering];
      for (std::size_t i = 0; i < m_; ++i) {
        alpha[i] = 0;
        for (std::size_t k = 0; k < col.rows.size(); ++k) {
          const Rational& bij = binv_[i][col.rows[k]];
          if (sgn(bij) == 0) continue;
          term = bij * col.values[k];
          alpha[i] += term;
        }
      }
      std::optional<std::size_t> leave;
      for (std::size_t i = 0; i < m_; ++i) {
        if (sgn(alpha[i]) <= 0) continue;
        ratio = xb_[i] / alpha[i];
        if (!leave || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (!leave) throw ContractError("simplex: objective is unbounded below");
      pivot(*leave, *entering, alpha);
      ++pivots;

      if (rule_ == PivotRule::Bland) continue;
      if (sgn(best_ratio) == 0) {
        if (++degenerate_run >= kDegenerateLimit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }

    LpResult result;
    result.pivots = pivots;
    result.duals = y;
    result.primal.assign(columns_.size(), Rational(0));
    result.objective = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      result.primal[basis_[i]] = xb_[i];
      result.objective += columns_[basis_[i]].cost * xb_[i];
    }
    return result;
  }

 private:
  static constexpr std::size_t kDegenerateLimit = 50;
  static constexpr long long kSmall = 1LL << 20;
  static constexpr long long kWide = 1LL << 62;

  // Integer copies of every column and cost, scaled by one common denominator.
  void scale_columns() {
    mpz_class common = 1;
    for (const auto& col : columns_) {
      mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), col.cost.get_den_mpz_t());
      for (const auto& v : col.values) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), v.get_den_mpz_t());
    }
    small_ = true;
    int_cost_.resize(columns_.size());
    int_values_.resize(columns_.size());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      const LpColumn& col = columns_[j];
      int_cost_[j] = col.cost.get_num() * (common / col.cost.get_den());
      small_ = small_ && fits(int_cost_[j], kSmall);
      int_values_[j].resize(col.values.size());
      for (std::size_t k = 0; k < col.values.size(); ++k) {
        int_values_[j][k] = col.values[k].get_num() * (common / col.values[k].get_den());
        small_ = small_ && fits(int_values_[j][k], kSmall);
      }
    }
    if (small_) {
      small_cost_.resize(columns_.size());
      small_values_.resize(columns_.size());
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        small_cost_[j] = int_cost_[j].get_si();
        for (const auto& v : int_values_[j]) small_values_[j].push_back(v.get_si());
      }
    }
  }

  static bool fits(const mpz_class& z, long long bound) {
    return mpz_cmpabs_ui(z.get_mpz_t(), static_cast<unsigned long>(bound)) < 0;
  }

  // Entering column: the lowest-index improving one under Bland, otherwise
  // the most negative reduced cost (ties to the lowest index).
  std::optional<std::size_t> price(const std::vector<Rational>& y, bool bland) {
    mpz_class denom = 1;
    for (const auto& yi : y) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), yi.get_den_mpz_t());
    std::vector<mpz_class> scaled(m_);
    bool wide_ok = small_ && fits(denom, kWide);
    for (std::size_t i = 0; i < m_; ++i) {
      scaled[i] = y[i].get_num() * (denom / y[i].get_den());
      wide_ok = wide_ok && fits(scaled[i], kWide);
    }
    std::optional<std::size_t> best;
    if (wide_ok) {
      std::vector<long long> ys(m_);
      for (std::size_t i = 0; i < m_; ++i) ys[i] = scaled[i].get_si();
      const __int128 d = denom.get_si();
      __int128 best_value = 0;
      for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (is_basic_[j]) continue;
        const auto& rows = columns_[j].rows;
        const auto& vals = small_values_[j];
        __int128 value = static_cast<__int128>(small_cost_[j]) * d;
        for (std::size_t k = 0; k < rows.size(); ++k) value -= static_cast<__int128>(ys[rows[k]]) * vals[k];
        if (value < best_value) {
          best = j;
          best_value = value;
          if (bland) break;
        }
      }
      return best;
    }
    mpz_class value, best_value = 0, term;
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (is_basic_[j]) continue;
      const auto& rows = columns_[j].rows;
      value = int_cost_[j] * denom;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        term = scaled[rows[k]] * int_values_[j][k];
        value -= term;
      }
      if (value < best_value) {
        best = j;
        best_value = value;
        if (bland) break;
      }
    }
    return best;
  }

  void compute_duals(std::vector<Rational>& y) const {
    Rational term;
    for (std::size_t j = 0; j < m_; ++j) y[j] = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational& cb = columns_[basis_[i]].cost;
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j < m_; ++j) {
        if (sgn(binv_[i][j]) == 0) continue;
        term = cb * binv_[i][j];
        y[j] += term;
      }
    }
  }

  void pivot(std::size_t leave, std::size_t entering, const std::vector<Rational>& alpha) {
    const Rational pivot_value = alpha[leave];
    auto& prow = binv_[leave];
    for (auto& v : prow) {
      if (sgn(v) != 0) v /= pivot_value;
    }
    xb_[leave] /= pivot_value;
    Rational term;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || sgn(alpha[i]) == 0) continue;
      auto& row = binv_[i];
      for (std::size_t j = 0; j < m_; ++j) {
        if (sgn(prow[j]) == 0) continue;
        term = alpha[i] * prow[j];
        row[j] -= term;
      }
      term = alpha[i] * xb_[leave];
      xb_[i] -= term;
    }
    is_basic_[basis_[leave]] = false;
    is_basic_[entering] = true;
    basis_[leave] = entering;
  }

  std::size_t m_;
  const std::vector<LpColumn>& columns_;
  std::vector<Rational> xb_;
  std::vector<std::size_t> basis_;
  std::vector<bool> is_basic_;
  std::vector<std::vector<Rational>> binv_;
  PivotRule rule_;
  bool small_ = false;
  std::vector<mpz_class> int_cost_;
  std::vector<std::vector<mpz_class>> int_values_;
  std::vector<long long> small_cost_;
  std::vector<std::vector<long long>> small_values_;
};

}  // namespace htile
