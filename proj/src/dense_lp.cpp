/*
Copyright 2026 The coursealloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <stdexcept>

#include "coursealloc/error.hpp"
#include "coursealloc/numeric.hpp"

namespace coursealloc::numeric {

namespace {

// Switch from Dantzig's rule to Bland's rule after this many consecutive
// degenerate pivots. Bland's rule is then kept, which rules out cycling.
constexpr int kDegenerateStreak = 50;

template <typename Scalar>
class Tableau {
 public:
  using T = NumTraits<Scalar>;

  Tableau(int rows, int cols)
      : m_(rows), n_(cols), cell_(rows, std::vector<Scalar>(cols + 1)),
        basis_(rows, -1), blocked_(cols, false) {}

  Scalar& at(int r, int c) { return cell_[r][c]; }
  Scalar& rhs(int r) { return cell_[r][n_]; }
  int& basis(int r) { return basis_[r]; }
  void Block(int col) { blocked_[col] = true; }

  // Maximizes cost'x from the current basis. Returns false if unbounded.
  bool Optimize(const std::vector<Scalar>& cost, int& pivots) {
    std::vector<Scalar> reduced(n_ + 1);
    for (int c = 0; c <= n_; ++c) {
      reduced[c] = c < n_ ? cost[c] : Scalar(0);
      for (int r = 0; r < m_; ++r) {
        const Scalar& cb = cost[basis_[r]];
        if (cb != 0) reduced[c] -= cb * cell_[r][c];
      }
    }
    bool bland = std::is_same_v<Scalar, Rational>;
    int degenerate = 0;
    const Scalar eps = T::Eps();
    while (true) {
      int enter = -1;
      for (int c = 0; c < n_; ++c) {
        if (blocked_[c] || !(reduced[c] > eps)) continue;
        if (enter < 0 || (!bland && reduced[c] > reduced[enter])) enter = c;
        if (bland) break;
      }
      if (enter < 0) return true;
      int leave = -1;
      Scalar best_ratio = 0;
      for (int r = 0; r < m_; ++r) {
        const Scalar& a = cell_[r][enter];
        if (!(a > eps)) continue;
        Scalar ratio = cell_[r][n_] / a;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[leave])) {
          leave = r;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      if (best_ratio <= eps) {
        if (++degenerate >= kDegenerateStreak) bland = true;
      } else {
        degenerate = 0;
      }
      Pivot(leave, enter, reduced);
      ++pivots;
    }
  }

  void Pivot(int row, int col, std::vector<Scalar>& reduced) {
    Scalar inv = Scalar(1) / cell_[row][col];
    for (int c = 0; c <= n_; ++c) cell_[row][c] *= inv;
    cell_[row][col] = 1;
    for (int r = 0; r < m_; ++r) {
      if (r == row) continue;
      Scalar f = cell_[r][col];
      if (f == 0) continue;
      for (int c = 0; c <= n_; ++c) {
        if (cell_[row][c] != 0) cell_[r][c] -= f * cell_[row][c];
      }
      cell_[r][col] = 0;
    }
    Scalar f = reduced[col];
    if (f != 0) {
      for (int c = 0; c <= n_; ++c) {
        if (cell_[row][c] != 0) reduced[c] -= f * cell_[row][c];
      }
      reduced[col] = 0;
    }
    basis_[row] = col;
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_;
  int n_;
  std::vector<std::vector<Scalar>> cell_;
  std::vector<int> basis_;
  std::vector<bool> blocked_;
};

}  // namespace

template <typename Scalar>
DenseLpResult<Scalar> SolveDenseLp(const DenseLp<Scalar>& lp) {
  using T = NumTraits<Scalar>;
  const int m = static_cast<int>(lp.rows.size());
  const int n = lp.num_vars;
  if (static_cast<int>(lp.rhs.size()) != m ||
      static_cast<int>(lp.objective.size()) != n) {
    throw std::invalid_argument("SolveDenseLp: inconsistent dimensions");
  }
  int num_art = 0;
  for (const Scalar& b : lp.rhs) {
    if (b < 0) ++num_art;
  }
  const int cols = n + m + num_art;
  Tableau<Scalar> tab(m, cols);
  int art = n + m;
  for (int r = 0; r < m; ++r) {
    if (static_cast<int>(lp.rows[r].size()) != n) {
      throw std::invalid_argument("SolveDenseLp: row length mismatch");
    }
    const bool flip = lp.rhs[r] < 0;
    for (int c = 0; c < n; ++c) {
      tab.at(r, c) = flip ? Scalar(-lp.rows[r][c]) : lp.rows[r][c];
    }
    tab.at(r, n + r) = flip ? -1 : 1;
    tab.rhs(r) = flip ? Scalar(-lp.rhs[r]) : lp.rhs[r];
    if (flip) {
      tab.at(r, art) = 1;
      tab.basis(r) = art++;
    } else {
      tab.basis(r) = n + r;
    }
  }

  DenseLpResult<Scalar> result;
  if (num_art > 0) {
    std::vector<Scalar> phase1(cols, Scalar(0));
    for (int c = n + m; c < cols; ++c) phase1[c] = -1;
    tab.Optimize(phase1, result.pivots);
    Scalar infeasibility = 0;
    for (int r = 0; r < m; ++r) {
      if (tab.basis(r) >= n + m) infeasibility += tab.rhs(r);
    }
    if (infeasibility > T::Eps() * (1 + m)) {
      result.status = LpStatus::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out where possible; rows where that
    // fails are redundant and keep their artificial pinned at zero.
    std::vector<Scalar> dummy(cols + 1, Scalar(0));
    for (int r = 0; r < m; ++r) {
      if (tab.basis(r) < n + m) continue;
      for (int c = 0; c < n + m; ++c) {
        if (T::Abs(tab.at(r, c)) > T::Eps()) {
          tab.Pivot(r, c, dummy);
          ++result.pivots;
          break;
        }
      }
    }
    for (int c = n + m; c < cols; ++c) tab.Block(c);
  }

  std::vector<Scalar> cost(cols, Scalar(0));
  for (int c = 0; c < n; ++c) cost[c] = lp.objective[c];
  if (!tab.Optimize(cost, result.pivots)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.x.assign(n, Scalar(0));
  for (int r = 0; r < m; ++r) {
    if (tab.basis(r) < n) result.x[tab.basis(r)] = tab.rhs(r);
  }
  result.value = 0;
  for (int c = 0; c < n; ++c) result.value += lp.objective[c] * result.x[c];
  return result;
}

template DenseLpResult<double> SolveDenseLp(const DenseLp<double>&);
template DenseLpResult<Rational> SolveDenseLp(const DenseLp<Rational>&);

}  // namespace coursealloc::numeric
