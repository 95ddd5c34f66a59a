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

// Generalized-upper-bound simplex for the assignment LP.
//
// Every student row sum_b x_sb + slack_s = 1 has exactly one "key" basic
// column (a bundle variable or the student's slack). Subtracting the key
// column from the student's other basic columns leaves a working basis W
// over the active supply rows only:
//
//   W v = q - sum_s a(key_s),   x(key_s) = 1 - sum_{k in s} v_k.
//
// Every basis change multiplies W on the right by I + p q'. These factors
// are kept in an eta file on top of a dense LU of W, which is rebuilt
// every kRefactorInterval pivots.

#include <algorithm>
#include <string>

#include "coursealloc/error.hpp"
#include "coursealloc/numeric.hpp"

namespace coursealloc::numeric {

namespace {

constexpr int kDegenerateStreak = 50;
constexpr int kRefactorInterval = 64;
constexpr double kSnap = 1e-11;

template <typename Scalar>
class DenseLu {
 public:
  using T = NumTraits<Scalar>;

  // `a` is row-major n x n. Returns false when singular.
  bool Factor(std::vector<Scalar> a, int n) {
    n_ = n;
    lu_ = std::move(a);
    perm_.resize(n);
    for (int i = 0; i < n; ++i) perm_[i] = i;
    for (int k = 0; k < n; ++k) {
      int p = -1;
      if constexpr (std::is_same_v<Scalar, Rational>) {
        for (int i = k; i < n; ++i) {
          if (lu_[i * n + k] != 0) {
            p = i;
            break;
          }
        }
      } else {
        Scalar best = 0;
        for (int i = k; i < n; ++i) {
          Scalar v = T::Abs(lu_[i * n + k]);
          if (v > best) {
            best = v;
            p = i;
          }
        }
        if (best <= 1e-13) p = -1;
      }
      if (p < 0) return false;
      if (p != k) {
        for (int j = 0; j < n; ++j) std::swap(lu_[k * n + j], lu_[p * n + j]);
        std::swap(perm_[k], perm_[p]);
      }
      const Scalar pivot = lu_[k * n + k];
      for (int i = k + 1; i < n; ++i) {
        Scalar& lik = lu_[i * n + k];
        if (lik == 0) continue;
        lik /= pivot;
        for (int j = k + 1; j < n; ++j) {
          const Scalar& ukj = lu_[k * n + j];
          if (ukj != 0) lu_[i * n + j] -= lik * ukj;
        }
      }
    }
    return true;
  }

  // Solves A x = b.
  std::vector<Scalar> Solve(const std::vector<Scalar>& b) const {
    std::vector<Scalar> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = b[perm_[i]];
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) {
        if (lu_[i * n_ + j] != 0 && x[j] != 0) x[i] -= lu_[i * n_ + j] * x[j];
      }
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) {
        if (lu_[i * n_ + j] != 0 && x[j] != 0) x[i] -= lu_[i * n_ + j] * x[j];
      }
      x[i] /= lu_[i * n_ + i];
    }
    return x;
  }

  // Solves A' x = b.
  std::vector<Scalar> SolveTransposed(const std::vector<Scalar>& b) const {
    std::vector<Scalar> z(b);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < i; ++j) {
        if (lu_[j * n_ + i] != 0 && z[j] != 0) z[i] -= lu_[j * n_ + i] * z[j];
      }
      z[i] /= lu_[i * n_ + i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) {
        if (lu_[j * n_ + i] != 0 && z[j] != 0) z[i] -= lu_[j * n_ + i] * z[j];
      }
    }
    std::vector<Scalar> x(n_);
    for (int i = 0; i < n_; ++i) x[perm_[i]] = z[i];
    return x;
  }

 private:
  int n_ = 0;
  std::vector<Scalar> lu_;
  std::vector<int> perm_;
};

// W = W0 M_1 ... M_k with M_i = I + p_i q_i'.
template <typename Scalar>
class EtaFactor {
 public:
  bool Factor(std::vector<Scalar> a, int n) {
    etas_.clear();
    return lu_.Factor(std::move(a), n);
  }

  int updates() const { return static_cast<int>(etas_.size()); }

  // Returns false when the update is (numerically) singular.
  bool Update(std::vector<Scalar> p, std::vector<Scalar> q) {
    Scalar denom = 1;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] != 0 && p[i] != 0) denom += q[i] * p[i];
    }
    if constexpr (std::is_same_v<Scalar, double>) {
      if (std::fabs(denom) < 1e-11) return false;
    } else {
      if (denom == 0) return false;
    }
    etas_.push_back({std::move(p), std::move(q), std::move(denom)});
    return true;
  }

  // x <- M_last^-1 x.
  void ApplyLast(std::vector<Scalar>& x) const { ApplyInverse(etas_.back(), x); }

  std::vector<Scalar> Solve(const std::vector<Scalar>& b) const {
    std::vector<Scalar> x = lu_.Solve(b);
    for (const Eta& e : etas_) ApplyInverse(e, x);
    return x;
  }

  std::vector<Scalar> SolveTransposed(std::vector<Scalar> c) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      // (I + q p')^-1 c = c - q (p'c) / (1 + p'q)
      Scalar dot = 0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (it->p[i] != 0 && c[i] != 0) dot += it->p[i] * c[i];
      }
      if (dot == 0) continue;
      dot /= it->denom;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (it->q[i] != 0) c[i] -= it->q[i] * dot;
      }
    }
    return lu_.SolveTransposed(c);
  }

 private:
  struct Eta {
    std::vector<Scalar> p, q;
    Scalar denom;
  };

  static void ApplyInverse(const Eta& e, std::vector<Scalar>& x) {
    Scalar dot = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (e.q[i] != 0 && x[i] != 0) dot += e.q[i] * x[i];
    }
    if (dot == 0) return;
    dot /= e.denom;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (e.p[i] != 0) x[i] -= e.p[i] * dot;
    }
  }

  DenseLu<Scalar> lu_;
  std::vector<Eta> etas_;
};

}  // namespace

template <typename Scalar>
AssignmentLpSolution<Scalar> SolveAssignmentLp(const AssignmentLp<Scalar>& lp) {
  using T = NumTraits<Scalar>;
  const Scalar eps = T::Eps();
  const int V = static_cast<int>(lp.variables.size());
  const int S = lp.num_students;
  const int G = static_cast<int>(lp.capacity.size());
  if (static_cast<int>(lp.objective.size()) != V ||
      static_cast<int>(lp.supply_active.size()) != G) {
    throw std::invalid_argument("SolveAssignmentLp: inconsistent dimensions");
  }

  std::vector<int> row_of_group(G, -1);
  int R = 0;
  for (int g = 0; g < G; ++g) {
    if (lp.supply_active[g]) row_of_group[g] = R++;
  }
  std::vector<Scalar> rhs(R);
  for (int g = 0; g < G; ++g) {
    if (row_of_group[g] >= 0) rhs[row_of_group[g]] = lp.capacity[g];
  }

  AssignmentLpSolution<Scalar> sol;
  sol.x.assign(V, Scalar(0));
  std::vector<char> pinned(V, 0);
  std::vector<char> student_done(S, 0);
  for (const auto& [v, value] : lp.fixed) {
    if (v < 0 || v >= V || (value != 0 && value != 1)) {
      throw std::invalid_argument("SolveAssignmentLp: bad fixed variable");
    }
    pinned[v] = 1;
    if (value == 0) continue;
    const LpVariable& var = lp.variables[v];
    if (student_done[var.student]) {
      throw DataError("two variables of one student pinned to 1");
    }
    student_done[var.student] = 1;
    sol.x[v] = 1;
    sol.value += lp.objective[v];
    for (int g : var.groups) {
      if (row_of_group[g] >= 0) rhs[row_of_group[g]] -= 1;
    }
  }
  for (int r = 0; r < R; ++r) {
    if (rhs[r] < 0) throw DataError("pinned variables exceed an active supply row");
  }

  // Column ids: [0, V) variables, [V, V+S) student slacks, [V+S, V+S+R)
  // supply slacks.
  const int kNull = V;
  const int kSlack = V + S;
  std::vector<std::vector<int>> rows_of_var(V);
  for (int v = 0; v < V; ++v) {
    for (int g : lp.variables[v].groups) {
      if (g < 0 || g >= G) throw std::invalid_argument("SolveAssignmentLp: bad group");
      if (row_of_group[g] >= 0) rows_of_var[v].push_back(row_of_group[g]);
    }
  }
  std::vector<char> free_var(V, 0);
  for (int v = 0; v < V; ++v) {
    free_var[v] = !pinned[v] && !student_done[lp.variables[v].student];
  }

  auto student_of = [&](int col) -> int {
    if (col < kNull) return lp.variables[col].student;
    if (col < kSlack) return col - kNull;
    return -1;
  };
  auto cost_of = [&](int col) -> Scalar {
    return col < kNull ? lp.objective[col] : Scalar(0);
  };
  static const std::vector<int> kNoRows;
  auto rows_of = [&](int col) -> const std::vector<int>& {
    return col < kNull ? rows_of_var[col] : kNoRows;
  };

  std::vector<int> key(S, -1);
  std::vector<char> basic(V + S + R, 0);
  for (int s = 0; s < S; ++s) {
    if (student_done[s]) continue;
    key[s] = kNull + s;
    basic[kNull + s] = 1;
  }
  std::vector<int> nonkey(R);
  for (int r = 0; r < R; ++r) {
    nonkey[r] = kSlack + r;
    basic[kSlack + r] = 1;
  }

  // Crash basis: greedily key each student to its best profitable variable
  // that fits the residual supply. Supply slacks stay basic, so the start
  // is primal feasible.
  {
    std::vector<int> best_var(S, -1);
    for (int v = 0; v < V; ++v) {
      if (!free_var[v] || !(lp.objective[v] > eps)) continue;
      int& b = best_var[lp.variables[v].student];
      if (b < 0 || lp.objective[v] > lp.objective[b]) b = v;
    }
    std::vector<int> order;
    for (int s = 0; s < S; ++s) {
      if (best_var[s] >= 0) order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return lp.objective[best_var[a]] > lp.objective[best_var[b]];
    });
    std::vector<std::vector<int>> vars_of(S);
    for (int v = 0; v < V; ++v) {
      if (free_var[v] && lp.objective[v] > eps) vars_of[lp.variables[v].student].push_back(v);
    }
    std::vector<Scalar> residual = rhs;
    for (int s : order) {
      auto& vs = vars_of[s];
      std::stable_sort(vs.begin(), vs.end(),
                       [&](int a, int b) { return lp.objective[a] > lp.objective[b]; });
      for (int v : vs) {
        bool fits = true;
        for (int r : rows_of_var[v]) fits = fits && residual[r] >= 1;
        if (!fits) continue;
        for (int r : rows_of_var[v]) residual[r] -= 1;
        basic[key[s]] = 0;
        key[s] = v;
        basic[v] = 1;
        break;
      }
    }
  }

  EtaFactor<Scalar> lu;
  bool refactor = true;
  std::vector<Scalar> v_basic;
  std::vector<Scalar> key_value(S);
  std::vector<Scalar> dual_student(S);
  std::vector<Scalar> rate(S);
  std::vector<int> touched;
  bool bland = false;
  int degenerate = 0;

  while (true) {
    if (refactor || lu.updates() >= kRefactorInterval) {
      refactor = false;
      std::vector<Scalar> w(static_cast<std::size_t>(R) * R, Scalar(0));
      for (int k = 0; k < R; ++k) {
        const int col = nonkey[k];
        const int s = student_of(col);
        if (s < 0) {
          w[(col - kSlack) * R + k] = 1;
          continue;
        }
        for (int r : rows_of(col)) w[r * R + k] += 1;
        for (int r : rows_of(key[s])) w[r * R + k] -= 1;
      }
      if (R > 0 && !lu.Factor(std::move(w), R)) {
        throw InternalError("assignment LP: singular working basis");
      }
    }

    // Primal values.
    std::vector<Scalar> b = rhs;
    for (int s = 0; s < S; ++s) {
      if (key[s] < 0) continue;
      for (int r : rows_of(key[s])) b[r] -= 1;
    }
    v_basic = R > 0 ? lu.Solve(b) : std::vector<Scalar>{};
    for (int s = 0; s < S; ++s) key_value[s] = key[s] >= 0 ? Scalar(1) : Scalar(0);
    for (int k = 0; k < R; ++k) {
      const int s = student_of(nonkey[k]);
      if (s >= 0) key_value[s] -= v_basic[k];
    }
    if constexpr (std::is_same_v<Scalar, double>) {
      // Update noise would otherwise break exact ties in the ratio test.
      for (auto& v : v_basic) {
        if (std::fabs(v) < kSnap) v = 0;
      }
      for (auto& v : key_value) {
        if (std::fabs(v) < kSnap) v = 0;
      }
    }

    // Duals: mu' W = c_W, pi_s from the key column.
    std::vector<Scalar> c(R);
    for (int k = 0; k < R; ++k) {
      const int s = student_of(nonkey[k]);
      c[k] = s < 0 ? Scalar(0) : Scalar(cost_of(nonkey[k]) - cost_of(key[s]));
    }
    std::vector<Scalar> mu = R > 0 ? lu.SolveTransposed(c) : std::vector<Scalar>{};
    for (int s = 0; s < S; ++s) {
      if (key[s] < 0) continue;
      dual_student[s] = cost_of(key[s]);
      for (int r : rows_of(key[s])) dual_student[s] -= mu[r];
    }

    // Pricing.
    int enter = -1;
    Scalar best = 0;
    auto consider = [&](int col, const Scalar& d) {
      if (!(d > eps)) return;
      if (enter < 0 || (bland ? col < enter : d > best)) {
        enter = col;
        best = d;
      }
    };
    for (int v = 0; v < V; ++v) {
      if (!free_var[v] || basic[v]) continue;
      Scalar d = lp.objective[v] - dual_student[lp.variables[v].student];
      for (int r : rows_of_var[v]) d -= mu[r];
      consider(v, d);
    }
    for (int s = 0; s < S; ++s) {
      if (key[s] < 0 || basic[kNull + s]) continue;
      consider(kNull + s, Scalar(-dual_student[s]));
    }
    for (int r = 0; r < R; ++r) {
      if (!basic[kSlack + r]) consider(kSlack + r, Scalar(-mu[r]));
    }
    if (enter < 0) break;

    // Direction.
    const int s_enter = student_of(enter);
    std::vector<Scalar> col(R, Scalar(0));
    if (s_enter < 0) {
      col[enter - kSlack] = 1;
    } else {
      for (int r : rows_of(enter)) col[r] += 1;
      for (int r : rows_of(key[s_enter])) col[r] -= 1;
    }
    std::vector<Scalar> alpha = R > 0 ? lu.Solve(col) : std::vector<Scalar>{};

    touched.clear();
    for (int k = 0; k < R; ++k) {
      const int s = student_of(nonkey[k]);
      if (s < 0) continue;
      if (rate[s] == 0 && std::find(touched.begin(), touched.end(), s) == touched.end()) {
        touched.push_back(s);
      }
      rate[s] += alpha[k];
    }
    if (s_enter >= 0) {
      if (std::find(touched.begin(), touched.end(), s_enter) == touched.end()) {
        touched.push_back(s_enter);
      }
      rate[s_enter] -= 1;
    }

    // Ratio test. leave_pos >= 0: nonkey slot; leave_student >= 0: key.
    int leave_pos = -1;
    int leave_student = -1;
    int leave_col = -1;
    Scalar theta = 0;
    Scalar leave_rate = 0;
    auto offer = [&](const Scalar& value, const Scalar& r, int pos, int student,
                     int column) {
      Scalar ratio = value / r;
      if (ratio < 0) ratio = 0;
      bool tie = ratio == theta;
      if constexpr (std::is_same_v<Scalar, double>) tie = std::fabs(ratio - theta) <= kSnap;
      bool take = leave_col < 0 || (!tie && ratio < theta);
      if (!take && tie) {
        take = bland ? column < leave_col : T::Abs(r) > leave_rate;
      }
      if (take) {
        theta = ratio;
        leave_rate = T::Abs(r);
        leave_pos = pos;
        leave_student = student;
        leave_col = column;
      }
    };
    for (int k = 0; k < R; ++k) {
      if (alpha[k] > eps) offer(v_basic[k], alpha[k], k, -1, nonkey[k]);
    }
    for (int s : touched) {
      if (rate[s] < -eps) offer(key_value[s], Scalar(-rate[s]), -1, s, key[s]);
    }
    for (int s : touched) rate[s] = 0;
    if (leave_col < 0) throw InternalError("assignment LP reported unbounded");

    if (theta <= eps) {
      if (++degenerate >= kDegenerateStreak) bland = true;
    } else {
      // Cycling needs an unbroken degenerate run.
      degenerate = 0;
      bland = false;
    }

    basic[enter] = 1;
    basic[leave_col] = 0;
    auto unit = [&](int k) {
      std::vector<Scalar> e(R, Scalar(0));
      e[k] = 1;
      return e;
    };
    auto slots_of = [&](int s) {
      std::vector<Scalar> h(R, Scalar(0));
      for (int k = 0; k < R; ++k) {
        if (student_of(nonkey[k]) == s) h[k] = 1;
      }
      return h;
    };
    bool updated = true;
    if (leave_pos >= 0) {
      // Column replacement.
      std::vector<Scalar> p = alpha;
      p[leave_pos] -= 1;
      updated = lu.Update(std::move(p), unit(leave_pos));
      nonkey[leave_pos] = enter;
    } else if (s_enter == leave_student) {
      // New key: every column of the student shifts by -W alpha.
      std::vector<Scalar> p = alpha;
      for (auto& v : p) v = -v;
      updated = lu.Update(std::move(p), slots_of(leave_student));
      key[leave_student] = enter;
    } else {
      int slot = -1;
      for (int k = 0; k < R; ++k) {
        if (student_of(nonkey[k]) == leave_student) {
          slot = k;
          break;
        }
      }
      if (slot < 0) throw InternalError("assignment LP: key without replacement");
      // The slot's column becomes the key, then takes the entering column.
      std::vector<Scalar> h = slots_of(leave_student);
      h[slot] = 2;
      std::vector<Scalar> p(R, Scalar(0));
      p[slot] = -1;
      updated = lu.Update(std::move(p), std::move(h));
      if (updated) {
        std::vector<Scalar> a = alpha;
        lu.ApplyLast(a);
        a[slot] -= 1;
        updated = lu.Update(std::move(a), unit(slot));
      }
      key[leave_student] = nonkey[slot];
      nonkey[slot] = enter;
    }
    if (!updated) refactor = true;
    ++sol.pivots;
  }

  for (int k = 0; k < R; ++k) {
    if (nonkey[k] < kNull) sol.x[nonkey[k]] = v_basic[k];
  }
  for (int s = 0; s < S; ++s) {
    if (key[s] >= 0 && key[s] < kNull) sol.x[key[s]] = key_value[s];
  }
  if constexpr (std::is_same_v<Scalar, double>) {
    for (auto& x : sol.x) {
      if (std::fabs(x) < 1e-12) x = 0;
    }
  }
  for (int v = 0; v < V; ++v) {
    if (free_var[v]) sol.value += lp.objective[v] * sol.x[v];
  }
  return sol;
}

template AssignmentLpSolution<double> SolveAssignmentLp(const AssignmentLp<double>&);
template AssignmentLpSolution<Rational> SolveAssignmentLp(const AssignmentLp<Rational>&);

}  // namespace coursealloc::numeric
