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

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "coursealloc/numeric.hpp"

namespace coursealloc::numeric {
namespace {

// Solves the square system M x = b by Gauss-Jordan; nullopt if singular.
std::optional<std::vector<Rational>> SolveSquare(std::vector<std::vector<Rational>> m,
                                                 std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= m[i][i];
  return b;
}

// Max over all vertices of {A x <= b, x >= 0}.
std::optional<Rational> VertexOptimum(const DenseLp<Rational>& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  std::vector<std::vector<Rational>> all = lp.rows;
  std::vector<Rational> rhs = lp.rhs;
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> row(n, Rational(0));
    row[j] = -1;
    all.push_back(row);
    rhs.push_back(0);
  }
  const int total = m + n;
  std::optional<Rational> best;
  std::vector<int> pick(n);
  for (int mask = 0; mask < (1 << total); ++mask) {
    if (__builtin_popcount(mask) != n) continue;
    std::vector<std::vector<Rational>> sys;
    std::vector<Rational> b;
    for (int i = 0; i < total; ++i) {
      if (mask >> i & 1) {
        sys.push_back(all[i]);
        b.push_back(rhs[i]);
      }
    }
    auto x = SolveSquare(sys, b);
    if (!x) continue;
    bool ok = true;
    for (int i = 0; i < total && ok; ++i) {
      Rational lhs = 0;
      for (int j = 0; j < n; ++j) lhs += all[i][j] * (*x)[j];
      ok = lhs <= rhs[i];
    }
    if (!ok) continue;
    Rational value = 0;
    for (int j = 0; j < n; ++j) value += lp.objective[j] * (*x)[j];
    if (!best || value > *best) best = value;
  }
  return best;
}

TEST(DenseLp, MatchesVertexEnumeration) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-3, 4), rhs(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    DenseLp<Rational> lp;
    lp.num_vars = 1 + trial % 3;
    const int m = 1 + trial % 4;
    for (int i = 0; i < m; ++i) {
      std::vector<Rational> row;
      for (int j = 0; j < lp.num_vars; ++j) row.push_back(coef(rng));
      lp.rows.push_back(row);
      lp.rhs.push_back(rhs(rng));
    }
    // A bounding row keeps the problem bounded.
    lp.rows.push_back(std::vector<Rational>(lp.num_vars, Rational(1)));
    lp.rhs.push_back(10);
    for (int j = 0; j < lp.num_vars; ++j) lp.objective.push_back(coef(rng));
    auto oracle = VertexOptimum(lp);
    ASSERT_TRUE(oracle.has_value());
    auto exact = SolveDenseLp(lp);
    ASSERT_EQ(exact.status, LpStatus::kOptimal);
    EXPECT_EQ(exact.value, *oracle) << "trial " << trial;

    DenseLp<double> f;
    f.num_vars = lp.num_vars;
    for (auto& row : lp.rows) {
      std::vector<double> r;
      for (auto& v : row) r.push_back(v.get_d());
      f.rows.push_back(r);
    }
    for (auto& v : lp.rhs) f.rhs.push_back(v.get_d());
    for (auto& v : lp.objective) f.objective.push_back(v.get_d());
    auto approx = SolveDenseLp(f);
    ASSERT_EQ(approx.status, LpStatus::kOptimal);
    EXPECT_NEAR(approx.value, oracle->get_d(), 1e-9);
  }
}

TEST(DenseLp, NegativeRhsNeedsPhaseOne) {
  // x + y <= 4, -x <= -1, -y <= -2: max x + y = 4.
  DenseLp<Rational> lp;
  lp.num_vars = 2;
  lp.rows = {{1, 1}, {-1, 0}, {0, -1}};
  lp.rhs = {4, -1, -2};
  lp.objective = {1, 1};
  auto r = SolveDenseLp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_EQ(r.value, 4);
  EXPECT_GE(r.x[0], 1);
  EXPECT_GE(r.x[1], 2);
}

TEST(DenseLp, DetectsInfeasibleAndUnbounded) {
  DenseLp<Rational> bad;
  bad.num_vars = 1;
  bad.rows = {{1}, {-1}};
  bad.rhs = {1, -2};
  bad.objective = {1};
  EXPECT_EQ(SolveDenseLp(bad).status, LpStatus::kInfeasible);

  DenseLp<Rational> open;
  open.num_vars = 2;
  open.rows = {{1, -1}};
  open.rhs = {1};
  open.objective = {1, 0};
  EXPECT_EQ(SolveDenseLp(open).status, LpStatus::kUnbounded);
}

struct RandomMarket {
  int students;
  int groups;
  std::vector<LpVariable> vars;
  std::vector<int> capacity;
};

RandomMarket MakeMarket(std::mt19937& rng, int students, int groups, int per_student,
                        int max_bundle, int cap_max) {
  RandomMarket m{students, groups, {}, {}};
  std::uniform_int_distribution<int> g(0, groups - 1), len(1, std::min(max_bundle, groups)),
      cap(1, cap_max);
  for (int j = 0; j < groups; ++j) m.capacity.push_back(cap(rng));
  for (int s = 0; s < students; ++s) {
    for (int k = 0; k < per_student; ++k) {
      std::vector<int> b;
      const int l = len(rng);
      while (static_cast<int>(b.size()) < l) {
        int x = g(rng);
        if (std::find(b.begin(), b.end(), x) == b.end()) b.push_back(x);
      }
      std::sort(b.begin(), b.end());
      m.vars.push_back({s, b});
    }
  }
  return m;
}

// The assignment LP written out as a dense LP; pinned variables become
// equality pairs.
DenseLp<Rational> AsDense(const AssignmentLp<Rational>& lp) {
  DenseLp<Rational> d;
  const int V = static_cast<int>(lp.variables.size());
  d.num_vars = V;
  d.objective = lp.objective;
  for (int s = 0; s < lp.num_students; ++s) {
    std::vector<Rational> row(V, Rational(0));
    for (int v = 0; v < V; ++v) {
      if (lp.variables[v].student == s) row[v] = 1;
    }
    d.rows.push_back(row);
    d.rhs.push_back(1);
  }
  for (std::size_t g = 0; g < lp.capacity.size(); ++g) {
    if (!lp.supply_active[g]) continue;
    std::vector<Rational> row(V, Rational(0));
    for (int v = 0; v < V; ++v) {
      for (int x : lp.variables[v].groups) {
        if (x == static_cast<int>(g)) row[v] += 1;
      }
    }
    d.rows.push_back(row);
    d.rhs.push_back(lp.capacity[g]);
  }
  for (const auto& [v, value] : lp.fixed) {
    std::vector<Rational> row(V, Rational(0));
    row[v] = 1;
    d.rows.push_back(row);
    d.rhs.push_back(value);
    row[v] = -1;
    d.rows.push_back(row);
    d.rhs.push_back(-value);
  }
  return d;
}

template <typename Scalar>
void ExpectFeasible(const AssignmentLp<Scalar>& lp, const std::vector<Scalar>& x,
                    const Scalar& tol) {
  std::vector<Scalar> demand(lp.num_students, Scalar(0));
  std::vector<Scalar> supply(lp.capacity.size(), Scalar(0));
  for (std::size_t v = 0; v < x.size(); ++v) {
    EXPECT_GE(x[v], -tol);
    demand[lp.variables[v].student] += x[v];
    for (int g : lp.variables[v].groups) supply[g] += x[v];
  }
  for (const auto& d : demand) EXPECT_LE(d, 1 + tol);
  for (std::size_t g = 0; g < supply.size(); ++g) {
    if (lp.supply_active[g]) {
      EXPECT_LE(supply[g], lp.capacity[g] + tol);
    }
  }
}

DenseLp<double> ToDouble(const DenseLp<Rational>& lp) {
  DenseLp<double> f;
  f.num_vars = lp.num_vars;
  for (const auto& row : lp.rows) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(v.get_d());
    f.rows.push_back(r);
  }
  for (const auto& v : lp.rhs) f.rhs.push_back(v.get_d());
  for (const auto& v : lp.objective) f.objective.push_back(v.get_d());
  return f;
}

AssignmentLp<double> ToDouble(const AssignmentLp<Rational>& lp) {
  AssignmentLp<double> f;
  f.num_students = lp.num_students;
  f.variables = lp.variables;
  for (auto& v : lp.objective) f.objective.push_back(v.get_d());
  f.capacity = lp.capacity;
  f.supply_active = lp.supply_active;
  f.fixed = lp.fixed;
  return f;
}

TEST(AssignmentLp, MatchesDenseLpOnRandomMarkets) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> obj(-4, 9);
  for (int trial = 0; trial < 120; ++trial) {
    auto m = MakeMarket(rng, 2 + trial % 6, 2 + trial % 5, 1 + trial % 4, 3, 3);
    AssignmentLp<Rational> lp;
    lp.num_students = m.students;
    lp.variables = m.vars;
    lp.capacity = m.capacity;
    lp.supply_active.assign(m.groups, true);
    for (std::size_t v = 0; v < m.vars.size(); ++v) lp.objective.push_back(obj(rng));
    if (trial % 3 == 1) lp.supply_active[0] = false;
    if (trial % 4 == 2) lp.fixed[0] = 0;

    auto oracle = SolveDenseLp(AsDense(lp));
    ASSERT_EQ(oracle.status, LpStatus::kOptimal);
    auto exact = SolveAssignmentLp(lp);
    EXPECT_EQ(exact.value, oracle.value) << "trial " << trial;
    ExpectFeasible(lp, exact.x, Rational(0));

    auto approx = SolveAssignmentLp(ToDouble(lp));
    EXPECT_NEAR(approx.value, oracle.value.get_d(), 1e-7) << "trial " << trial;
    ExpectFeasible(ToDouble(lp), approx.x, 1e-9);
  }
}

TEST(AssignmentLp, LongRunsAcrossRefactorizations) {
  // Demand far above supply forces many more pivots than the interval
  // between refactorizations.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> obj(-1.0, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    auto m = MakeMarket(rng, 200, 10, 5, 3, 12);
    AssignmentLp<Rational> lp;
    lp.num_students = m.students;
    lp.variables = m.vars;
    lp.capacity = m.capacity;
    lp.supply_active.assign(m.groups, true);
    for (std::size_t v = 0; v < m.vars.size(); ++v) {
      lp.objective.push_back(Rational(static_cast<long>(std::lround(obj(rng) * 1000)), 1000));
    }
    auto oracle = SolveDenseLp(ToDouble(AsDense(lp)));
    ASSERT_EQ(oracle.status, LpStatus::kOptimal);
    auto approx = SolveAssignmentLp(ToDouble(lp));
    EXPECT_GT(approx.pivots, 64);
    EXPECT_NEAR(approx.value, oracle.value, 1e-6);
    ExpectFeasible(ToDouble(lp), approx.x, 1e-9);
    auto exact = SolveAssignmentLp(lp);
    EXPECT_GT(exact.pivots, 64);
    EXPECT_NEAR(exact.value.get_d(), oracle.value, 1e-6);
    ExpectFeasible(lp, exact.x, Rational(0));
  }
}

TEST(AssignmentLp, VertexIsIntegralOnUnitBundles) {
  // Single-group bundles give a bipartite matching polytope.
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> obj(1, 20);
  for (int trial = 0; trial < 30; ++trial) {
    auto m = MakeMarket(rng, 6, 4, 3, 1, 2);
    AssignmentLp<Rational> lp;
    lp.num_students = m.students;
    lp.variables = m.vars;
    lp.capacity = m.capacity;
    lp.supply_active.assign(m.groups, true);
    for (std::size_t v = 0; v < m.vars.size(); ++v) lp.objective.push_back(obj(rng));
    auto sol = SolveAssignmentLp(lp);
    for (const auto& x : sol.x) EXPECT_TRUE(x == 0 || x == 1);
  }
}

TEST(AssignmentLp, RejectsOverfullPins) {
  AssignmentLp<Rational> lp;
  lp.num_students = 2;
  lp.variables = {{0, {0}}, {1, {0}}};
  lp.objective = {1, 1};
  lp.capacity = {1};
  lp.supply_active = {true};
  lp.fixed = {{0, 1}, {1, 1}};
  EXPECT_ANY_THROW(SolveAssignmentLp(lp));
}

double GridMinNorm(const std::vector<std::vector<double>>& pts, const std::vector<double>& t,
                   int steps) {
  double best = 1e300;
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      const double la = double(a) / steps, lb = double(b) / steps, lc = 1 - la - lb;
      double d = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double y = la * pts[0][i] + lb * pts[1][i] + lc * pts[2][i];
        d += (y - t[i]) * (y - t[i]);
      }
      best = std::min(best, d);
    }
  }
  return std::sqrt(best);
}

TEST(MinNormPoint, AgreesWithGridSearch) {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> pts(3, std::vector<double>(2));
    for (auto& p : pts) {
      for (auto& v : p) v = u(rng);
    }
    std::vector<double> t = {u(rng), u(rng)};
    auto proj = MinNormPoint(t, pts, 1e-12);
    // A grid of step 1/400 puts the oracle within a small margin above
    // the true minimum.
    const double grid = GridMinNorm(pts, t, 400);
    EXPECT_LE(proj.distance, grid + 1e-9);
    EXPECT_GE(proj.distance, grid - 0.02);
    double sum = 0;
    for (double l : proj.lambda) {
      EXPECT_GE(l, 0.0);
      sum += l;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(MinNormPoint, InsideHullGivesZero) {
  std::vector<std::vector<double>> pts = {{0, 0}, {2, 0}, {0, 2}};
  std::vector<double> t = {0.5, 0.5};
  auto proj = MinNormPoint(t, pts, 1e-12);
  EXPECT_NEAR(proj.distance, 0.0, 1e-9);
  EXPECT_NEAR(proj.y[0], 0.5, 1e-9);
  EXPECT_NEAR(proj.y[1], 0.5, 1e-9);
}

TEST(MinNormPoint, WarmStartReachesSameAnswer) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> p(6, std::vector<double>(4));
    for (auto& row : p) {
      for (auto& v : row) v = u(rng);
    }
    std::vector<std::vector<double>> gram(6, std::vector<double>(6));
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        for (int i = 0; i < 4; ++i) gram[a][b] += p[a][i] * p[b][i];
      }
    }
    auto cold = MinNormPointGram(gram, 1e-12);
    std::vector<double> warm(6, 0.0);
    warm[0] = 1.0;
    auto hot = MinNormPointGram(gram, 1e-12, warm);
    EXPECT_NEAR(cold.squared_distance, hot.squared_distance, 1e-9);
  }
}

TEST(AssignmentLp, SmallExamples) {
  // Zero objective: optimum 0.
  AssignmentLp<Rational> zero;
  zero.num_students = 1;
  zero.variables = {{0, {0}}, {0, {1}}};
  zero.objective = {0, 0};
  zero.capacity = {1, 1};
  zero.supply_active = {true, true};
  EXPECT_EQ(SolveAssignmentLp(zero).value, 0);

  // One student, {A} worth 1 and {B} worth 1/2: all mass on A.
  AssignmentLp<Rational> one = zero;
  one.objective = {1, Rational(1, 2)};
  auto a = SolveAssignmentLp(one);
  EXPECT_EQ(a.value, 1);
  EXPECT_EQ(a.x[0], 1);
  EXPECT_EQ(a.x[1], 0);

  // Two students share one seat: value 1 at a vertex.
  AssignmentLp<Rational> shared;
  shared.num_students = 2;
  shared.variables = {{0, {0}}, {1, {0}}};
  shared.objective = {1, 1};
  shared.capacity = {1};
  shared.supply_active = {true};
  auto b = SolveAssignmentLp(shared);
  EXPECT_EQ(b.value, 1);
  EXPECT_TRUE((b.x[0] == 1 && b.x[1] == 0) || (b.x[0] == 0 && b.x[1] == 1));

  // Dropping the supply row lets both in.
  shared.supply_active = {false};
  EXPECT_EQ(SolveAssignmentLp(shared).value, 2);
}

TEST(MinNormPoint, SingletonAndSymmetricPair) {
  const std::vector<std::vector<double>> one = {{3, 4}};
  const std::vector<double> origin = {0, 0};
  auto p = MinNormPoint(origin, one, 1e-12);
  EXPECT_NEAR(p.distance, 5.0, 1e-12);
  EXPECT_DOUBLE_EQ(p.lambda[0], 1.0);

  const std::vector<std::vector<double>> pair = {{1, 0}, {0, 1}};
  auto q = MinNormPoint(origin, pair, 1e-12);
  EXPECT_NEAR(q.lambda[0], 0.5, 1e-9);
  EXPECT_NEAR(q.lambda[1], 0.5, 1e-9);
  EXPECT_NEAR(q.distance, std::sqrt(0.5), 1e-9);
}

TEST(MinNormPoint, OptimalityAndMonotonicity) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 5;
    std::vector<double> t(dim);
    for (double& v : t) v = u(rng);
    std::vector<std::vector<double>> pts;
    double previous = 1e300;
    for (int k = 0; k < 12; ++k) {
      std::vector<double> z(dim);
      for (double& v : z) v = u(rng) + 0.3;
      pts.push_back(z);
      auto proj = MinNormPoint(t, pts, 1e-12);
      EXPECT_LE(proj.distance, previous + 1e-9);
      previous = proj.distance;
      // (t - y) . (z - y) <= 0 for every point z.
      for (const auto& q : pts) {
        double dot = 0;
        for (int i = 0; i < dim; ++i) dot += (t[i] - proj.y[i]) * (q[i] - proj.y[i]);
        EXPECT_LE(dot, 1e-8);
      }
    }
  }
}

}  // namespace
}  // namespace coursealloc::numeric
