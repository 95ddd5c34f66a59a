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

// Optimization kernel.
//
//  * SolveDenseLp: two-phase tableau simplex for max c'x, Ax <= b, x >= 0.
//  * SolveAssignmentLp: simplex specialised to the assignment polytope
//    (one demand row per student, removable supply rows per group). Demand
//    rows are generalized upper bounds, so the working basis only spans the
//    active supply rows. Returns a basic (vertex) optimum.
//  * MinNormPoint: Wolfe's minimum-norm-point algorithm; projects a target
//    onto the convex hull of a point set, keeping an affinely independent
//    corral so the support never exceeds dimension + 1.
//
// The LP routines are instantiated for Rational (exact, zero tolerance)
// and double (tolerance 1e-9).

#ifndef COURSEALLOC_NUMERIC_HPP_
#define COURSEALLOC_NUMERIC_HPP_

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "coursealloc/rational.hpp"

namespace coursealloc::numeric {

template <typename Scalar>
struct NumTraits;

template <>
struct NumTraits<double> {
  static double Eps() { return 1e-9; }
  static double Abs(double v) { return std::fabs(v); }
};

template <>
struct NumTraits<Rational> {
  static Rational Eps() { return 0; }
  static Rational Abs(const Rational& v) { return abs(v); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

template <typename Scalar>
struct DenseLp {
  int num_vars = 0;
  std::vector<std::vector<Scalar>> rows;  // each of length num_vars
  std::vector<Scalar> rhs;
  std::vector<Scalar> objective;  // maximized
};

template <typename Scalar>
struct DenseLpResult {
  LpStatus status = LpStatus::kOptimal;
  Scalar value = 0;
  std::vector<Scalar> x;
  int pivots = 0;
};

template <typename Scalar>
DenseLpResult<Scalar> SolveDenseLp(const DenseLp<Scalar>& lp);

struct LpVariable {
  int student = 0;
  std::vector<int> groups;  // the bundle's group indices
};

// max u'x subject to
//   sum_b x_sb <= 1                          per student   (demand)
//   sum_{s,b: g in b} x_sb <= capacity[g]    per active group (supply)
//   x >= 0
// Variables listed in `fixed` are pinned to 0 or 1; a variable pinned to 1
// consumes its student's demand and one seat in each of its groups.
template <typename Scalar>
struct AssignmentLp {
  int num_students = 0;
  std::vector<LpVariable> variables;
  std::vector<Scalar> objective;
  std::vector<int> capacity;          // per group
  std::vector<bool> supply_active;    // per group; false = row removed
  std::map<int, int> fixed;           // variable -> 0 or 1
};

template <typename Scalar>
struct AssignmentLpSolution {
  Scalar value = 0;          // includes pinned variables
  std::vector<Scalar> x;     // one entry per variable
  int pivots = 0;
};

// Throws DataError if pinned variables already overfill an active row,
// InternalError if the simplex reports unboundedness.
template <typename Scalar>
AssignmentLpSolution<Scalar> SolveAssignmentLp(const AssignmentLp<Scalar>& lp);

struct MinNormResult {
  std::vector<double> lambda;  // one weight per input point; sums to 1
  double squared_distance = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Wolfe's algorithm on the Gram matrix G_kl = p_k . p_l of the points
// p_k = z_k - target. Stops when |x|^2 - x.p_j <= tol for every j.
// `initial`, when non-empty, is a starting weight vector whose support
// must be affinely independent (typically the previous answer).
MinNormResult MinNormPointGram(const std::vector<std::vector<double>>& gram,
                               double tol = 1e-9,
                               const std::vector<double>& initial = {});

struct Projection {
  std::vector<double> y;
  std::vector<double> lambda;
  double distance = 0.0;
  bool converged = true;
};

// Euclidean projection of `target` onto conv(points).
Projection MinNormPoint(std::span<const double> target,
                        std::span<const std::vector<double>> points,
                        double tol = 1e-9);

}  // namespace coursealloc::numeric

#endif  // COURSEALLOC_NUMERIC_HPP_
