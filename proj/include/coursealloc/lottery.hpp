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

// Decomposition of a fractional assignment into a lottery over integral
// matchings that may over-allocate each group by at most (classes - 1)
// seats.
//
// Integral points come from iterative rounding: solve the assignment LP
// to a vertex, pin every 0/1 coordinate, and when nothing can be pinned
// drop a supply row that can no longer be overrun by more than the
// allowed slack. The lottery repeatedly projects x* onto the convex hull
// of the points found so far and asks the rounding for a new point on
// the far side of x*.

#ifndef COURSEALLOC_LOTTERY_HPP_
#define COURSEALLOC_LOTTERY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coursealloc/model.hpp"
#include "coursealloc/serialize.hpp"

namespace coursealloc {

enum class LpArithmetic { kAuto, kExact, kFloat };

// The (student, bundle) coordinates of a fractional assignment's support.
struct SupportSpace {
  std::vector<int> student;          // per coordinate
  std::vector<Bundle> bundle;        // per coordinate
  std::vector<Rational> value;       // x* per coordinate
  std::vector<std::vector<int>> of_student;

  int dimension() const { return static_cast<int>(student.size()); }
};

SupportSpace MakeSupportSpace(const FractionalAssignment& x);

// One coordinate index per student, -1 for unmatched.
using IntegralPoint = std::vector<int>;

struct RoundingStats {
  int lp_solves = 0;
  int rows_deleted = 0;
  int pivots = 0;
};

// Integral point with u'x >= the LP optimum over the support, exact
// demand, and each group over by at most num_classes - 1. Throws
// InternalError when no supply row can be deleted. `exact_objective`
// overrides `u` in exact arithmetic when given.
IntegralPoint IterativeRounding(const Instance& instance, const SupportSpace& space,
                                const std::vector<double>& u, LpArithmetic arithmetic,
                                RoundingStats* stats = nullptr,
                                const std::vector<Rational>* exact_objective = nullptr);

struct DeltaInfo {
  double delta = 0.0;
  Rational min_slack;
  bool rescale_needed = false;
};

// delta = min_i (1 - sum_b x_ib) / sqrt(m_i) over students with m_i > 0
// support coordinates.
DeltaInfo ComputeDelta(const SupportSpace& space, const std::vector<double>& target);

struct LotteryConfig {
  double epsilon = 2.0;
  std::optional<double> delta;  // nullopt: computed
  std::optional<double> alpha;  // nullopt: 1 - epsilon / (4 |x*|), at least 1/2
  int max_iterations = 0;       // 0: 10 * d
  LpArithmetic arithmetic = LpArithmetic::kAuto;
  // Stop as soon as a rounded point misses u'x* + delta |u| instead of
  // continuing while it still makes progress.
  bool strict_probe = false;
};

struct OverAllocationReport {
  int max_level = 0;                      // num_classes - 1
  std::map<int, Rational> expected;       // L -> E_L, for L = 1..max_level
  std::vector<int> worst_per_group;       // max over the support of (used - q_j)
  int worst = 0;
};

OverAllocationReport OverAllocationStats(const Lottery& lottery, const Instance& instance);

struct LotteryResult {
  Lottery lottery;
  OverAllocationReport report;
  int dimension = 0;
  double distance = 0.0;         // |x* - sum lambda z|
  double scaled_distance = 0.0;  // the same against the rescaled target
  double alpha = 1.0;
  double epsilon_effective = 0.0;
  double delta = 0.0;
  int iterations = 0;
  int probe_shortfalls = 0;      // rounded points below the probe threshold
  bool converged = true;
  std::string diagnostic;        // empty on normal termination
  std::vector<double> distances;  // per iteration, non-increasing
  std::vector<int> support_sizes;  // per iteration
  std::map<int, double> unmatched_increase;  // per student, when rescaled
};

LotteryResult Decompose(const Instance& instance, const FractionalAssignment& x,
                        const LotteryConfig& config = {});

// Matching k is drawn with probability lambda_k. Draw `index` of a seed
// is a pure function of (seed, index).
std::size_t DrawIndex(const Lottery& lottery, std::uint64_t seed, std::uint64_t index = 0);
DeterministicMatching Draw(const Lottery& lottery, std::uint64_t seed, std::uint64_t index = 0);

Json LotteryReportToJson(const Instance& instance, const LotteryResult& result);

// One row per support matching: index, lambda, size, average rank.
std::string LotterySupportCsv(const Lottery& lottery, const PreferenceProfile& profile);

}  // namespace coursealloc

#endif  // COURSEALLOC_LOTTERY_HPP_
