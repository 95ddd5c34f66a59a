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

#include "coursealloc/lottery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <type_traits>

#include "coursealloc/error.hpp"
#include "coursealloc/numeric.hpp"
#include "coursealloc/random.hpp"

namespace coursealloc {

namespace {

constexpr int kExactDimensionLimit = 60;
constexpr double kFloatIntegrality = 1e-7;

template <typename Scalar>
IntegralPoint RoundImpl(const Instance& instance, const SupportSpace& space,
                        std::vector<Scalar> objective, RoundingStats* stats) {
  const int d = space.dimension();
  const int G = instance.num_groups();
  const int slack = instance.num_classes() - 1;
  numeric::AssignmentLp<Scalar> lp;
  lp.num_students = instance.num_students();
  lp.variables.resize(d);
  for (int v = 0; v < d; ++v) lp.variables[v] = {space.student[v], space.bundle[v].groups()};
  lp.objective = std::move(objective);
  lp.capacity.resize(G);
  lp.supply_active.assign(G, false);
  for (int g = 0; g < G; ++g) lp.capacity[g] = instance.capacity(g);
  for (int v = 0; v < d; ++v) {
    for (int g : space.bundle[v].groups()) lp.supply_active[g] = true;
  }

  const Scalar tol = std::is_same_v<Scalar, double> ? Scalar(kFloatIntegrality) : Scalar(0);
  while (true) {
    auto sol = numeric::SolveAssignmentLp(lp);
    if (stats) {
      ++stats->lp_solves;
      stats->pivots += sol.pivots;
    }
    bool fractional = false;
    bool pinned = false;
    for (int v = 0; v < d; ++v) {
      if (lp.fixed.count(v)) continue;
      const Scalar& x = sol.x[v];
      if (x <= tol) {
        lp.fixed[v] = 0;
        pinned = true;
      } else if (x >= 1 - tol) {
        lp.fixed[v] = 1;
        pinned = true;
      } else {
        fractional = true;
      }
    }
    if (!fractional) break;
    if (pinned) continue;

    // Nothing integral: drop every supply row whose remaining variables
    // cannot overrun the residual capacity by more than the slack.
    std::vector<int> used(G, 0), remaining(G, 0);
    for (int v = 0; v < d; ++v) {
      auto it = lp.fixed.find(v);
      for (int g : space.bundle[v].groups()) {
        if (it == lp.fixed.end()) {
          ++remaining[g];
        } else if (it->second == 1) {
          ++used[g];
        }
      }
    }
    int deleted = 0;
    for (int g = 0; g < G; ++g) {
      if (!lp.supply_active[g]) continue;
      if (remaining[g] <= instance.capacity(g) - used[g] + slack) {
        lp.supply_active[g] = false;
        ++deleted;
      }
    }
    if (deleted == 0) throw InternalError("iterative rounding: no supply row can be deleted");
    if (stats) stats->rows_deleted += deleted;
  }

  IntegralPoint point(instance.num_students(), -1);
  for (const auto& [v, value] : lp.fixed) {
    if (value != 1) continue;
    if (point[space.student[v]] >= 0) throw InternalError("iterative rounding: demand violated");
    point[space.student[v]] = v;
  }
  return point;
}

bool UseExact(LpArithmetic a, int d) {
  if (a == LpArithmetic::kExact) return true;
  if (a == LpArithmetic::kFloat) return false;
  return d <= kExactDimensionLimit;
}

double Dot(const IntegralPoint& z, const std::vector<double>& v) {
  double s = 0.0;
  for (int c : z) {
    if (c >= 0) s += v[c];
  }
  return s;
}

int Common(const IntegralPoint& a, const IntegralPoint& b) {
  int n = 0;
  for (std::size_t s = 0; s < a.size(); ++s) n += (a[s] >= 0 && a[s] == b[s]);
  return n;
}

DeterministicMatching ToMatching(const SupportSpace& space, const IntegralPoint& z) {
  DeterministicMatching m;
  m.assignment.resize(z.size());
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (z[s] >= 0) m.assignment[s] = space.bundle[z[s]];
  }
  return m;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

SupportSpace MakeSupportSpace(const FractionalAssignment& x) {
  SupportSpace space;
  space.of_student.resize(x.num_students());
  for (int s = 0; s < x.num_students(); ++s) {
    for (const auto& share : x.row(s)) {
      if (share.p == 0) continue;
      if (share.p < 0 || share.p > 1) throw DataError("probability outside [0, 1]");
      space.of_student[s].push_back(space.dimension());
      space.student.push_back(s);
      space.bundle.push_back(share.bundle);
      space.value.push_back(share.p);
    }
  }
  return space;
}

IntegralPoint IterativeRounding(const Instance& instance, const SupportSpace& space,
                                const std::vector<double>& u, LpArithmetic arithmetic,
                                RoundingStats* stats,
                                const std::vector<Rational>* exact_objective) {
  if (static_cast<int>(u.size()) != space.dimension()) {
    throw DataError("objective dimension does not match the support");
  }
  if (UseExact(arithmetic, space.dimension())) {
    std::vector<Rational> obj;
    if (exact_objective) {
      obj = *exact_objective;
    } else {
      obj.reserve(u.size());
      for (double v : u) obj.push_back(FromDouble(v));
    }
    return RoundImpl<Rational>(instance, space, std::move(obj), stats);
  }
  return RoundImpl<double>(instance, space, u, stats);
}

DeltaInfo ComputeDelta(const SupportSpace& space, const std::vector<double>& target) {
  DeltaInfo info;
  bool first = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < space.of_student.size(); ++s) {
    const auto& coords = space.of_student[s];
    if (coords.empty()) continue;
    Rational mass = 0;
    double fmass = 0.0;
    for (int c : coords) {
      mass += space.value[c];
      fmass += target[c];
    }
    Rational slack = 1 - mass;
    if (first || slack < info.min_slack) info.min_slack = slack;
    first = false;
    best = std::min(best, (1.0 - fmass) / std::sqrt(static_cast<double>(coords.size())));
  }
  info.rescale_needed = !first && info.min_slack <= 0;
  info.delta = first ? 1.0 : std::max(0.0, best);
  return info;
}

OverAllocationReport OverAllocationStats(const Lottery& lottery, const Instance& instance) {
  if (lottery.support.empty()) throw DataError("lottery has no support");
  OverAllocationReport report;
  report.max_level = std::max(0, instance.num_classes() - 1);
  for (int level = 1; level <= report.max_level; ++level) report.expected[level] = 0;
  report.worst_per_group.assign(instance.num_groups(), std::numeric_limits<int>::min());
  for (const auto& entry : lottery.support) {
    const Rational lambda = FromDouble(entry.lambda);
    std::vector<int> used = entry.matching.GroupUsage(instance);
    for (int g = 0; g < instance.num_groups(); ++g) {
      const int over = used[g] - instance.capacity(g);
      report.worst_per_group[g] = std::max(report.worst_per_group[g], over);
      report.worst = std::max(report.worst, over);
      if (over >= 1) report.expected[over] += lambda;
    }
  }
  return report;
}

LotteryResult Decompose(const Instance& instance, const FractionalAssignment& x,
                        const LotteryConfig& config) {
  if (!(config.epsilon > 0)) throw DataError("epsilon must be positive");
  if (config.alpha && !(*config.alpha > 0 && *config.alpha <= 1)) {
    throw DataError("alpha must lie in (0, 1]");
  }
  if (config.delta && !(*config.delta > 0)) throw DataError("delta must be positive");
  if (x.num_students() != instance.num_students()) {
    throw DataError("assignment does not cover the instance's students");
  }
  FeasibilityReport feasible = CheckFeasibility(instance, x);
  if (!feasible.ok) throw DataError("assignment is infeasible: " + feasible.violations.front());

  LotteryResult result;
  const SupportSpace space = MakeSupportSpace(x);
  const int d = space.dimension();
  const int S = instance.num_students();
  result.dimension = d;
  result.lottery.epsilon = config.epsilon;
  result.epsilon_effective = config.epsilon;

  std::vector<double> xs(d);
  double norm2 = 0.0;
  for (int i = 0; i < d; ++i) {
    xs[i] = space.value[i].get_d();
    norm2 += xs[i] * xs[i];
  }
  if (d == 0) {
    DeterministicMatching empty;
    empty.assignment.resize(S);
    result.lottery.support.push_back({empty, 1.0});
    result.report = OverAllocationStats(result.lottery, instance);
    result.distances.push_back(0.0);
    result.support_sizes.push_back(1);
    return result;
  }

  // Rescale when some demand row is tight, so that a ball around the
  // target stays inside the demand polytope.
  DeltaInfo info = ComputeDelta(space, xs);
  std::vector<double> target = xs;
  std::vector<Rational> exact_target = space.value;
  if (info.rescale_needed) {
    const double norm = std::sqrt(norm2);
    result.alpha = config.alpha ? *config.alpha
                                : std::max(1.0 - config.epsilon / (4.0 * norm), 0.5);
    result.epsilon_effective = config.epsilon / 2.0;
    const Rational alpha = FromDouble(result.alpha);
    for (int i = 0; i < d; ++i) {
      target[i] = xs[i] * result.alpha;
      exact_target[i] *= alpha;
    }
    for (int s = 0; s < S; ++s) {
      double mass = 0.0;
      for (int c : space.of_student[s]) mass += xs[c];
      if (mass > 0) result.unmatched_increase[s] = (1.0 - result.alpha) * mass;
    }
  }
  double tt = 0.0;
  for (double v : target) tt += v * v;

  const int max_iterations = config.max_iterations > 0 ? config.max_iterations : 10 * d;
  const LpArithmetic arithmetic =
      UseExact(config.arithmetic, d) ? LpArithmetic::kExact : LpArithmetic::kFloat;

  std::vector<IntegralPoint> points;
  std::vector<double> point_dot;  // z_k . target
  std::vector<std::vector<double>> gram;
  auto add_point = [&](IntegralPoint z) {
    const double zt = Dot(z, target);
    const std::size_t k = points.size();
    std::vector<double> row(k + 1);
    for (std::size_t l = 0; l < k; ++l) {
      row[l] = Common(z, points[l]) - zt - point_dot[l] + tt;
      gram[l].push_back(row[l]);
    }
    int size = 0;
    for (int c : z) size += (c >= 0);
    row[k] = size - 2 * zt + tt;
    gram.push_back(std::move(row));
    points.push_back(std::move(z));
    point_dot.push_back(zt);
  };

  add_point(IterativeRounding(instance, space, target, arithmetic, nullptr, &exact_target));

  std::vector<double> lambda;
  std::vector<double> y(d);
  double delta = -1.0;
  for (int iter = 0;; ++iter) {
    std::vector<double> warm;
    if (!lambda.empty()) {
      warm = lambda;
      warm.push_back(0.0);
    }
    auto proj = numeric::MinNormPointGram(gram, 1e-12 * (1.0 + tt), warm);
    lambda = proj.lambda;

    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (lambda[k] == 0.0) continue;
      for (int c : points[k]) {
        if (c >= 0) y[c] += lambda[k];
      }
    }
    double scaled2 = 0.0, orig2 = 0.0;
    for (int i = 0; i < d; ++i) {
      scaled2 += (target[i] - y[i]) * (target[i] - y[i]);
      orig2 += (xs[i] - y[i]) * (xs[i] - y[i]);
    }
    result.scaled_distance = std::sqrt(scaled2);
    result.distance = std::sqrt(orig2);
    result.iterations = iter;

    // Keep only the support of lambda.
    std::vector<IntegralPoint> kept_points;
    std::vector<double> kept_dot, kept_lambda;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (lambda[k] > 0.0) keep.push_back(k);
    }
    std::vector<std::vector<double>> kept_gram(keep.size(), std::vector<double>(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a) {
      kept_points.push_back(std::move(points[keep[a]]));
      kept_dot.push_back(point_dot[keep[a]]);
      kept_lambda.push_back(lambda[keep[a]]);
      for (std::size_t b = 0; b < keep.size(); ++b) kept_gram[a][b] = gram[keep[a]][keep[b]];
    }
    points = std::move(kept_points);
    point_dot = std::move(kept_dot);
    lambda = std::move(kept_lambda);
    gram = std::move(kept_gram);
    result.distances.push_back(result.scaled_distance);
    result.support_sizes.push_back(static_cast<int>(points.size()));

    if (result.scaled_distance < result.epsilon_effective && result.distance < config.epsilon) {
      break;
    }
    if (iter >= max_iterations) {
      result.converged = false;
      result.diagnostic = "iteration limit reached";
      break;
    }

    // Probe beyond x* in the direction away from the hull.
    if (delta < 0) {
      delta = config.delta ? *config.delta : ComputeDelta(space, target).delta;
      result.delta = delta;
      if (!(delta > 0)) {
        result.converged = false;
        result.diagnostic = "no slack around the target";
        break;
      }
    }
    std::vector<double> u(d);
    for (int i = 0; i < d; ++i) u[i] = target[i] - y[i];
    const double u_norm = result.scaled_distance;
    double threshold = delta * u_norm;
    for (int i = 0; i < d; ++i) threshold += u[i] * target[i];
    IntegralPoint next = IterativeRounding(instance, space, u, arithmetic);
    const double achieved = Dot(next, u);
    if (achieved < threshold - 1e-9 * (1.0 + std::fabs(threshold))) {
      ++result.probe_shortfalls;
      // The ball around the target may leave the supply polytope, so the
      // threshold can be out of reach. u'z >= u'target = u'y + |u|^2
      // still moves the hull towards the target.
      double uy = 0.0;
      for (int i = 0; i < d; ++i) uy += u[i] * y[i];
      const double descent = achieved - uy;
      if (config.strict_probe || descent <= 1e-12 * (1.0 + std::fabs(uy))) {
        result.converged = false;
        result.diagnostic = config.strict_probe ? "rounded point misses the probe threshold"
                                                : "rounded point gives no descent";
        break;
      }
    }
    add_point(std::move(next));
  }

  for (std::size_t k = 0; k < points.size(); ++k) {
    result.lottery.support.push_back({ToMatching(space, points[k]), lambda[k]});
  }
  result.report = OverAllocationStats(result.lottery, instance);
  return result;
}

std::size_t DrawIndex(const Lottery& lottery, std::uint64_t seed, std::uint64_t index) {
  if (lottery.support.empty()) throw DataError("lottery has no support");
  StreamRng rng(seed, index);
  const double u = rng.Unit();
  double total = 0.0;
  for (const auto& e : lottery.support) total += e.lambda;
  double cumulative = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < lottery.support.size(); ++k) {
    if (lottery.support[k].lambda <= 0.0) continue;
    last = k;
    cumulative += lottery.support[k].lambda / total;
    if (u < cumulative) return k;
  }
  return last;
}

DeterministicMatching Draw(const Lottery& lottery, std::uint64_t seed, std::uint64_t index) {
  return lottery.support[DrawIndex(lottery, seed, index)].matching;
}

Json LotteryReportToJson(const Instance& instance, const LotteryResult& result) {
  Json levels = Json::object();
  for (const auto& [level, e] : result.report.expected) {
    levels[std::to_string(level)] = Json{{"exact", ToString(e)}, {"value", e.get_d()}};
  }
  Json worst = Json::object();
  for (int g = 0; g < instance.num_groups(); ++g) {
    if (result.report.worst_per_group[g] > 0) {
      worst[instance.groups()[g].id] = result.report.worst_per_group[g];
    }
  }
  Json unmatched = Json::object();
  for (const auto& [s, v] : result.unmatched_increase) unmatched[instance.students()[s]] = v;
  Json doc = {{"epsilon", result.lottery.epsilon},
              {"epsilon_effective", result.epsilon_effective},
              {"alpha", result.alpha},
              {"delta", result.delta},
              {"dimension", result.dimension},
              {"support_size", result.lottery.support.size()},
              {"distance", result.distance},
              {"scaled_distance", result.scaled_distance},
              {"iterations", result.iterations},
              {"converged", result.converged},
              {"probe_shortfalls", result.probe_shortfalls},
              {"over_allocation",
               Json{{"max_allowed", result.report.max_level},
                    {"worst", result.report.worst},
                    {"expected", std::move(levels)},
                    {"worst_per_group", std::move(worst)}}}};
  if (!result.diagnostic.empty()) doc["diagnostic"] = result.diagnostic;
  if (!unmatched.empty()) doc["unmatched_increase"] = std::move(unmatched);
  return doc;
}

std::string LotterySupportCsv(const Lottery& lottery, const PreferenceProfile& profile) {
  std::ostringstream out;
  out << "matching,lambda,size,average_rank\n";
  std::vector<RankIndex> ranks;
  for (int s = 0; s < profile.num_students(); ++s) ranks.emplace_back(profile.list(s));
  for (std::size_t k = 0; k < lottery.support.size(); ++k) {
    const auto& m = lottery.support[k].matching;
    long rank_sum = 0;
    std::size_t ranked = 0;
    for (std::size_t s = 0; s < m.assignment.size() && s < ranks.size(); ++s) {
      if (!m.assignment[s]) continue;
      int r = ranks[s].RankOf(*m.assignment[s]);
      if (r > 0) {
        rank_sum += r;
        ++ranked;
      }
    }
    out << k + 1 << ',' << Fixed(lottery.support[k].lambda, 9) << ',' << m.Size() << ',';
    if (ranked > 0) out << Fixed(static_cast<double>(rank_sum) / ranked, 4);
    out << '\n';
  }
  return out.str();
}

}  // namespace coursealloc
