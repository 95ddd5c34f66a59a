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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 1 if
// any fails. With arguments, runs only the listed criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "coursealloc/elicitation.hpp"
#include "coursealloc/error.hpp"
#include "coursealloc/generator.hpp"
#include "coursealloc/lottery.hpp"
#include "coursealloc/mechanisms.hpp"
#include "coursealloc/metrics.hpp"
#include "coursealloc/model.hpp"
#include "coursealloc/rev.hpp"
#include "coursealloc/serialize.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace coursealloc {
namespace {

using testing::B;
using testing::Market;

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects failures; the first few are kept for the report line.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  Verdict Done(const std::string& summary) const {
    if (failures_ == 0) return {true, summary};
    return {false, summary + "; " + std::to_string(failures_) + " failure(s): " + notes_};
  }

 private:
  int failures_ = 0;
  std::string notes_;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

int Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ExactlyFeasible(const Instance& inst, const FractionalAssignment& x) {
  for (int s = 0; s < x.num_students(); ++s) {
    if (x.RowSum(s) > 1) return false;
    for (const BundleShare& e : x.row(s)) {
      if (e.p < 0 || e.p > 1) return false;
    }
  }
  const std::vector<Rational> usage = x.GroupUsage(inst);
  for (int g = 0; g < inst.num_groups(); ++g) {
    if (usage[g] > inst.capacity(g)) return false;
  }
  return true;
}

// Every BPS run in this binary goes through here.
struct BpsTally {
  int runs = 0;
  int infeasible = 0;
} bps_tally;

FractionalAssignment Bps(const Instance& inst, const PreferenceProfile& profile) {
  FractionalAssignment x = RunBps(inst, profile).assignment;
  ++bps_tally.runs;
  if (!ExactlyFeasible(inst, x)) ++bps_tally.infeasible;
  return x;
}

struct Elicited {
  Instance inst;
  PreferenceProfile profile;
};

Elicited GenerateAndElicit(const GeneratorConfig& config) {
  GeneratedMarket m = Generate(config);
  PreferenceProfile profile = ElicitProfile(m.instance, m.params, Threads());
  return {std::move(m.instance), std::move(profile)};
}

GeneratorConfig DeskConfig(std::uint64_t seed, int classes) {
  GeneratorConfig c;
  c.seed = seed;
  c.students = 50;
  c.classes = classes;
  c.groups_per_class = 4;
  c.capacity_min = c.capacity_max = 5;
  return c;
}

// |x - sum lambda z| from the lottery itself.
double LotteryDistance(const FractionalAssignment& x, const Lottery& lottery) {
  const FractionalAssignment y = ExpectedAssignment(lottery, x.num_students());
  double d2 = 0;
  for (int s = 0; s < x.num_students(); ++s) {
    for (const BundleShare& e : x.row(s)) {
      const double diff = e.p.get_d() - y.Probability(s, e.bundle).get_d();
      d2 += diff * diff;
    }
    for (const BundleShare& e : y.row(s)) {
      if (x.Probability(s, e.bundle) == 0) d2 += e.p.get_d() * e.p.get_d();
    }
  }
  return std::sqrt(d2);
}

// Checks shared by every decomposition: accuracy, violation bound,
// support size. Returns the worst violation seen.
int CheckDecomposition(Check& check, const Instance& inst, const FractionalAssignment& x,
                       const LotteryResult& r, double epsilon, const std::string& label) {
  check.Expect(r.converged, label + ": not converged (" + r.diagnostic + ")");
  const double dist = LotteryDistance(x, r.lottery);
  check.Expect(dist < epsilon, label + ": distance " + Fmt(dist, 6) + " >= " + Fmt(epsilon, 6));
  check.Expect(static_cast<int>(r.lottery.support.size()) <= r.dimension + 1,
               label + ": support above d + 1");
  int worst = 0;
  for (const LotteryEntry& e : r.lottery.support) {
    const std::vector<int> used = e.matching.GroupUsage(inst);
    for (int g = 0; g < inst.num_groups(); ++g) worst = std::max(worst, used[g] - inst.capacity(g));
  }
  check.Expect(worst <= inst.num_classes() - 1, label + ": violation " + std::to_string(worst));
  return worst;
}

// ---- criteria --------------------------------------------------------

Verdict BpsEnvyFree() {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  int envious = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Elicited m = GenerateAndElicit(DeskConfig(seed, 3));
    const EnvyCounts envy = CountEnvy(Bps(m.inst, m.profile), m.profile);
    if (!(envy == EnvyCounts{})) ++envious;
    check.Expect(envy == EnvyCounts{}, "seed " + std::to_string(seed) + " envy (" +
                                           std::to_string(envy.strong) + ", " +
                                           std::to_string(envy.weak) + ")");
  }
  const double secs = Seconds(start);
  check.Expect(secs < 60.0, "took " + Fmt(secs, 1) + " s");
  return check.Done("200 instances (50 students, 3 classes, 4 groups, cap 5), " +
                    std::to_string(envious) + " with envy, " + Fmt(secs, 1) + " s");
}

Verdict BpsEqualsPs() {
  Check check;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int items = std::uniform_int_distribution<int>(1, 6)(rng);
    const int students = std::uniform_int_distribution<int>(1, 10)(rng);
    std::vector<int> caps(items);
    for (int& c : caps) c = std::uniform_int_distribution<int>(1, 3)(rng);
    const Instance inst = Market({caps}, students);
    const PreferenceProfile profile = testing::RandomProfile(inst, rng, 0, items, 1);
    std::vector<std::vector<int>> prefs(students);
    for (int s = 0; s < students; ++s) {
      for (const Bundle& b : profile.list(s)) prefs[s].push_back(b.groups()[0]);
    }
    const auto oracle = testing::UnitPs(prefs, caps);
    const FractionalAssignment x = Bps(inst, profile);
    for (int s = 0; s < students; ++s) {
      for (int j = 0; j < items; ++j) {
        check.Expect(x.Probability(s, Bundle({j})) == oracle[s][j],
                     "trial " + std::to_string(trial) + " student " + std::to_string(s));
      }
    }
  }
  return check.Done("100 unit-demand instances equal the single-unit eating oracle exactly");
}

Verdict BpsFeasible() {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int classes = 1 + trial % 4;
    std::vector<std::vector<int>> caps(classes);
    for (auto& c : caps) {
      const int groups = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int k = 0; k < groups; ++k) c.push_back(std::uniform_int_distribution<int>(1, 4)(rng));
    }
    const Instance inst = Market(caps, std::uniform_int_distribution<int>(1, 15)(rng));
    Bps(inst, testing::RandomProfile(inst, rng, 0, 8, classes));
  }
  Check check;
  check.Expect(bps_tally.infeasible == 0, std::to_string(bps_tally.infeasible) + " infeasible runs");
  return check.Done("demand and supply hold exactly on all " + std::to_string(bps_tally.runs) +
                    " BPS runs");
}

Verdict BrsdExactness() {
  Check check;
  // Hand enumeration of the two-student bundle example.
  const testing::ExampleE e;
  const FractionalAssignment hand = EnumerateBrsdExact(e.inst, e.profile);
  check.Expect(hand.Probability(0, B(e.inst, {"x1", "y1"})) == Rational(1, 2) &&
                   hand.Probability(0, B(e.inst, {"x1", "y2"})) == 0 &&
                   hand.Probability(1, B(e.inst, {"x1", "y1"})) == Rational(1, 2) &&
                   hand.Probability(1, B(e.inst, {"y2"})) == Rational(1, 2),
               "worked example differs from hand enumeration");

  std::vector<Elicited> markets;
  markets.push_back({e.inst, e.profile});
  std::mt19937_64 rng(4);
  for (int students = 2; students <= 7; ++students) {
    for (int k = 0; k < 2; ++k) {
      const Instance inst = Market({{1, 2, 1}, {1, 1}}, students);
      markets.push_back({inst, testing::RandomProfile(inst, rng, 1, 5, 2)});
    }
    GeneratorConfig c;
    c.seed = 40 + students;
    c.students = students;
    c.classes = 3;
    c.groups_per_class = 2;
    c.capacity_min = 1;
    c.capacity_max = 2;
    c.max_bundles = 6;
    markets.push_back(GenerateAndElicit(c));
  }

  const std::uint64_t reps = 1000000;
  int entries = 0;
  double worst_z = 0;
  for (std::size_t i = 0; i < markets.size(); ++i) {
    const Elicited& m = markets[i];
    const FractionalAssignment exact = EnumerateBrsdExact(m.inst, m.profile);
    const FractionalAssignment est = EstimateBrsd(m.inst, m.profile, reps, 1000 + i, Threads());
    for (int s = 0; s < m.inst.num_students(); ++s) {
      std::set<Bundle> seen;
      for (const Bundle& b : m.profile.list(s)) seen.insert(b);
      for (const BundleShare& x : est.row(s)) seen.insert(x.bundle);
      // Each listed bundle, plus being unmatched.
      std::vector<std::pair<double, double>> cells;
      for (const Bundle& b : seen) {
        cells.push_back({exact.Probability(s, b).get_d(), est.Probability(s, b).get_d()});
      }
      cells.push_back({1 - exact.RowSum(s).get_d(), 1 - est.RowSum(s).get_d()});
      for (const auto& [p, q] : cells) {
        ++entries;
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(reps));
        const double diff = std::fabs(p - q);
        if (sigma > 0) worst_z = std::max(worst_z, diff / sigma);
        check.Expect(diff <= 3 * sigma + 1e-12, "market " + std::to_string(i) + " student " +
                                                    std::to_string(s) + ": exact " + Fmt(p, 6) +
                                                    " vs " + Fmt(q, 6));
      }
    }
  }
  // Under exact sampling each entry leaves 3 sigma with probability 0.0027.
  return check.Done(std::to_string(markets.size()) + " markets with 2..7 students, " +
                    std::to_string(entries) + " entries at 10^6 draws, max |z| " +
                    Fmt(worst_z, 2) + " (chance exceedances expected: " +
                    Fmt(entries * 0.0027, 2) + "); worked example matches hand enumeration");
}

struct Regression {
  Instance inst;
  PreferenceProfile profile;
};

Regression LoadRegression() {
  const Instance inst = LoadInstance(ReadFile(COURSEALLOC_DATA_DIR "/regression_instance.json"));
  const PreferenceProfile profile =
      ProfileFromJson(inst, ParseDocument(ReadFile(COURSEALLOC_DATA_DIR "/regression_profiles.json")));
  return {inst, profile};
}

Verdict BrsdEnvy() {
  Check check;
  const Regression r = LoadRegression();
  check.Expect(r.inst.num_classes() == 2, "instance does not have two classes");
  check.Expect(r.inst.num_students() <= 6, "more than 6 students");
  const EnvyCounts brsd = CountEnvy(EnumerateBrsdExact(r.inst, r.profile), r.profile);
  const EnvyCounts bps = CountEnvy(Bps(r.inst, r.profile), r.profile);
  check.Expect(brsd.strong >= 1, "BRSD strong envy 0");
  check.Expect(bps == EnvyCounts{}, "BPS envy not (0, 0)");
  return check.Done("regression instance (" + std::to_string(r.inst.num_students()) +
                    " students): BRSD envy (" + std::to_string(brsd.strong) + ", " +
                    std::to_string(brsd.weak) + "), BPS envy (" + std::to_string(bps.strong) +
                    ", " + std::to_string(bps.weak) + ")");
}

Verdict LotteryDecomposition() {
  Check check;
  // Both students rank {A} over {B}, one seat each.
  const Instance pair = Market({{1}, {1}}, 2);
  PreferenceProfile symmetric(2);
  for (int s = 0; s < 2; ++s) symmetric.mutable_list(s) = {B(pair, {"c1-1"}), B(pair, {"c2-1"})};
  const FractionalAssignment sx = Bps(pair, symmetric);
  LotteryConfig tight;
  tight.epsilon = 1e-6;
  const LotteryResult sr = Decompose(pair, sx, tight);
  CheckDecomposition(check, pair, sx, sr, tight.epsilon, "symmetric");
  const double sdist = LotteryDistance(sx, sr.lottery);
  check.Expect(sr.lottery.support.size() == 2, "symmetric support is not two matchings");
  for (const LotteryEntry& e : sr.lottery.support) {
    check.Expect(std::fabs(e.lambda - 0.5) <= 1e-12, "symmetric lambda " + Fmt(e.lambda, 15));
    check.Expect(e.matching.Size() == 2, "symmetric matching leaves a student out");
  }
  check.Expect(sdist <= 1e-12, "symmetric distance " + Fmt(sdist, 15));

  int runs = 1;
  int worst = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (int classes = 2; classes <= 4; ++classes) {
      const Elicited m = GenerateAndElicit(DeskConfig(600 + seed, classes));
      const FractionalAssignment x = Bps(m.inst, m.profile);
      for (double eps : {2.0, 0.5, 0.1}) {
        LotteryConfig config;
        config.epsilon = eps;
        const LotteryResult r = Decompose(m.inst, x, config);
        worst = std::max(worst, CheckDecomposition(check, m.inst, x, r, eps,
                                                   "seed " + std::to_string(seed) + " classes " +
                                                       std::to_string(classes) + " eps " + Fmt(eps, 1)));
        ++runs;
      }
    }
  }
  return check.Done(std::to_string(runs) + " decompositions within epsilon, worst violation " +
                    std::to_string(worst) + " <= classes - 1, support <= d + 1; symmetric pair: lambda (" +
                    Fmt(sr.lottery.support.empty() ? 0 : sr.lottery.support[0].lambda, 3) + ", " +
                    Fmt(sr.lottery.support.size() < 2 ? 0 : sr.lottery.support[1].lambda, 3) +
                    "), distance " + Fmt(sdist, 3));
}

Verdict OverAllocation() {
  Check check;
  const int classes = 4;
  std::map<int, Rational> total;
  int worst = 0;
  const int runs = 20;
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    const Elicited m = GenerateAndElicit(DeskConfig(800 + seed, classes));
    const FractionalAssignment x = Bps(m.inst, m.profile);
    LotteryConfig config;
    config.epsilon = 2.0;
    const LotteryResult r = Decompose(m.inst, x, config);
    worst = std::max(worst, CheckDecomposition(check, m.inst, x, r, 2.0, "seed " + std::to_string(seed)));
    // E_L recomputed from the lottery.
    std::map<int, Rational> e;
    for (const LotteryEntry& entry : r.lottery.support) {
      const std::vector<int> used = entry.matching.GroupUsage(m.inst);
      Rational lambda(entry.lambda);
      for (int g = 0; g < m.inst.num_groups(); ++g) {
        const int over = used[g] - m.inst.capacity(g);
        if (over >= 1) e[over] += lambda;
      }
    }
    for (int L = 1; L < classes; ++L) {
      check.Expect(e[L] == r.report.expected.at(L), "seed " + std::to_string(seed) + " E_" +
                                                          std::to_string(L) + " differs");
      total[L] += e[L];
    }
  }
  for (int L = 1; L < classes; ++L) total[L] /= runs;
  check.Expect(total[1] >= total[2] && total[2] >= total[3], "ordering E_1 >= E_2 >= E_3 not observed");
  check.Expect(worst <= classes - 1, "violation above classes - 1");
  return check.Done(std::to_string(runs) + " runs (50 students, 4 classes, eps 2): mean E_1 " +
                    Fmt(total[1].get_d()) + " >= E_2 " + Fmt(total[2].get_d()) + " >= E_3 " +
                    Fmt(total[3].get_d()) + ", worst violation " + std::to_string(worst));
}

Verdict AupcrLemma() {
  Check check;
  // Two students, R = 2, matched at ranks 1 and 2.
  const Instance two = Market({{1, 1}}, 2);
  PreferenceProfile hp(2);
  for (int s = 0; s < 2; ++s) hp.mutable_list(s) = {B(two, {"c1-1"}), B(two, {"c1-2"})};
  FractionalAssignment hx(2);
  hx.Add(0, B(two, {"c1-1"}), 1);
  hx.Add(1, B(two, {"c1-2"}), 1);
  const Rational hand = Aupcr(hx, hp, 2);
  check.Expect(hand == Rational(3, 4), "hand example gives " + hand.get_str());

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 15)(rng);
    const Instance inst = Market({{2, 2, 1}, {3, 2}, {1, 1}}, n);
    const PreferenceProfile profile = testing::RandomProfile(inst, rng, 1, 8, 3);
    const int R = static_cast<int>(profile.MaxListLength());
    // Random deterministic matching: each student takes a random listed
    // bundle or nothing; capacity is irrelevant to the metric.
    FractionalAssignment x(n);
    std::vector<int> rank(n, 0);
    for (int s = 0; s < n; ++s) {
      const int len = static_cast<int>(profile.list(s).size());
      rank[s] = std::uniform_int_distribution<int>(0, len)(rng);
      if (rank[s] > 0) x.Add(s, profile.list(s)[rank[s] - 1], 1);
    }
    // Lemma: sum over matched students of (R - k + 1), over R |S|.
    Rational lemma = 0;
    for (int s = 0; s < n; ++s) {
      if (rank[s] > 0) lemma += R - rank[s] + 1;
    }
    lemma /= Rational(R * n);
    // Curve: the fraction matched at rank <= r, averaged over r = 1..R.
    Rational curve = 0;
    for (int r = 1; r <= R; ++r) {
      int count = 0;
      for (int s = 0; s < n; ++s) count += rank[s] >= 1 && rank[s] <= r;
      curve += Rational(count, n);
    }
    curve /= R;
    curve.canonicalize();
    lemma.canonicalize();
    check.Expect(lemma == curve, "trial " + std::to_string(trial) + ": lemma " + lemma.get_str() +
                                     " vs curve " + curve.get_str());
    check.Expect(Aupcr(x, profile, R) == curve, "trial " + std::to_string(trial) + ": library value");
  }
  return check.Done("lemma = curve = library on 100 random matchings; hand example " + hand.get_str());
}

Verdict PopularityAndSd() {
  Check check;
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const Instance inst = Market({{1, 2}, {1, 1}}, n);
    const PreferenceProfile profile = testing::RandomProfile(inst, rng, 1, 5, 2);
    const FractionalAssignment p = Bps(inst, profile);
    const FractionalAssignment q = EnumerateBrsdExact(inst, profile);
    const std::string t = "trial " + std::to_string(trial);
    check.Expect(Popularity(p, q, profile) == -Popularity(q, p, profile), t + ": not antisymmetric");
    check.Expect(Popularity(p, p, profile) == 0, t + ": pop(p, p) != 0");
    check.Expect(Popularity(q, q, profile) == 0, t + ": pop(q, q) != 0");
    const SdPreferCounts self = CountSdPreferences(p, p, profile);
    check.Expect(self.first == 0 && self.second == 0 && self.neither == n, t + ": self counts");
    const SdPreferCounts pq = CountSdPreferences(p, q, profile);
    const SdPreferCounts qp = CountSdPreferences(q, p, profile);
    check.Expect(pq.first == qp.second && pq.second == qp.first, t + ": counts not mirrored");
  }
  const Regression r = LoadRegression();
  const SdPreferCounts sd =
      CountSdPreferences(Bps(r.inst, r.profile), EnumerateBrsdExact(r.inst, r.profile), r.profile);
  check.Expect(sd.first >= sd.second, "regression counts BPS < BRSD");
  return check.Done("antisymmetry and self zeros exact on 60 markets; regression instance SD counts (" +
                    std::to_string(sd.first) + "|" + std::to_string(sd.second) + ")");
}

Verdict RevRepair() {
  Check check;
  std::mt19937_64 rng(10);
  const std::vector<std::string> items = {"A", "B", "C", "D"};
  std::vector<std::vector<std::string>> subsets;
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<std::string> b;
    for (int i = 0; i < 4; ++i) {
      if (mask >> i & 1) b.push_back(items[i]);
    }
    subsets.push_back(b);
  }
  int zero_gamma = 0, additive = 0;
  for (int trial = 0; trial < 40; ++trial) {
    // Arbitrary ranking at gamma = 0.
    auto order = subsets;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(2 + trial % 14);
    RevProblem p;
    p.ranking = order;
    p.gamma = 0;
    check.Expect(SolveRev(p).err == 0, "gamma 0 ranking with err > 0");
    ++zero_gamma;

    // Additive utilities, redrawn until consecutive gaps clear the margin.
    std::map<std::string, double> w;
    std::vector<std::vector<std::string>> sorted;
    auto value = [&](const std::vector<std::string>& b) {
      double v = 0;
      for (const auto& i : b) v += w[i];
      return v;
    };
    for (bool ok = false; !ok;) {
      for (const auto& i : items) w[i] = std::uniform_real_distribution<double>(0, 1)(rng);
      sorted = subsets;
      std::shuffle(sorted.begin(), sorted.end(), rng);
      sorted.resize(3 + trial % 13);
      std::sort(sorted.begin(), sorted.end(),
                [&](const auto& a, const auto& b) { return value(a) > value(b); });
      ok = true;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        ok = ok && value(sorted[k]) - value(sorted[k + 1]) >= 2e-3;
      }
    }
    RevProblem q;
    q.ranking = sorted;
    q.gamma = Rational(1, 1000);
    check.Expect(SolveRev(q).err == 0, "additive ranking with err > 0");
    ++additive;
  }
  // Elicited rankings at gamma = 0.
  const Elicited m = GenerateAndElicit(DeskConfig(1, 3));
  const Json doc = ProfileToJson(m.inst, m.profile);
  for (const auto& [student, ranking] : doc.items()) {
    if (ranking.size() < 2) continue;
    RevProblem p = RevProblemFromProfileJson(Json{{student, ranking}}, std::nullopt);
    p.gamma = 0;
    check.Expect(SolveRev(p).err == 0, "elicited ranking with err > 0 at gamma 0");
    ++zero_gamma;
  }
  RevProblem committed =
      RevProblemFromProfileJson(ParseDocument(ReadFile(COURSEALLOC_DATA_DIR "/rev_ranking.json")), std::nullopt);
  committed.gamma = Rational(1, 1000);
  const Rational err = SolveRev(committed).err;
  check.Expect(err > 0, "committed elicited ranking has err 0");
  return check.Done(std::to_string(zero_gamma) + " rankings at gamma 0 give err 0; " +
                    std::to_string(additive) + " additive rankings give err 0 at 1/1000; " +
                    "committed elicited ranking (" + std::to_string(committed.ranking.size()) +
                    " bundles) gives err " + err.get_str());
}

Verdict Scale() {
  Check check;
  GeneratorConfig c;
  c.seed = 1;
  c.students = 1700;
  c.classes = 4;
  c.groups_per_class = 30;
  c.capacity_min = c.capacity_max = 30;
  c.lectures_per_class = 0;
  c.class_select_prob = 0.6;
  c.restricted_day_prob = 0.7;
  c.min_lunch_choices = {0, 30, 45, 60};
  auto t0 = std::chrono::steady_clock::now();
  const Elicited m = GenerateAndElicit(c);
  const double elicit_secs = Seconds(t0);
  std::set<Bundle> distinct;
  for (int s = 0; s < m.inst.num_students(); ++s) {
    distinct.insert(m.profile.list(s).begin(), m.profile.list(s).end());
  }
  check.Expect(distinct.size() >= 20000, std::to_string(distinct.size()) + " distinct bundles");

  t0 = std::chrono::steady_clock::now();
  const FractionalAssignment x = Bps(m.inst, m.profile);
  const double bps_secs = Seconds(t0);
  check.Expect(bps_secs < 30.0, "BPS took " + Fmt(bps_secs, 2) + " s");
  check.Expect(ExactlyFeasible(m.inst, x), "BPS output infeasible");

  t0 = std::chrono::steady_clock::now();
  LotteryConfig config;
  config.epsilon = 2.0;
  const LotteryResult r = Decompose(m.inst, x, config);
  const double lottery_secs = Seconds(t0);
  check.Expect(lottery_secs < 45 * 60.0, "lottery took " + Fmt(lottery_secs, 1) + " s");
  CheckDecomposition(check, m.inst, x, r, 2.0, "scale");
  return check.Done("1700 students, 4 classes, " + std::to_string(distinct.size()) +
                    " distinct bundles: BPS " + Fmt(bps_secs, 2) + " s, lottery " +
                    Fmt(lottery_secs, 1) + " s (d = " + std::to_string(r.dimension) + ", " +
                    std::to_string(r.lottery.support.size()) + " matchings); elicitation " +
                    Fmt(elicit_secs, 1) + " s");
}

Verdict ElicitationWorkedExample() {
  Check check;
  auto slot = [](Weekday d, int h0, int m0, int h1, int m1) {
    return TimeSlot{d, 60 * h0 + m0, 60 * h1 + m1};
  };
  // One course on each of three days, or all three on Monday.
  const Instance inst = Instance::Create(
      {"a", "b", "c"},
      {{"a-1", "a", {slot(Weekday::kMon, 8, 0, 10, 0)}, 1},
       {"b-1", "b", {slot(Weekday::kTue, 8, 0, 10, 0)}, 1},
       {"c-1", "c", {slot(Weekday::kWed, 8, 0, 10, 0)}, 1},
       {"a-2", "a", {slot(Weekday::kMon, 8, 0, 10, 0)}, 1},
       {"b-2", "b", {slot(Weekday::kMon, 10, 30, 12, 30)}, 1},
       {"c-2", "c", {slot(Weekday::kMon, 13, 0, 15, 0)}, 1}},
      {}, {"s"});
  ElicitationParameters p;
  p.classes = {"a", "b", "c"};
  p.priority = {5, 5, 5, 5, 5};
  const ScoredBundle scattered = ScoreBundle(inst, p, Bundle({0, 1, 2}));
  const ScoredBundle dense = ScoreBundle(inst, p, Bundle({3, 4, 5}));
  const Rational s3 = scattered.per_day[0] + scattered.per_day[1] + scattered.per_day[2];
  const Rational d3 = dense.per_day[0] + dense.per_day[1] + dense.per_day[2];
  check.Expect(s3 == 15, "scattered days score " + s3.get_str());
  check.Expect(s3 < 25, "scattered not below 25");
  check.Expect(d3 > 80, "concentrated days score " + d3.get_str());
  return check.Done("three one-course days score " + s3.get_str() + " < 25; one full day plus two free days " +
                    Fmt(d3.get_d(), 2) + " > 80");
}

}  // namespace
}  // namespace coursealloc

int main(int argc, char** argv) {
  using namespace coursealloc;
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"BPS envy-freeness", BpsEnvyFree},
      {"BPS equals PS on unit demand", BpsEqualsPs},
      {"BPS feasibility", BpsFeasible},
      {"BRSD exactness", BrsdExactness},
      {"BRSD envy presence", BrsdEnvy},
      {"lottery decomposition", LotteryDecomposition},
      {"over-allocation statistics", OverAllocation},
      {"AUPCR", AupcrLemma},
      {"popularity and SD counts", PopularityAndSd},
      {"REV degeneracy and repair", RevRepair},
      {"scale", Scale},
      {"elicitation worked example", ElicitationWorkedExample},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  bool all_pass = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int number = static_cast<int>(k) + 1;
    if (!only.empty() && !only.count(number)) continue;
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && v.pass;
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", number, criteria[k].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
