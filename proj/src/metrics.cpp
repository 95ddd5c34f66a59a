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

#include "coursealloc/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "coursealloc/error.hpp"

namespace coursealloc {

namespace {

// Outcome levels: 1..L listed ranks, L+1 unmatched, L+2 any unlisted bundle.
struct Level {
  int level;
  Rational mass;
};

int LevelOf(const RankIndex& ranking, const Bundle& b, bool allow_unlisted) {
  int r = ranking.RankOf(b);
  if (r > 0) return r;
  if (!allow_unlisted) throw DataError("assigned bundle is missing from the ranking");
  return ranking.length() + 2;
}

void AppendLevels(std::span<const BundleShare> shares, const RankIndex& ranking,
                  bool allow_unlisted, int sign, std::vector<Level>& out) {
  Rational total = 0;
  for (const auto& share : shares) {
    total += share.p;
    out.push_back({LevelOf(ranking, share.bundle, allow_unlisted),
                   sign > 0 ? share.p : Rational(-share.p)});
  }
  Rational unmatched = 1 - total;
  out.push_back({ranking.length() + 1, sign > 0 ? unmatched : Rational(-unmatched)});
}

SdVerdict CompareImpl(std::span<const BundleShare> p, std::span<const BundleShare> q,
                      const RankIndex& ranking, bool allow_unlisted) {
  std::vector<Level> diff;
  diff.reserve(p.size() + q.size() + 2);
  AppendLevels(p, ranking, allow_unlisted, +1, diff);
  AppendLevels(q, ranking, allow_unlisted, -1, diff);
  std::sort(diff.begin(), diff.end(),
            [](const Level& a, const Level& b) { return a.level < b.level; });
  Rational cumulative = 0;
  bool p_ahead = false;
  bool q_ahead = false;
  for (std::size_t i = 0; i < diff.size(); ++i) {
    cumulative += diff[i].mass;
    if (i + 1 < diff.size() && diff[i + 1].level == diff[i].level) continue;
    if (cumulative > 0) p_ahead = true;
    if (cumulative < 0) q_ahead = true;
  }
  if (p_ahead && q_ahead) return SdVerdict::kIncomparable;
  if (p_ahead) return SdVerdict::kFirstDominates;
  if (q_ahead) return SdVerdict::kSecondDominates;
  return SdVerdict::kEqual;
}

// Expected phi over independent draws of the two outcome distributions.
Rational StudentPopularity(std::span<const BundleShare> p,
                           std::span<const BundleShare> q, const RankIndex& ranking) {
  std::vector<Level> mine, theirs;
  AppendLevels(p, ranking, true, +1, mine);
  AppendLevels(q, ranking, true, +1, theirs);
  std::sort(theirs.begin(), theirs.end(),
            [](const Level& a, const Level& b) { return a.level < b.level; });
  std::vector<Rational> prefix(theirs.size() + 1);
  for (std::size_t i = 0; i < theirs.size(); ++i) prefix[i + 1] = prefix[i] + theirs[i].mass;
  const Rational& total = prefix.back();
  Rational score = 0;
  for (const Level& a : mine) {
    if (a.mass == 0) continue;
    auto lo = std::lower_bound(theirs.begin(), theirs.end(), a.level,
                               [](const Level& l, int v) { return l.level < v; });
    auto hi = std::upper_bound(theirs.begin(), theirs.end(), a.level,
                               [](int v, const Level& l) { return v < l.level; });
    const Rational& better = prefix[lo - theirs.begin()];
    Rational worse = total - prefix[hi - theirs.begin()];
    score += a.mass * (worse - better);
  }
  return score;
}

void CheckSameStudents(const FractionalAssignment& p, const FractionalAssignment& q,
                       const PreferenceProfile& profile) {
  if (p.num_students() != profile.num_students() ||
      q.num_students() != profile.num_students()) {
    throw DataError("assignments and profile cover different student sets");
  }
}

std::string Percent(const Rational& share) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", share.get_d() * 100.0);
  return buf;
}

}  // namespace

std::string_view SdVerdictName(SdVerdict verdict) {
  switch (verdict) {
    case SdVerdict::kFirstDominates: return "first-dominates";
    case SdVerdict::kSecondDominates: return "second-dominates";
    case SdVerdict::kEqual: return "equal";
    case SdVerdict::kIncomparable: return "incomparable";
  }
  return "unknown";
}

SdVerdict SdCompare(std::span<const BundleShare> p, std::span<const BundleShare> q,
                    const RankIndex& ranking) {
  return CompareImpl(p, q, ranking, false);
}

SdVerdict SdCompareAllowUnlisted(std::span<const BundleShare> p,
                                 std::span<const BundleShare> q,
                                 const RankIndex& ranking) {
  return CompareImpl(p, q, ranking, true);
}

EnvyCounts CountEnvy(const FractionalAssignment& p, const PreferenceProfile& profile) {
  if (p.num_students() != profile.num_students()) {
    throw DataError("assignment and profile cover different student sets");
  }
  EnvyCounts counts;
  const int S = p.num_students();
  for (int i = 0; i < S; ++i) {
    RankIndex ranking(profile.list(i));
    bool strong = false;
    bool weak = false;
    for (int j = 0; j < S && !(strong && weak); ++j) {
      if (j == i) continue;
      SdVerdict v = SdCompareAllowUnlisted(p.row(i), p.row(j), ranking);
      if (v != SdVerdict::kFirstDominates && v != SdVerdict::kEqual) strong = true;
      if (v == SdVerdict::kSecondDominates) weak = true;
    }
    counts.strong += strong;
    counts.weak += weak;
  }
  return counts;
}

Rational Popularity(const FractionalAssignment& p, const FractionalAssignment& q,
                    const PreferenceProfile& profile) {
  CheckSameStudents(p, q, profile);
  Rational total = 0;
  for (int i = 0; i < profile.num_students(); ++i) {
    RankIndex ranking(profile.list(i));
    total += StudentPopularity(p.row(i), q.row(i), ranking);
  }
  return total;
}

SdPreferCounts CountSdPreferences(const FractionalAssignment& p,
                                  const FractionalAssignment& q,
                                  const PreferenceProfile& profile) {
  CheckSameStudents(p, q, profile);
  SdPreferCounts counts;
  for (int i = 0; i < profile.num_students(); ++i) {
    RankIndex ranking(profile.list(i));
    switch (SdCompare(p.row(i), q.row(i), ranking)) {
      case SdVerdict::kFirstDominates: ++counts.first; break;
      case SdVerdict::kSecondDominates: ++counts.second; break;
      default: ++counts.neither; break;
    }
  }
  return counts;
}

Rational Aupcr(const FractionalAssignment& p, const PreferenceProfile& profile,
               int ranks) {
  if (ranks < 1) throw DataError("AUPCR needs at least one rank");
  if (static_cast<std::size_t>(ranks) < profile.MaxListLength()) {
    throw DataError("AUPCR rank count is below the longest preference list");
  }
  SummaryOptions options;
  options.ranks = ranks;
  options.top_k.clear();
  options.envy = false;
  return Summarize(p, profile, options).aupcr;
}

MetricsReport Summarize(const FractionalAssignment& p, const PreferenceProfile& profile,
                        const SummaryOptions& options) {
  if (p.num_students() != profile.num_students()) {
    throw DataError("assignment and profile cover different student sets");
  }
  MetricsReport report;
  const int S = p.num_students();
  report.students = S;
  report.ranks = options.ranks > 0 ? options.ranks
                                   : static_cast<int>(profile.MaxListLength());
  std::vector<Rational> at_rank(std::max(report.ranks, 0) + 1);
  Rational unmatched_rank_sum = 0;
  for (int i = 0; i < S; ++i) {
    RankIndex ranking(profile.list(i));
    Rational mass = 0;
    for (const auto& share : p.row(i)) {
      int r = ranking.RankOf(share.bundle);
      if (r == 0) throw DataError("assigned bundle is missing from the ranking");
      if (r > report.ranks) throw DataError("rank exceeds the configured rank count");
      mass += share.p;
      report.rank_sum += share.p * r;
      at_rank[r] += share.p;
    }
    report.expected_size += mass;
    unmatched_rank_sum += (1 - mass) * (ranking.length() + 1);
  }
  if (report.expected_size != 0) report.expected_rank = report.rank_sum / report.expected_size;
  if (S > 0) {
    report.expected_rank_with_unmatched = (report.rank_sum + unmatched_rank_sum) / S;
  }
  Rational cumulative = 0;
  Rational area = 0;
  for (int r = 1; r <= report.ranks; ++r) {
    cumulative += at_rank[r];
    ProfileRow row;
    row.rank = r;
    row.match = S > 0 ? Rational(at_rank[r] / S) : Rational(0);
    row.cumulative = S > 0 ? Rational(cumulative / S) : Rational(0);
    area += row.cumulative;
    report.profile.push_back(std::move(row));
  }
  if (report.ranks > 0) report.aupcr = area / report.ranks;
  for (int k : options.top_k) {
    Rational top = 0;
    for (int r = 1; r <= std::min(k, report.ranks); ++r) top += at_rank[r];
    report.prob_top_k[k] = S > 0 ? Rational(top / S) : Rational(0);
  }
  if (options.envy) report.envy = CountEnvy(p, profile);
  return report;
}

Comparison Compare(const FractionalAssignment& p, const FractionalAssignment& q,
                   const PreferenceProfile& profile) {
  Comparison c;
  c.popularity = Popularity(p, q, profile);
  if (profile.num_students() > 0) c.popularity_per_student = c.popularity / profile.num_students();
  c.counts = CountSdPreferences(p, q, profile);
  return c;
}

Json MetricsToJson(const MetricsReport& report) {
  auto number = [](const Rational& q) {
    return Json{{"exact", ToString(q)}, {"value", q.get_d()}};
  };
  Json top = Json::object();
  for (const auto& [k, v] : report.prob_top_k) top[std::to_string(k)] = number(v);
  Json profile = Json::array();
  for (const auto& row : report.profile) {
    profile.push_back(Json{{"rank", row.rank},
                           {"match", number(row.match)},
                           {"cumulative", number(row.cumulative)}});
  }
  Json doc = {{"students", report.students},
              {"ranks", report.ranks},
              {"expected_size", number(report.expected_size)},
              {"expected_rank", number(report.expected_rank)},
              {"expected_rank_with_unmatched", number(report.expected_rank_with_unmatched)},
              {"rank_sum", number(report.rank_sum)},
              {"prob_top_k", std::move(top)},
              {"aupcr", number(report.aupcr)},
              {"profile", std::move(profile)}};
  if (report.envy) {
    doc["envy"] = Json{{"strong", report.envy->strong}, {"weak", report.envy->weak}};
  }
  if (report.against) {
    const Comparison& c = *report.against;
    doc["against"] = Json{
        {"popularity", number(c.popularity)},
        {"popularity_per_student", number(c.popularity_per_student)},
        {"sd_prefer", Json{{"first", c.counts.first},
                           {"second", c.counts.second},
                           {"neither", c.counts.neither}}},
        {"sd_prefer_text", "(" + std::to_string(c.counts.first) + "|" +
                               std::to_string(c.counts.second) + ")"}};
  }
  return doc;
}

std::string ProfileCsv(const MetricsReport& report) {
  std::ostringstream out;
  out << "Rank,Prob match(%),AUPC in (%)\n";
  for (const auto& row : report.profile) {
    out << row.rank << ',' << Percent(row.match) << ',' << Percent(row.cumulative) << '\n';
  }
  return out.str();
}

}  // namespace coursealloc
