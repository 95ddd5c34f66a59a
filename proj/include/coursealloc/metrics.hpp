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

// Evaluation metrics for random assignments.
//
// Outcomes of a student are ordered: listed bundles by rank, then
// unmatched, then every unlisted bundle (all tied). All metrics are exact
// in rational arithmetic.

#ifndef COURSEALLOC_METRICS_HPP_
#define COURSEALLOC_METRICS_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coursealloc/model.hpp"
#include "coursealloc/serialize.hpp"

namespace coursealloc {

enum class SdVerdict { kFirstDominates, kSecondDominates, kEqual, kIncomparable };

std::string_view SdVerdictName(SdVerdict verdict);

// First-order stochastic dominance of p over q for one student's ranking.
// Throws DataError when either support holds a bundle missing from the
// ranking.
SdVerdict SdCompare(std::span<const BundleShare> p,
                    std::span<const BundleShare> q, const RankIndex& ranking);

// As SdCompare, but bundles missing from the ranking are accepted and
// rank below being unmatched. Used when comparing another student's share.
SdVerdict SdCompareAllowUnlisted(std::span<const BundleShare> p,
                                 std::span<const BundleShare> q,
                                 const RankIndex& ranking);

struct EnvyCounts {
  int strong = 0;  // students not SD-preferring their share to every other
  int weak = 0;    // students strictly SD-dominated by some other share

  bool operator==(const EnvyCounts&) const = default;
};

EnvyCounts CountEnvy(const FractionalAssignment& p,
                     const PreferenceProfile& profile);

// sum_i sum_{b,b'} p_ib q_ib' phi_i(b, b'), unmatched included as an
// outcome. Antisymmetric.
Rational Popularity(const FractionalAssignment& p, const FractionalAssignment& q,
                    const PreferenceProfile& profile);

struct SdPreferCounts {
  int first = 0;    // students whose share under p SD-dominates q
  int second = 0;   // ... q dominates p
  int neither = 0;  // equal or incomparable

  bool operator==(const SdPreferCounts&) const = default;
};

SdPreferCounts CountSdPreferences(const FractionalAssignment& p,
                                  const FractionalAssignment& q,
                                  const PreferenceProfile& profile);

// (1/R) sum_{r=1..R} (expected matches with rank <= r) / |S|.
Rational Aupcr(const FractionalAssignment& p, const PreferenceProfile& profile,
               int ranks);

struct ProfileRow {
  int rank = 0;
  Rational match;       // share of students matched at exactly this rank
  Rational cumulative;  // share matched at this rank or better
};

struct Comparison {
  Rational popularity;
  Rational popularity_per_student;
  SdPreferCounts counts;
};

struct MetricsReport {
  int students = 0;
  int ranks = 0;
  Rational expected_size;
  Rational rank_sum;                   // sum p_ib * rank_i(b)
  Rational expected_rank;              // rank_sum / expected_size
  Rational expected_rank_with_unmatched;  // unmatched at list length + 1, per student
  std::map<int, Rational> prob_top_k;
  std::vector<ProfileRow> profile;
  Rational aupcr;
  std::optional<EnvyCounts> envy;
  std::optional<Comparison> against;
};

struct SummaryOptions {
  std::vector<int> top_k = {1, 10, 100};
  int ranks = 0;  // 0: longest preference list
  bool envy = true;
};

MetricsReport Summarize(const FractionalAssignment& p,
                        const PreferenceProfile& profile,
                        const SummaryOptions& options = {});

Comparison Compare(const FractionalAssignment& p, const FractionalAssignment& q,
                   const PreferenceProfile& profile);

Json MetricsToJson(const MetricsReport& report);

// Rank, match percentage and cumulative (AUPC) percentage per rank.
std::string ProfileCsv(const MetricsReport& report);

}  // namespace coursealloc

#endif  // COURSEALLOC_METRICS_HPP_
