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

// Bundle generation and scoring from a handful of schedule parameters.
//
// A student names the classes they need, the lectures they attend, when
// they are available and how much they like each weekday. Every bundle
// with one group per selected class that satisfies the hard constraints
// is generated, scored day by day and sorted.

#ifndef COURSEALLOC_ELICITATION_HPP_
#define COURSEALLOC_ELICITATION_HPP_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coursealloc/model.hpp"
#include "coursealloc/serialize.hpp"

namespace coursealloc {

// Minute interval [first, second).
using Interval = std::pair<int, int>;

struct ScoreTables {
  // (upper bound on span in minutes, points), ascending; spans above the
  // last bound are infeasible.
  std::vector<std::pair<int, Rational>> span_points = {
      {120, 1}, {240, 2}, {360, 3}, {480, 4}, {600, 2}};
  // (lower bound on lunch minutes, points), ascending from 0.
  std::vector<std::pair<int, Rational>> lunch_points = {
      {0, 0}, {30, 1}, {45, Rational(3, 2)}, {60, 2}, {75, 1}};
  Rational free_day = 30;

  int MaxSpan() const { return span_points.back().first; }
};

struct ElicitationParameters {
  std::vector<std::string> classes;
  std::vector<std::string> lectures;  // class ids whose lectures are attended
  // Tutorial availability per weekday; nullopt leaves the day unrestricted.
  std::array<std::optional<std::vector<Interval>>, kNumWeekdays> ranges;
  std::array<int, kNumWeekdays> priority = {1, 1, 1, 1, 1};
  int min_lunch = 0;
  int min_gap = 15;
  Interval lunch_window = {660, 870};
  int max_bundles = 200;
  ScoreTables tables;
};

// Throws DataError on out-of-range values or unknown class ids.
void ValidateParameters(const Instance& instance,
                        const ElicitationParameters& params);

ElicitationParameters ParametersFromJson(const Json& doc);
Json ParametersToJson(const ElicitationParameters& params);

struct DaySchedule {
  std::vector<TimeSlot> events;  // sorted by start
  int w = 0;                     // attended minutes (union of events)
  int sp = 0;                    // first start to last end
  int lunch = 0;                 // minutes of the best gap inside the window
  std::vector<Interval> gaps;    // idle intervals between events

  bool empty() const { return events.empty(); }
};

DaySchedule BuildDaySchedule(std::vector<TimeSlot> events,
                             const Interval& lunch_window);

// Free day: tables.free_day, independent of prio. Throws DataError when
// the span exceeds the table.
Rational DayScore(const DaySchedule& schedule, int prio,
                  const ScoreTables& tables = {});

struct ScoredBundle {
  Bundle bundle;
  Rational score;
  std::array<Rational, kNumWeekdays> per_day;
};

// Exactly the bundles with one group per selected class that pass every
// hard constraint, in lexicographic order of group index.
std::vector<Bundle> GenerateFeasibleBundles(const Instance& instance,
                                            const ElicitationParameters& params);

// Hard-constraint check for a single bundle; empty string when feasible.
std::string CheckBundle(const Instance& instance,
                        const ElicitationParameters& params,
                        const Bundle& bundle);

// Throws DataError when the bundle is infeasible.
ScoredBundle ScoreBundle(const Instance& instance,
                         const ElicitationParameters& params,
                         const Bundle& bundle);

// Best first; ties by the sorted group-id lists; at most max_bundles.
std::vector<ScoredBundle> RankBundles(const Instance& instance,
                                      const ElicitationParameters& params);

// One ranking per student, computed on `threads` workers.
PreferenceProfile ElicitProfile(const Instance& instance,
                                const std::vector<ElicitationParameters>& params,
                                int threads = 1);

}  // namespace coursealloc

#endif  // COURSEALLOC_ELICITATION_HPP_
